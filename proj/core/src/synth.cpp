#include "satoc/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

namespace satoc {

Layout oracle_layout(const CnfFormula& f, uint32_t l) {
  return Layout{f.num_vars, l, 1};
}

namespace {

// Clause gadget with an explicit literal -> qubit mapping (depth mode routes
// literals through fanout copies). Width 1 is a bare polarity CNOT; wider
// clauses are one MCT firing when every literal is false, plus X on target.
void emit_clause_gadget(const Clause& clause, const std::vector<QubitId>& slots,
                        QubitId target, std::vector<QubitId> borrow_hint,
                        GateSink& sink) {
  if (clause.size() == 1) {
    sink.on_gate(Gate::cnot(slots[0], target, clause[0].negated));
    return;
  }
  std::vector<bool> negated(clause.size());
  for (size_t i = 0; i < clause.size(); ++i) negated[i] = !clause[i].negated;
  Gate g = Gate::mct(slots, target, negated);
  g.borrow_hint = std::move(borrow_hint);
  sink.on_gate(g);
  sink.on_gate(Gate::x(target));
}

std::vector<QubitId> direct_slots(const Clause& clause) {
  std::vector<QubitId> slots;
  slots.reserve(clause.size());
  for (const auto& lit : clause) slots.push_back(QubitId::input(lit.variable - 1));
  return slots;
}

// Balanced partition of [begin, end) into `parts` ranges (sizes differ by <= 1).
std::vector<std::pair<uint32_t, uint32_t>> split_range(uint32_t begin, uint32_t end,
                                                       uint32_t parts) {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  uint32_t count = end - begin, base = count / parts, extra = count % parts;
  uint32_t at = begin;
  for (uint32_t i = 0; i < parts; ++i) {
    uint32_t len = base + (i < extra ? 1 : 0);
    out.emplace_back(at, at + len);
    at += len;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Size-oriented recursion.

class SizeSynth {
 public:
  SizeSynth(const CnfFormula& f, uint32_t l, const SynthOptions& opts)
      : f_(f), l_(l), opts_(opts) {
    use_variant_ = opts.variant == VariantSelect::SmallAncilla ||
                   (opts.variant == VariantSelect::Auto &&
                    l <= opts.variant_auto_threshold);
  }

  void run(GateSink& sink) {
    const uint32_t m = f_.num_clauses();
    if (m == 1) {
      emit_clause_gadget(f_.clauses[0], direct_slots(f_.clauses[0]),
                         QubitId::target(), {}, sink);
      return;
    }
    if (opts_.clean_ancillas) {
      uint32_t b = std::min(l_ / 2, m);
      if (b >= 2) {
        // Clean outermost merge: block values land on |0> ancillas, one MCT
        // folds them onto the target, then the blocks uncompute. Each block
        // is emitted twice instead of the gadget's four oracle calls.
        auto blocks = split_range(0, m, b);
        std::vector<QubitId> holders;
        for (uint32_t j = 0; j < b; ++j) holders.push_back(QubitId::ancilla(j));
        for (uint32_t j = 0; j < b; ++j)
          emit_block(blocks[j].first, blocks[j].second, holders[j], sink);
        sink.on_gate(Gate::mct(holders, QubitId::target()));
        for (uint32_t j = 0; j < b; ++j)
          emit_block(blocks[j].first, blocks[j].second, holders[j], sink);
        return;
      }
    }
    emit_block(0, m, QubitId::target(), sink);
  }

 private:
  // Scratch pool for a call: every ancilla plus the enclosing target, minus
  // the call's own target. Dirty borrowing restores them, so a full pool of
  // l qubits exists at every recursion level.
  std::vector<QubitId> pool_for(QubitId target) const {
    std::vector<QubitId> pool;
    pool.reserve(l_ + 1);
    for (uint32_t i = 0; i < l_; ++i) {
      QubitId q = QubitId::ancilla(i);
      if (q != target) pool.push_back(q);
    }
    if (QubitId::target() != target) pool.push_back(QubitId::target());
    return pool;
  }

  void append_idle_inputs(uint32_t begin, uint32_t end,
                          std::vector<QubitId>& pool) const {
    std::vector<bool> touched(f_.num_vars, false);
    for (uint32_t a = begin; a < end; ++a)
      for (const auto& lit : f_.clauses[a]) touched[lit.variable - 1] = true;
    for (uint32_t v = 0; v < f_.num_vars; ++v)
      if (!touched[v]) pool.push_back(QubitId::input(v));
  }

  void emit_block(uint32_t begin, uint32_t end, QubitId target, GateSink& sink) {
    const uint32_t count = end - begin;
    if (count == 1) {
      emit_clause_gadget(f_.clauses[begin], direct_slots(f_.clauses[begin]),
                         target, {}, sink);
      return;
    }
    if (use_variant_)
      emit_variant_block(begin, end, target, sink);
    else
      emit_gand_block(begin, end, target, sink);
  }

  void emit_gand_block(uint32_t begin, uint32_t end, QubitId target, GateSink& sink) {
    const uint32_t count = end - begin;
    std::vector<QubitId> pool = pool_for(target);
    if (opts_.reuse_idle_inputs) append_idle_inputs(begin, end, pool);

    uint32_t p = std::min<uint32_t>(static_cast<uint32_t>(pool.size()) / 2 + 1, count);
    GandPlan plan;
    plan.p = p;
    plan.target = target;
    plan.ancillas.assign(pool.begin(), pool.begin() + (2 * p - 2));
    plan.mode = GandMode::And;

    auto blocks = split_range(begin, end, p);
    std::vector<OracleBuilder> oracles;
    oracles.reserve(p);
    for (uint32_t i = 0; i < p; ++i) {
      auto [sb, se] = blocks[i];
      oracles.push_back(OracleBuilder{[this, sb, se](QubitId t, GateSink& s) {
        emit_block(sb, se, t, s);
      }});
    }
    build_gand(plan, oracles, sink);
  }

  // Small-pool recursion: all pool qubits control the target and the sub-oracles
  // toggle through a closed Gray cycle, so the 2^b products telescope to
  // the AND of the b block values. Worth it only for very small pools.
  void emit_variant_block(uint32_t begin, uint32_t end, QubitId target, GateSink& sink) {
    const uint32_t count = end - begin;
    std::vector<QubitId> pool = pool_for(target);
    uint32_t b = std::min<uint32_t>({static_cast<uint32_t>(pool.size()), count, 12u});
    std::vector<QubitId> controls(pool.begin(), pool.begin() + b);
    auto blocks = split_range(begin, end, b);

    const uint64_t steps = uint64_t(1) << b;
    for (uint64_t j = 1; j <= steps; ++j) {
      sink.on_gate(Gate::mct(controls, target));
      uint32_t toggle = j < steps ? static_cast<uint32_t>(std::countr_zero(j)) : b - 1;
      emit_block(blocks[toggle].first, blocks[toggle].second, controls[toggle], sink);
    }
  }

  const CnfFormula& f_;
  uint32_t l_;
  const SynthOptions& opts_;
  bool use_variant_ = false;
};

// ---------------------------------------------------------------------------
// Depth-oriented recursion.

class DepthSynth {
 public:
  DepthSynth(const CnfFormula& f, const RegisterPartition& part)
      : f_(f), part_(part) {
    uint32_t at = 0;
    for (uint32_t i = 0; i < part.mem; ++i) mem_.push_back(QubitId::ancilla(at++));
    for (uint32_t i = 0; i < part.dirty; ++i) dirty_.push_back(QubitId::ancilla(at++));
    for (uint32_t i = 0; i < part.clean; ++i) clean_.push_back(QubitId::ancilla(at++));
  }

  void run(GateSink& sink) {
    const uint32_t m = f_.num_clauses();
    if (m == 1) {
      emit_clause_gadget(f_.clauses[0], direct_slots(f_.clauses[0]),
                         QubitId::target(), {}, sink);
      return;
    }
    if (m <= plan_capacity(QubitId::target())) {
      emit_innermost(0, m, QubitId::target(), sink);
      return;
    }
    // Clean outermost level: block values on q_dirty holders, folded onto the
    // target through a log-depth Toffoli tree over q_clean internals. Block
    // sizes respect the holder capacity (one dirty qubit fewer than at top).
    const uint32_t hcap = plan_capacity(dirty_[0]);
    const uint32_t b_max = std::min<uint32_t>(
        {part_.dirty, part_.clean + 2, m});
    uint32_t b = std::clamp<uint32_t>((m + hcap - 1) / hcap, 2, b_max);
    auto blocks = split_range(0, m, b);
    std::vector<QubitId> holders(dirty_.begin(), dirty_.begin() + b);

    for (uint32_t j = 0; j < b; ++j)
      emit_block(blocks[j].first, blocks[j].second, holders[j], sink);
    std::vector<Gate> internals;
    emit_merge_tree(holders, QubitId::target(), 0, sink, &internals);
    for (auto it = internals.rbegin(); it != internals.rend(); ++it)
      sink.on_gate(*it);
    for (uint32_t j = 0; j < b; ++j)
      emit_block(blocks[j].first, blocks[j].second, holders[j], sink);
  }

 private:
  uint32_t capacity_for(QubitId target) const {
    uint32_t avail = static_cast<uint32_t>(dirty_.size());
    for (const auto& q : dirty_)
      if (q == target) { --avail; break; }
    uint32_t pairs_max = avail / 2;
    uint32_t g_max = std::min(pairs_max, (part_.clean + 2) / 2);
    return 2 * g_max;
  }

  // Gadget count whose variable demand the copy capacity can absorb: beyond
  // it, parallel gadgets contend on shared inputs and the Clause stage
  // serializes. About 2gk variable reads must fit n originals plus the
  // copies q_mem and idle q_clean can hold.
  uint32_t fanout_cap() const {
    uint32_t k = std::max<uint32_t>(1, f_.width());
    uint64_t per_gadget = std::min<uint64_t>(2 * uint64_t(k), f_.num_vars);
    uint64_t budget = uint64_t(part_.clean) + part_.mem + f_.num_vars + 2;
    uint64_t g = budget / (per_gadget + 2);
    return 2 * std::max<uint32_t>(1, static_cast<uint32_t>(g));
  }

  uint32_t plan_capacity(QubitId target) const {
    return std::min(capacity_for(target), fanout_cap());
  }

  void emit_block(uint32_t begin, uint32_t end, QubitId target, GateSink& sink) {
    const uint32_t count = end - begin;
    if (count == 1) {
      emit_clause_gadget(f_.clauses[begin], direct_slots(f_.clauses[begin]),
                         target, {}, sink);
      return;
    }
    if (count <= plan_capacity(target)) {
      emit_innermost(begin, end, target, sink);
      return;
    }
    // Framework recursion over q_dirty, same shape as the size recursion.
    std::vector<QubitId> pool;
    for (const auto& q : dirty_)
      if (q != target) pool.push_back(q);
    if (QubitId::target() != target) pool.push_back(QubitId::target());

    uint32_t p = std::min<uint32_t>(static_cast<uint32_t>(pool.size()) / 2 + 1, count);
    GandPlan plan;
    plan.p = p;
    plan.target = target;
    plan.ancillas.assign(pool.begin(), pool.begin() + (2 * p - 2));

    auto blocks = split_range(begin, end, p);
    std::vector<OracleBuilder> oracles;
    oracles.reserve(p);
    for (uint32_t i = 0; i < p; ++i) {
      auto [sb, se] = blocks[i];
      oracles.push_back(OracleBuilder{[this, sb, se](QubitId t, GateSink& s) {
        emit_block(sb, se, t, s);
      }});
    }
    build_gand(plan, oracles, sink);
  }

  // One parallel level: Copy (fanout trees into q_mem + spare q_clean),
  // Clause (pair gadgets side by side), Merge (Toffoli tree), Reset
  // (un-merge internals, repeat Clause, reverse Copy).
  void emit_innermost(uint32_t begin, uint32_t end, QubitId target, GateSink& sink) {
    const uint32_t count = end - begin;
    struct Gadget {
      uint32_t first;              // clause index
      bool is_pair;
      QubitId out;                 // leaf (or the block target when alone)
      QubitId scratch0, scratch1;  // pair gadgets only
    };

    std::vector<QubitId> scratch;
    for (const auto& q : dirty_)
      if (q != target) scratch.push_back(q);

    const uint32_t n_gadgets = (count + 1) / 2;
    if (n_gadgets == 1) {
      // Single pair straight onto the (possibly dirty) target; no stages.
      pair_gadget(begin, target, scratch[0], scratch[1], nullptr, sink);
      return;
    }

    std::vector<Gadget> gadgets;
    uint32_t next_scratch = 0;
    for (uint32_t g = 0; g < n_gadgets; ++g) {
      Gadget gd;
      gd.first = begin + 2 * g;
      gd.is_pair = gd.first + 1 < end;
      gd.out = clean_[g];
      if (gd.is_pair) {
        gd.scratch0 = scratch[next_scratch++];
        gd.scratch1 = scratch[next_scratch++];
      }
      gadgets.push_back(gd);
    }

    // Fanout plan: q_mem plus whatever q_clean the merge tree leaves idle.
    const uint32_t tree_clean = 2 * n_gadgets - 2;
    std::vector<QubitId> copy_qubits = mem_;
    for (size_t i = tree_clean; i < clean_.size(); ++i)
      copy_qubits.push_back(clean_[i]);

    std::vector<std::vector<uint32_t>> gadget_vars(gadgets.size());
    for (size_t g = 0; g < gadgets.size(); ++g) {
      std::set<uint32_t> vars;
      for (uint32_t c = gadgets[g].first;
           c < gadgets[g].first + (gadgets[g].is_pair ? 2u : 1u); ++c)
        for (const auto& lit : f_.clauses[c]) vars.insert(lit.variable);
      gadget_vars[g].assign(vars.begin(), vars.end());
    }
    FanoutTable fanout = plan_fanout(gadget_vars, f_.num_vars,
                                     static_cast<uint32_t>(copy_qubits.size()));

    // Slot assignment: per variable, readers cycle through original + copies.
    std::vector<std::vector<QubitId>> slots(f_.num_vars);
    uint32_t next_copy = 0;
    for (uint32_t v = 0; v < f_.num_vars; ++v) {
      slots[v].push_back(QubitId::input(v));
      for (uint32_t c = 1; c < fanout.copies[v]; ++c)
        slots[v].push_back(copy_qubits[next_copy++]);
    }
    std::vector<uint32_t> rr(f_.num_vars, 0);
    std::vector<std::vector<QubitId>> gadget_slot(gadgets.size());
    // gadget_slot[g][j] = qubit carrying gadget g's j-th distinct variable
    for (size_t g = 0; g < gadgets.size(); ++g)
      for (uint32_t v : gadget_vars[g]) {
        gadget_slot[g].push_back(slots[v - 1][rr[v - 1] % slots[v - 1].size()]);
        ++rr[v - 1];
      }

    auto slot_of = [&](size_t g, uint32_t var) {
      const auto& vars = gadget_vars[g];
      size_t idx = static_cast<size_t>(
          std::lower_bound(vars.begin(), vars.end(), var) - vars.begin());
      return gadget_slot[g][idx];
    };

    // Copy stage: doubling CNOT trees, log2(max copies) layers.
    std::vector<Gate> copy_gates;
    for (uint32_t v = 0; v < f_.num_vars; ++v) {
      if (fanout.copies[v] < 2) continue;
      std::vector<QubitId> sources{slots[v][0]};
      uint32_t made = 0;
      while (made + 1 < fanout.copies[v]) {
        size_t have = sources.size();
        for (size_t s = 0; s < have && made + 1 < fanout.copies[v]; ++s) {
          QubitId dst = slots[v][1 + made];
          copy_gates.push_back(Gate::cnot(sources[s], dst));
          sources.push_back(dst);
          ++made;
        }
      }
    }
    auto emit_clause_stage = [&](GateSink& s) {
      for (size_t g = 0; g < gadgets.size(); ++g) {
        const Gadget& gd = gadgets[g];
        if (gd.is_pair) {
          pair_gadget(gd.first, gd.out, gd.scratch0, gd.scratch1,
                      [&](uint32_t var) { return slot_of(g, var); }, s);
        } else {
          const Clause& clause = f_.clauses[gd.first];
          std::vector<QubitId> cs;
          for (const auto& lit : clause) cs.push_back(slot_of(g, lit.variable));
          emit_clause_gadget(clause, cs, gd.out, {}, s);
        }
      }
    };

    for (const auto& g : copy_gates) sink.on_gate(g);
    emit_clause_stage(sink);

    std::vector<QubitId> leaves;
    for (const auto& gd : gadgets) leaves.push_back(gd.out);
    std::vector<Gate> internals;
    emit_merge_tree(leaves, target, leaves.size(), sink, &internals);

    // Reset: un-merge internals, clear leaves, reverse the fanout.
    for (auto it = internals.rbegin(); it != internals.rend(); ++it)
      sink.on_gate(*it);
    emit_clause_stage(sink);
    for (auto it = copy_gates.rbegin(); it != copy_gates.rend(); ++it)
      sink.on_gate(*it);
  }

  // Folds `values` onto `target` with a binary Toffoli tree; internal nodes
  // take fresh q_clean qubits and are returned for the un-merge. Internal
  // Toffolis sit in clean compute/uncompute pairs, so they are phase-safe;
  // the root (which hits the possibly-dirty target once) is not.
  void emit_merge_tree(const std::vector<QubitId>& values, QubitId target,
                       size_t internal_base, GateSink& sink,
                       std::vector<Gate>* internals) {
    if (values.size() == 1) {
      sink.on_gate(Gate::cnot(values[0], target));
      return;
    }
    std::vector<QubitId> level = values;
    size_t next_internal = internal_base;
    while (level.size() > 2) {
      std::vector<QubitId> next;
      size_t i = 0;
      for (; i + 1 < level.size(); i += 2) {
        QubitId node = clean_[next_internal++];
        Gate g = Gate::toffoli(level[i], level[i + 1], node);
        g.phase_safe = true;
        sink.on_gate(g);
        internals->push_back(g);
        next.push_back(node);
      }
      if (i < level.size()) next.push_back(level[i]);
      level = std::move(next);
    }
    sink.on_gate(Gate::toffoli(level[0], level[1], target));
  }

  // Pair gadget: 4 Toffolis on (p0, p1 -> y) with each clause oracle
  // called twice; nets y xor= C_a AND C_b with both scratch qubits restored.
  void pair_gadget(uint32_t first_clause, QubitId y, QubitId p0, QubitId p1,
                   const std::function<QubitId(uint32_t)>& slot_of, GateSink& sink) {
    const Clause& a = f_.clauses[first_clause];
    const Clause& b = f_.clauses[first_clause + 1];
    auto clause_onto = [&](const Clause& c, QubitId t, QubitId other) {
      std::vector<QubitId> cs;
      for (const auto& lit : c)
        cs.push_back(slot_of ? slot_of(lit.variable)
                             : QubitId::input(lit.variable - 1));
      std::vector<QubitId> hint{other, y};
      emit_clause_gadget(c, cs, t, std::move(hint), sink);
    };
    Gate tof = Gate::toffoli(p0, p1, y);
    sink.on_gate(tof);
    clause_onto(a, p0, p1);
    sink.on_gate(tof);
    clause_onto(b, p1, p0);
    sink.on_gate(tof);
    clause_onto(a, p0, p1);
    sink.on_gate(tof);
    clause_onto(b, p1, p0);
  }

  const CnfFormula& f_;
  RegisterPartition part_;
  std::vector<QubitId> mem_, dirty_, clean_;
};

void check_entry(const CnfFormula& f, uint32_t l) {
  if (l < 3)
    throw ConfigError("synthesis requires l >= 3 ancillary qubits, got " +
                      std::to_string(l), 3);
  if (f.clauses.empty()) throw ConfigError("empty formula: nothing to synthesize");
  if (f.num_vars == 0) throw ConfigError("formula declares zero variables");
}

}  // namespace

void synth_clause(const Clause& clause, QubitId target, GateSink& sink) {
  if (clause.empty()) throw ConfigError("empty clause has no gadget");
  emit_clause_gadget(clause, direct_slots(clause), target, {}, sink);
}

Circuit synth_clause(const Clause& clause, QubitId target, const Layout& layout) {
  Circuit c(layout, Level::MctLevel);
  synth_clause(clause, target, c);
  return c;
}

void synth_size_emit(const CnfFormula& f, uint32_t l, const SynthOptions& opts,
                     GateSink& sink) {
  check_entry(f, l);
  SizeSynth(f, l, opts).run(sink);
}

Circuit synth_size(const CnfFormula& f, uint32_t l, const SynthOptions& opts) {
  Circuit c(oracle_layout(f, l), Level::MctLevel);
  synth_size_emit(f, l, opts, c);
  return c;
}

RegisterPartition RegisterPartition::plan(uint32_t l, uint32_t k) {
  RegisterPartition p;
  if (l < 2) return p;
  double s = std::ceil(static_cast<double>(k) / std::log2(static_cast<double>(l)));
  p.parallelism = std::max<uint32_t>(1, static_cast<uint32_t>(s));
  p.mem = (p.parallelism - 1) * l / (p.parallelism + 1);
  p.dirty = l / (p.parallelism + 1);
  p.clean = l - p.mem - p.dirty;  // remainder lands in the merge register
  return p;
}

uint32_t min_depth_ancillas(uint32_t k) {
  for (uint32_t l = 3; l < 1u << 20; ++l)
    if (RegisterPartition::plan(l, k).feasible()) return l;
  return 0;
}

FanoutTable plan_fanout(const std::vector<std::vector<uint32_t>>& gadget_vars,
                        uint32_t num_vars, uint32_t capacity) {
  FanoutTable t;
  t.copies.assign(num_vars, 1);
  std::vector<uint32_t> demand(num_vars, 0);
  for (const auto& vars : gadget_vars)
    for (uint32_t v : vars) ++demand[v - 1];

  // Greedy: always split the variable whose readers-per-copy load is worst.
  auto load = [&](uint32_t v) {
    return (demand[v] + t.copies[v] - 1) / t.copies[v];
  };
  auto cmp = [&](uint32_t a, uint32_t b) {
    if (load(a) != load(b)) return load(a) < load(b);
    return a > b;
  };
  std::priority_queue<uint32_t, std::vector<uint32_t>, decltype(cmp)> heap(cmp);
  for (uint32_t v = 0; v < num_vars; ++v)
    if (demand[v] > 1) heap.push(v);
  uint32_t budget = capacity;
  while (budget > 0 && !heap.empty()) {
    uint32_t v = heap.top();
    heap.pop();
    if (load(v) <= 1) break;
    ++t.copies[v];
    ++t.total_extra;
    --budget;
    if (t.copies[v] < demand[v]) heap.push(v);
  }
  return t;
}

void synth_depth_emit(const CnfFormula& f, uint32_t l, const SynthOptions&,
                      GateSink& sink) {
  check_entry(f, l);
  RegisterPartition part = RegisterPartition::plan(l, f.width());
  if (!part.feasible())
    throw ConfigError(
        "depth-oriented partition infeasible with l=" + std::to_string(l) +
            " for clause width " + std::to_string(f.width()) +
            "; requires l >= " + std::to_string(min_depth_ancillas(f.width())),
        min_depth_ancillas(f.width()));
  DepthSynth(f, part).run(sink);
}

Circuit synth_depth(const CnfFormula& f, uint32_t l, const SynthOptions& opts) {
  check_entry(f, l);
  RegisterPartition part = RegisterPartition::plan(l, f.width());
  if (!part.feasible() && opts.depth_fallback_to_size) return synth_size(f, l, opts);
  Circuit c(oracle_layout(f, l), Level::MctLevel);
  synth_depth_emit(f, l, opts, c);
  return c;
}

SynthResult synth_emit(const CnfFormula& f, uint32_t l, SynthMode mode,
                       const SynthOptions& opts, GateSink& sink) {
  SynthResult r{mode, false};
  if (mode == SynthMode::Size) {
    synth_size_emit(f, l, opts, sink);
    return r;
  }
  check_entry(f, l);
  if (!RegisterPartition::plan(l, f.width()).feasible()) {
    if (!opts.depth_fallback_to_size) {
      synth_depth_emit(f, l, opts, sink);  // throws with the minimal l
      return r;
    }
    r.depth_fell_back = true;
    synth_size_emit(f, l, opts, sink);
    return r;
  }
  synth_depth_emit(f, l, opts, sink);
  return r;
}

}  // namespace satoc
