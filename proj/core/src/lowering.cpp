#include "satoc/lowering.hpp"

#include <algorithm>

namespace satoc {

namespace {

// Chain body shared by both halves of the V construction: walks the borrow
// ladder down to the Toffoli on (c1, c2) and back up. Every gate here is
// paired with an identical one whose qubits carry the same values (up to the
// gate's own target flip), so the Margolus relative phase cancels: all body
// gates are phase-safe.
void emit_chain_body(const std::vector<QubitId>& c, const std::vector<QubitId>& b,
                     GateSink& out) {
  const size_t a = c.size();
  for (size_t j = a - 1; j >= 3; --j) {
    Gate g = Gate::toffoli(c[j - 1], b[j - 3], b[j - 2]);
    g.phase_safe = true;
    out.on_gate(g);
  }
  Gate mid = Gate::toffoli(c[0], c[1], b[0]);
  mid.phase_safe = true;
  out.on_gate(mid);
  for (size_t j = 3; j <= a - 1; ++j) {
    Gate g = Gate::toffoli(c[j - 1], b[j - 3], b[j - 2]);
    g.phase_safe = true;
    out.on_gate(g);
  }
}

}  // namespace

MctLowerer::MctLowerer(GateSink& out, const Layout& layout, LoweringConfig cfg)
    : out_(out), layout_(layout), cfg_(cfg) {}

void MctLowerer::on_gate(const Gate& g) {
  if (g.kind != GateKind::Mct) {
    out_.on_gate(g);
    return;
  }
  lower_mct(g);
}

std::vector<QubitId> MctLowerer::pick_borrows(const Gate& g, size_t want) const {
  std::vector<QubitId> pool;
  auto in_gate = [&](const QubitId& q) {
    if (q == g.target) return true;
    return std::find(g.controls.begin(), g.controls.end(), q) != g.controls.end();
  };
  for (const auto& q : g.borrow_hint)
    if (!in_gate(q) && std::find(pool.begin(), pool.end(), q) == pool.end())
      pool.push_back(q);
  if (pool.size() < want) {
    auto consider = [&](QubitId q) {
      if (pool.size() < want && !in_gate(q) &&
          std::find(pool.begin(), pool.end(), q) == pool.end())
        pool.push_back(q);
    };
    for (uint32_t i = 0; i < layout_.n_ancillas; ++i) consider(QubitId::ancilla(i));
    for (uint32_t i = 0; i < layout_.n_inputs; ++i) consider(QubitId::input(i));
    for (uint32_t i = 0; i < layout_.n_targets; ++i) consider(QubitId::target(i));
  }
  if (pool.size() > want) pool.resize(want);
  return pool;
}

void MctLowerer::lower_mct(const Gate& g) {
  // Negative controls become X conjugation before the chain.
  std::vector<QubitId> neg;
  for (size_t i = 0; i < g.controls.size(); ++i)
    if (g.control_negated(i)) neg.push_back(g.controls[i]);
  for (const auto& q : neg) out_.on_gate(Gate::x(q));

  const size_t a = g.controls.size();
  std::vector<QubitId> borrows = pick_borrows(g, a - 2);
  MctStrategy strategy = cfg_.mct_strategy;
  if (strategy == MctStrategy::Auto)
    strategy = borrows.size() >= a - 2 ? MctStrategy::VChainDirty : MctStrategy::Recursive;

  if (strategy == MctStrategy::VChainDirty) {
    if (borrows.size() < a - 2)
      throw ValidationError("V-chain lowering of a " + std::to_string(a) +
                            "-control MCT needs " + std::to_string(a - 2) +
                            " borrowable qubits, found " + std::to_string(borrows.size()));
    emit_vchain(g.controls, g.target, borrows, false);
  } else {
    if (borrows.empty())
      throw ValidationError("no borrowable qubit for recursive MCT lowering");
    emit_split(g.controls, g.target, borrows, false);
  }

  for (const auto& q : neg) out_.on_gate(Gate::x(q));
}

void MctLowerer::emit_vchain(const std::vector<QubitId>& c, QubitId t,
                             const std::vector<QubitId>& b, bool top_phase_safe) {
  const size_t a = c.size();
  if (a == 2) {
    Gate g = Gate::toffoli(c[0], c[1], t);
    g.phase_safe = top_phase_safe;
    out_.on_gate(g);
    return;
  }
  // T(c_a, b_{a-2} -> t) . body . T(c_a, b_{a-2} -> t) . body
  // The two target Toffolis carry uncancelled relative phase and stay exact.
  Gate top = Gate::toffoli(c[a - 1], b[a - 3], t);
  top.phase_safe = top_phase_safe;
  out_.on_gate(top);
  emit_chain_body(c, b, out_);
  out_.on_gate(top);
  emit_chain_body(c, b, out_);
}

void MctLowerer::emit_split(std::vector<QubitId> c, QubitId t,
                            const std::vector<QubitId>& pool, bool) {
  const size_t a = c.size();
  QubitId borrow = pool.front();
  const size_t h = (a + 1) / 2;
  std::vector<QubitId> hi(c.begin(), c.begin() + static_cast<ptrdiff_t>(h));
  std::vector<QubitId> lo(c.begin() + static_cast<ptrdiff_t>(h), c.end());
  lo.push_back(borrow);

  // T1 = MCT(hi -> borrow), T2 = MCT(lo+borrow -> t); T1 T2 T1 T2 computes
  // t xor= AND(all) and restores the borrow. Each half borrows from the
  // other half's idle controls, so the V-chain always fits.
  auto emit_half = [&](const std::vector<QubitId>& ctrls, QubitId tgt,
                       const std::vector<QubitId>& others) {
    if (ctrls.size() == 1) {
      out_.on_gate(Gate::cnot(ctrls[0], tgt));
      return;
    }
    std::vector<QubitId> local;
    for (const auto& q : others)
      if (q != tgt) local.push_back(q);
    if (ctrls.size() > 2 && local.size() < ctrls.size() - 2)
      throw ValidationError("internal: split half short of borrows");
    emit_vchain(ctrls, tgt, local, false);
  };

  std::vector<QubitId> hi_others = lo;  // includes borrow; filtered per half
  hi_others.pop_back();                 // drop borrow (T1's target)
  hi_others.push_back(t);
  std::vector<QubitId> lo_others = hi;

  emit_half(hi, borrow, hi_others);
  emit_half(lo, t, lo_others);
  emit_half(hi, borrow, hi_others);
  emit_half(lo, t, lo_others);
}

ToffoliLowerer::ToffoliLowerer(GateSink& out, LoweringConfig cfg)
    : out_(out), cfg_(cfg) {}

void expand_toffoli_exact(QubitId c0, QubitId c1, QubitId t, GateSink& out) {
  using K = Phase1QKind;
  out.on_gate(Gate::phase1q(K::H, t));
  out.on_gate(Gate::cnot(c1, t));
  out.on_gate(Gate::phase1q(K::Tdg, t));
  out.on_gate(Gate::cnot(c0, t));
  out.on_gate(Gate::phase1q(K::T, t));
  out.on_gate(Gate::cnot(c1, t));
  out.on_gate(Gate::phase1q(K::Tdg, t));
  out.on_gate(Gate::cnot(c0, t));
  out.on_gate(Gate::phase1q(K::T, c1));
  out.on_gate(Gate::phase1q(K::T, t));
  out.on_gate(Gate::phase1q(K::H, t));
  out.on_gate(Gate::cnot(c0, c1));
  out.on_gate(Gate::phase1q(K::T, c0));
  out.on_gate(Gate::phase1q(K::Tdg, c1));
  out.on_gate(Gate::cnot(c0, c1));
}

void expand_toffoli_approx(QubitId c0, QubitId c1, QubitId t, GateSink& out) {
  using K = Phase1QKind;
  out.on_gate(Gate::phase1q(K::RyQuarter, t));
  out.on_gate(Gate::cnot(c1, t));
  out.on_gate(Gate::phase1q(K::RyQuarter, t));
  out.on_gate(Gate::cnot(c0, t));
  out.on_gate(Gate::phase1q(K::RyQuarterNeg, t));
  out.on_gate(Gate::cnot(c1, t));
  out.on_gate(Gate::phase1q(K::RyQuarterNeg, t));
}

void expand_toffoli(const Gate& g, ToffoliMode mode, bool force_approx, GateSink& out) {
  bool approx = force_approx || (mode == ToffoliMode::Approximate && g.phase_safe);
  if (force_approx && !g.phase_safe)
    throw ValidationError("approximate Toffoli requested at a site not marked phase-safe");
  std::vector<QubitId> neg;
  for (size_t i = 0; i < 2; ++i)
    if (g.control_negated(i)) neg.push_back(g.controls[i]);
  for (const auto& q : neg) out.on_gate(Gate::x(q));
  if (approx)
    expand_toffoli_approx(g.controls[0], g.controls[1], g.target, out);
  else
    expand_toffoli_exact(g.controls[0], g.controls[1], g.target, out);
  for (const auto& q : neg) out.on_gate(Gate::x(q));
}

void ToffoliLowerer::on_gate(const Gate& g) {
  switch (g.kind) {
    case GateKind::X:
    case GateKind::Phase1Q:
      out_.on_gate(g);
      break;
    case GateKind::Cnot:
      if (g.control_negated(0)) {
        Gate pos = Gate::cnot(g.controls[0], g.target);
        out_.on_gate(pos);
        out_.on_gate(Gate::x(g.target));
      } else {
        out_.on_gate(g);
      }
      break;
    case GateKind::Toffoli:
      expand_toffoli(g, cfg_.toffoli_mode, false, out_);
      break;
    case GateKind::ApproxToffoli:
      expand_toffoli_approx(g.controls[0], g.controls[1], g.target, out_);
      break;
    case GateKind::Mct:
      throw ValidationError("MCT gate reached the Toffoli lowering stage");
  }
}

namespace {

/// Rewrites phase-safe Toffolis into atomic approximate Toffolis so the
/// Toffoli-level circuit carries the approximate-mode semantics (signs and
/// all) that the simulator checks.
class ApproxMarker : public GateSink {
 public:
  explicit ApproxMarker(GateSink& out) : out_(out) {}
  void on_gate(const Gate& g) override {
    if (g.kind == GateKind::Toffoli && g.phase_safe && !g.any_negated()) {
      out_.on_gate(Gate::approx_toffoli(g.controls[0], g.controls[1], g.target));
    } else {
      out_.on_gate(g);
    }
  }

 private:
  GateSink& out_;
};

}  // namespace

Circuit lower_to_toffoli(const Circuit& c, LoweringConfig cfg) {
  if (c.level() != Level::MctLevel && c.level() != Level::ToffoliLevel)
    throw ValidationError("lower_to_toffoli expects an MCT- or Toffoli-level circuit");
  Circuit out(c.layout(), Level::ToffoliLevel);
  if (cfg.toffoli_mode == ToffoliMode::Approximate) {
    ApproxMarker marker(out);
    MctLowerer mct(marker, c.layout(), cfg);
    for (const auto& g : c.gates()) mct.on_gate(g);
  } else {
    MctLowerer mct(out, c.layout(), cfg);
    for (const auto& g : c.gates()) mct.on_gate(g);
  }
  return out;
}

Circuit lower_to_elementary(const Circuit& c, LoweringConfig cfg) {
  Circuit out(c.layout(), Level::ElementaryLevel);
  ToffoliLowerer tof(out, cfg);
  if (c.level() == Level::MctLevel) {
    MctLowerer mct(tof, c.layout(), cfg);
    for (const auto& g : c.gates()) mct.on_gate(g);
  } else if (c.level() == Level::ToffoliLevel) {
    for (const auto& g : c.gates()) tof.on_gate(g);
  } else {
    return c;
  }
  return out;
}

}  // namespace satoc
