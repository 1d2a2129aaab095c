#include "satoc/sim.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <string_view>

#include "json.hpp"

namespace satoc {

bool approx_toffoli_sign_flips(bool c0, bool c1, bool t) {
  return c0 && !c1 && t;
}

BasisState simulate(const Circuit& c, BasisState state) {
  const Layout& layout = c.layout();
  if (state.bits.size() != layout.total())
    throw ValidationError("basis state has " + std::to_string(state.bits.size()) +
                          " bits, layout has " + std::to_string(layout.total()));
  auto bit = [&](const QubitId& q) -> std::vector<bool>::reference {
    return state.bits[layout.flatten(q)];
  };
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::X:
        bit(g.target) = !bit(g.target);
        break;
      case GateKind::Phase1Q:
        switch (g.phase) {
          case Phase1QKind::T:
            if (bit(g.target)) state.phase_octant = (state.phase_octant + 1) & 7;
            break;
          case Phase1QKind::Tdg:
            if (bit(g.target)) state.phase_octant = (state.phase_octant + 7) & 7;
            break;
          default:
            throw ValidationError(std::string("gate '") + qasm_name(g.phase) +
                                  "' is not monomial; basis simulation undefined");
        }
        break;
      case GateKind::ApproxToffoli: {
        bool b0 = bit(g.controls[0]), b1 = bit(g.controls[1]);
        if (approx_toffoli_sign_flips(b0, b1, bit(g.target)))
          state.phase_octant = (state.phase_octant + 4) & 7;
        if (b0 && b1) bit(g.target) = !bit(g.target);
        break;
      }
      default: {
        bool fire = true;
        for (size_t i = 0; i < g.controls.size() && fire; ++i)
          fire = bit(g.controls[i]) != g.control_negated(i);
        if (fire) bit(g.target) = !bit(g.target);
        break;
      }
    }
  }
  return state;
}

SimProgram::SimProgram(const Layout& layout)
    : layout_(layout), n_qubits_(layout.total()) {}

void SimProgram::on_gate(const Gate& g) {
  if (g.kind == GateKind::Phase1Q)
    throw ValidationError("SimProgram accepts monomial gates only (got a Phase1Q)");
  if (g.kind == GateKind::ApproxToffoli && g.any_negated())
    throw ValidationError("polarized approximate Toffoli is not produced by lowering");
  Op op;
  op.kind = g.kind;
  op.target = layout_.flatten(g.target);
  op.ctrl_begin = static_cast<uint32_t>(ctrl_pool_.size());
  op.ctrl_count = static_cast<uint32_t>(g.controls.size());
  for (size_t i = 0; i < g.controls.size(); ++i)
    ctrl_pool_.push_back((layout_.flatten(g.controls[i]) << 1) |
                         (g.control_negated(i) ? 1u : 0u));
  ops_.push_back(op);
}

SimProgram SimProgram::compile(const Circuit& c) {
  SimProgram p(c.layout());
  for (const auto& g : c.gates()) p.on_gate(g);
  return p;
}

void SimProgram::run_packed(std::vector<uint64_t>& w, uint64_t& sign_word) const {
  const uint32_t* pool = ctrl_pool_.data();
  for (const Op& op : ops_) {
    switch (op.kind) {
      case GateKind::X:
        w[op.target] = ~w[op.target];
        break;
      case GateKind::Cnot: {
        uint32_t e = pool[op.ctrl_begin];
        uint64_t f = w[e >> 1];
        if (e & 1) f = ~f;
        w[op.target] ^= f;
        break;
      }
      case GateKind::Toffoli: {
        uint32_t e0 = pool[op.ctrl_begin], e1 = pool[op.ctrl_begin + 1];
        uint64_t f0 = (e0 & 1) ? ~w[e0 >> 1] : w[e0 >> 1];
        uint64_t f1 = (e1 & 1) ? ~w[e1 >> 1] : w[e1 >> 1];
        w[op.target] ^= f0 & f1;
        break;
      }
      case GateKind::ApproxToffoli: {
        uint64_t c0 = w[pool[op.ctrl_begin] >> 1];
        uint64_t c1 = w[pool[op.ctrl_begin + 1] >> 1];
        sign_word ^= c0 & ~c1 & w[op.target];
        w[op.target] ^= c0 & c1;
        break;
      }
      case GateKind::Mct: {
        uint64_t acc = ~uint64_t(0);
        for (uint32_t i = 0; i < op.ctrl_count; ++i) {
          uint32_t e = pool[op.ctrl_begin + i];
          acc &= (e & 1) ? ~w[e >> 1] : w[e >> 1];
        }
        w[op.target] ^= acc;
        break;
      }
      case GateKind::Phase1Q:
        break;  // unreachable, rejected at build
    }
  }
}

BasisState SimProgram::run_scalar(BasisState state) const {
  if (state.bits.size() != n_qubits_)
    throw ValidationError("basis state size does not match program");
  const uint32_t* pool = ctrl_pool_.data();
  for (const Op& op : ops_) {
    if (op.kind == GateKind::ApproxToffoli) {
      bool c0 = state.bits[pool[op.ctrl_begin] >> 1];
      bool c1 = state.bits[pool[op.ctrl_begin + 1] >> 1];
      if (approx_toffoli_sign_flips(c0, c1, state.bits[op.target]))
        state.phase_octant = (state.phase_octant + 4) & 7;
      if (c0 && c1) state.bits[op.target] = !state.bits[op.target];
      continue;
    }
    bool fire = true;
    for (uint32_t i = 0; i < op.ctrl_count && fire; ++i) {
      uint32_t e = pool[op.ctrl_begin + i];
      fire = state.bits[e >> 1] != static_cast<bool>(e & 1);
    }
    if (fire) state.bits[op.target] = !state.bits[op.target];
  }
  return state;
}

SimProgram SimProgram::without_op(size_t index) const {
  SimProgram p = *this;
  p.ops_.erase(p.ops_.begin() + static_cast<ptrdiff_t>(index));
  return p;
}

size_t SimProgram::count_ops(GateKind kind) const {
  size_t c = 0;
  for (const auto& op : ops_)
    if (op.kind == kind) ++c;
  return c;
}

namespace {

// Bit j of the lane-global index, across the 64 lanes of one batch.
uint64_t index_bit_word(uint32_t j, uint64_t base) {
  static constexpr uint64_t kCounting[6] = {
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  if (j < 6) return kCounting[j];
  return ((base >> j) & 1) ? ~uint64_t(0) : uint64_t(0);
}

struct FailureTally {
  VerificationReport* report;
  size_t cap;

  void add(const char* what, uint64_t word, const std::vector<uint64_t>& init,
           const Layout& layout, uint64_t got_word, uint64_t expected_word) {
    uint64_t* counter = nullptr;
    if (std::string_view(what) == "target") counter = &report->target_failures;
    else if (std::string_view(what) == "input") counter = &report->input_failures;
    else if (std::string_view(what) == "ancilla")
      counter = &report->ancilla_restoration_failures;
    else counter = &report->sign_failures;
    *counter += static_cast<uint64_t>(std::popcount(word));
    while (word && report->samples.size() < cap) {
      int lane = std::countr_zero(word);
      word &= word - 1;
      VerifyFailure f;
      f.what = what;
      f.input_bits = 0;
      for (uint32_t i = 0; i < std::min<uint32_t>(layout.n_inputs, 64); ++i)
        f.input_bits |= ((init[i] >> lane) & 1) << i;
      f.ancilla_bits = 0;
      for (uint32_t a = 0; a < std::min<uint32_t>(layout.n_ancillas, 64); ++a)
        f.ancilla_bits |= ((init[layout.n_inputs + a] >> lane) & 1) << a;
      f.target_in = (init[layout.n_inputs + layout.n_ancillas] >> lane) & 1;
      f.expected = (expected_word >> lane) & 1;
      f.got = (got_word >> lane) & 1;
      report->samples.push_back(std::move(f));
    }
  }
};

}  // namespace

VerificationReport verify_oracle(const SimProgram& prog, const CnfFormula& f,
                                 const VerifyOptions& opts) {
  const Layout& layout = prog.layout();
  if (layout.n_inputs != f.num_vars || layout.n_targets != 1)
    throw ValidationError("layout does not match formula");

  VerificationReport report;
  report.mode = opts.mode;
  report.formula_id = "n" + std::to_string(f.num_vars) + "m" +
                      std::to_string(f.num_clauses()) + "k" + std::to_string(f.width());

  const uint32_t n = layout.n_inputs;
  const uint32_t tgt = layout.n_inputs + layout.n_ancillas;
  uint64_t lanes_total;
  if (opts.mode == VerifyMode::Exhaustive) {
    if (n + 1 > 30) throw ConfigError("exhaustive verification limited to n <= 29");
    lanes_total = uint64_t(1) << (n + 1);
  } else {
    lanes_total = opts.sample_count;
  }
  const uint64_t batches = (lanes_total + 63) / 64;
  const uint32_t trials =
      opts.ancillas == AncillaPolicy::RandomDirty ? std::max(1u, opts.dirty_trials) : 1;

  SplitMix64 rng(opts.seed);
  FailureTally tally{&report, opts.max_recorded_failures};
  std::vector<uint64_t> init(prog.num_qubits()), work(prog.num_qubits());

  for (uint32_t trial = 0; trial < trials; ++trial) {
    for (uint64_t b = 0; b < batches; ++b) {
      const uint64_t base = b * 64;
      uint64_t valid = ~uint64_t(0);
      if (lanes_total - base < 64) valid = (uint64_t(1) << (lanes_total - base)) - 1;

      if (opts.mode == VerifyMode::Exhaustive) {
        for (uint32_t i = 0; i < n; ++i) init[i] = index_bit_word(i + 1, base);
        init[tgt] = index_bit_word(0, base);
      } else {
        for (uint32_t i = 0; i < n; ++i) init[i] = rng.next();
        init[tgt] = rng.next();
      }
      for (uint32_t a = 0; a < layout.n_ancillas; ++a)
        init[n + a] = opts.ancillas == AncillaPolicy::RandomDirty ? rng.next() : 0;

      // Classical reference, 64 assignments at a time.
      uint64_t f_word = ~uint64_t(0);
      for (const auto& clause : f.clauses) {
        uint64_t cw = 0;
        for (const auto& lit : clause)
          cw |= lit.negated ? ~init[lit.variable - 1] : init[lit.variable - 1];
        f_word &= cw;
        if (!f_word) break;
      }

      work = init;
      uint64_t sign_word = 0;
      prog.run_packed(work, sign_word);
      report.states_checked += std::popcount(valid);

      uint64_t expected_target = init[tgt] ^ f_word;
      if (uint64_t d = (work[tgt] ^ expected_target) & valid)
        tally.add("target", d, init, layout, work[tgt], expected_target);
      uint64_t input_diff = 0;
      for (uint32_t i = 0; i < n; ++i) input_diff |= work[i] ^ init[i];
      if (input_diff & valid)
        tally.add("input", input_diff & valid, init, layout, 0, 0);
      uint64_t anc_diff = 0;
      for (uint32_t a = 0; a < layout.n_ancillas; ++a)
        anc_diff |= work[n + a] ^ init[n + a];
      if (anc_diff & valid)
        tally.add("ancilla", anc_diff & valid, init, layout, 0, 0);
      if (sign_word & valid)
        tally.add("sign", sign_word & valid, init, layout, 0, 0);
    }
  }
  return report;
}

VerificationReport verify_oracle(const Circuit& c, const CnfFormula& f,
                                 const VerifyOptions& opts) {
  return verify_oracle(SimProgram::compile(c), f, opts);
}

VerificationReport verify_gadget(const SimProgram& prog,
                                 const std::function<bool(uint64_t)>& reference,
                                 const VerifyOptions& opts) {
  const Layout& layout = prog.layout();
  const uint32_t q_total = prog.num_qubits();
  const uint32_t n = layout.n_inputs;
  const uint32_t tgt = layout.n_inputs + layout.n_ancillas;

  VerificationReport report;
  report.mode = opts.mode;
  uint64_t lanes_total;
  if (opts.mode == VerifyMode::Exhaustive) {
    if (q_total > 26)
      throw ConfigError("exhaustive gadget verification limited to 26 qubits");
    lanes_total = uint64_t(1) << q_total;
  } else {
    lanes_total = opts.sample_count;
  }
  const uint64_t batches = (lanes_total + 63) / 64;

  SplitMix64 rng(opts.seed);
  FailureTally tally{&report, opts.max_recorded_failures};
  std::vector<uint64_t> init(q_total), work(q_total);
  const uint64_t input_mask = n >= 64 ? ~uint64_t(0) : (uint64_t(1) << n) - 1;

  for (uint64_t b = 0; b < batches; ++b) {
    const uint64_t base = b * 64;
    uint64_t valid = ~uint64_t(0);
    if (lanes_total - base < 64) valid = (uint64_t(1) << (lanes_total - base)) - 1;

    if (opts.mode == VerifyMode::Exhaustive) {
      for (uint32_t q = 0; q < q_total; ++q) init[q] = index_bit_word(q, base);
    } else {
      for (uint32_t q = 0; q < q_total; ++q) init[q] = rng.next();
    }

    uint64_t ref_word = 0;
    for (int lane = 0; lane < 64; ++lane) {
      uint64_t input_bits = 0;
      if (opts.mode == VerifyMode::Exhaustive) {
        input_bits = (base + static_cast<uint64_t>(lane)) & input_mask;
      } else {
        for (uint32_t i = 0; i < std::min<uint32_t>(n, 64); ++i)
          input_bits |= ((init[i] >> lane) & 1) << i;
      }
      if (reference(input_bits)) ref_word |= uint64_t(1) << lane;
    }

    work = init;
    uint64_t sign_word = 0;
    prog.run_packed(work, sign_word);
    report.states_checked += std::popcount(valid);

    uint64_t expected_target = init[tgt] ^ ref_word;
    if (uint64_t d = (work[tgt] ^ expected_target) & valid)
      tally.add("target", d, init, layout, work[tgt], expected_target);
    uint64_t other_diff = 0;
    for (uint32_t q = 0; q < q_total; ++q)
      if (q != tgt) other_diff |= work[q] ^ init[q];
    if (other_diff & valid)
      tally.add("ancilla", other_diff & valid, init, layout, 0, 0);
    if (sign_word & valid)
      tally.add("sign", sign_word & valid, init, layout, 0, 0);
  }
  return report;
}

std::string VerificationReport::to_json() const {
  nlohmann::json j;
  j["formula_id"] = formula_id;
  j["mode"] = mode == VerifyMode::Exhaustive ? "exhaustive" : "sampled";
  j["states_checked"] = states_checked;
  j["passed"] = passed();
  j["target_failures"] = target_failures;
  j["input_failures"] = input_failures;
  j["ancilla_restoration_failures"] = ancilla_restoration_failures;
  j["sign_failures"] = sign_failures;
  auto& samples_json = j["failure_samples"] = nlohmann::json::array();
  for (const auto& s : samples) {
    samples_json.push_back({{"what", s.what},
                            {"input_bits", s.input_bits},
                            {"ancilla_bits", s.ancilla_bits},
                            {"target_in", s.target_in},
                            {"expected", s.expected},
                            {"got", s.got}});
  }
  return j.dump(2);
}

}  // namespace satoc
