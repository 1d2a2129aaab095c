#include "test_util.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "satoc/sim.hpp"
#include "satoc/synth.hpp"

namespace satoc::test {

StateVector::StateVector(uint32_t n_qubits) : n_(n_qubits), amp_(uint64_t(1) << n_qubits) {
  amp_[0] = 1.0;
}

StateVector StateVector::basis(uint32_t n_qubits, uint64_t index) {
  StateVector s(n_qubits);
  s.amp_[0] = 0.0;
  s.amp_[index] = 1.0;
  return s;
}

void StateVector::single_qubit(uint32_t q, const std::complex<double> m[2][2]) {
  const uint64_t bit = uint64_t(1) << q;
  for (uint64_t i = 0; i < amp_.size(); ++i) {
    if (i & bit) continue;
    auto a0 = amp_[i];
    auto a1 = amp_[i | bit];
    amp_[i] = m[0][0] * a0 + m[0][1] * a1;
    amp_[i | bit] = m[1][0] * a0 + m[1][1] * a1;
  }
}

void StateVector::apply(const Gate& g, const Layout& layout) {
  const uint64_t tbit = uint64_t(1) << layout.flatten(g.target);
  auto fires = [&](uint64_t i) {
    for (size_t c = 0; c < g.controls.size(); ++c) {
      bool set = i & (uint64_t(1) << layout.flatten(g.controls[c]));
      if (set == g.control_negated(c)) return false;
    }
    return true;
  };
  switch (g.kind) {
    case GateKind::Phase1Q: {
      const double r2 = 1.0 / std::sqrt(2.0);
      const double c8 = std::cos(M_PI / 8), s8 = std::sin(M_PI / 8);
      std::complex<double> m[2][2];
      switch (g.phase) {
        case Phase1QKind::H:
          m[0][0] = r2; m[0][1] = r2; m[1][0] = r2; m[1][1] = -r2;
          break;
        case Phase1QKind::T:
          m[0][0] = 1; m[0][1] = 0; m[1][0] = 0;
          m[1][1] = std::polar(1.0, M_PI / 4);
          break;
        case Phase1QKind::Tdg:
          m[0][0] = 1; m[0][1] = 0; m[1][0] = 0;
          m[1][1] = std::polar(1.0, -M_PI / 4);
          break;
        case Phase1QKind::RyQuarter:
          m[0][0] = c8; m[0][1] = -s8; m[1][0] = s8; m[1][1] = c8;
          break;
        case Phase1QKind::RyQuarterNeg:
          m[0][0] = c8; m[0][1] = s8; m[1][0] = -s8; m[1][1] = c8;
          break;
      }
      single_qubit(layout.flatten(g.target), m);
      return;
    }
    case GateKind::ApproxToffoli: {
      // atomic monomial action: Toffoli permutation with the frozen sign
      const uint64_t c0 = uint64_t(1) << layout.flatten(g.controls[0]);
      const uint64_t c1 = uint64_t(1) << layout.flatten(g.controls[1]);
      std::vector<std::complex<double>> next(amp_.size());
      for (uint64_t i = 0; i < amp_.size(); ++i) {
        uint64_t j = i;
        std::complex<double> a = amp_[i];
        if (approx_toffoli_sign_flips(i & c0, i & c1, i & tbit)) a = -a;
        if ((i & c0) && (i & c1)) j = i ^ tbit;
        next[j] += a;
      }
      amp_ = std::move(next);
      return;
    }
    default: {
      for (uint64_t i = 0; i < amp_.size(); ++i) {
        if ((i & tbit) || !fires(i)) continue;
        std::swap(amp_[i], amp_[i | tbit]);
      }
      return;
    }
  }
}

void StateVector::apply_all(const Circuit& c) {
  for (const auto& g : c.gates()) apply(g, c.layout());
}

std::pair<uint64_t, std::complex<double>> StateVector::basis_decompose(double tol) const {
  uint64_t where = 0;
  int count = 0;
  for (uint64_t i = 0; i < amp_.size(); ++i) {
    if (std::abs(amp_[i]) > tol) {
      where = i;
      ++count;
    }
  }
  if (count != 1) throw std::runtime_error("state is not a computational basis state");
  return {where, amp_[where]};
}

bool evaluate_reference(const CnfFormula& f, uint64_t assignment_bits) {
  // Opposite search direction and set-based membership, so a shared bug with
  // the production evaluator is unlikely.
  for (auto it = f.clauses.rbegin(); it != f.clauses.rend(); ++it) {
    std::set<int64_t> want;
    for (const auto& lit : *it)
      want.insert(lit.negated ? -int64_t(lit.variable) : int64_t(lit.variable));
    bool sat = false;
    for (int64_t signed_var : want) {
      uint32_t v = static_cast<uint32_t>(signed_var < 0 ? -signed_var : signed_var);
      bool value = (assignment_bits >> (v - 1)) & 1;
      if ((signed_var > 0) == value) sat = true;
    }
    if (!sat) return false;
  }
  return true;
}

uint64_t audited_depth(const Circuit& c) {
  const Layout& layout = c.layout();
  std::vector<uint64_t> front(layout.total(), 0);
  std::vector<uint64_t> layer_of(c.gates().size(), 0);
  uint64_t depth = 0;
  for (size_t i = 0; i < c.gates().size(); ++i) {
    const Gate& g = c.gates()[i];
    uint64_t at = front[layout.flatten(g.target)];
    for (const auto& q : g.controls) at = std::max(at, front[layout.flatten(q)]);
    layer_of[i] = at + 1;
    front[layout.flatten(g.target)] = at + 1;
    for (const auto& q : g.controls) front[layout.flatten(q)] = at + 1;
    depth = std::max(depth, at + 1);
  }
  // Brute-force pairwise audit: same layer => disjoint qubit sets.
  auto qubits_of = [&](const Gate& g) {
    std::set<uint32_t> s{layout.flatten(g.target)};
    for (const auto& q : g.controls) s.insert(layout.flatten(q));
    return s;
  };
  for (size_t i = 0; i < c.gates().size(); ++i) {
    for (size_t j = i + 1; j < c.gates().size(); ++j) {
      if (layer_of[i] != layer_of[j]) continue;
      auto a = qubits_of(c.gates()[i]);
      auto b = qubits_of(c.gates()[j]);
      for (uint32_t q : a)
        if (b.count(q))
          throw std::runtime_error("layer audit: two gates in layer " +
                                   std::to_string(layer_of[i]) + " share qubit " +
                                   std::to_string(q));
    }
  }
  return depth;
}

std::vector<std::string> trace_gand(uint32_t p) {
  std::vector<std::string> lines;
  auto qname = [](const QubitId& q) {
    if (q.reg == Register::Target) return std::string("qt");
    return "q" + std::to_string(q.offset + 1);
  };
  GandStepObserver obs;
  obs.on_toffoli = [&](const std::string& label, const Gate& g) {
    lines.push_back(label + " toffoli " + qname(g.controls[0]) + "," +
                    qname(g.controls[1]) + " -> " + qname(g.target));
  };
  obs.on_oracle_call = [&](const std::string& label, uint32_t index, QubitId target) {
    lines.push_back(label + " call O" + std::to_string(index) + " -> " + qname(target));
  };

  GandPlan plan;
  plan.p = p;
  plan.target = QubitId::target();
  for (uint32_t i = 0; i < 2 * p - 2; ++i) plan.ancillas.push_back(QubitId::ancilla(i));
  std::vector<OracleBuilder> oracles(p, input_copy_oracle(0));

  class NullSink : public GateSink {
   public:
    void on_gate(const Gate&) override {}
  } null_sink;
  build_gand(plan, oracles, null_sink, &obs);
  return lines;
}

OracleBuilder clause_oracle(const Clause& clause) {
  return OracleBuilder{[clause](QubitId target, GateSink& sink) {
    synth_clause(clause, target, sink);
  }};
}

OracleBuilder input_copy_oracle(uint32_t input_index) {
  return OracleBuilder{[input_index](QubitId target, GateSink& sink) {
    sink.on_gate(Gate::cnot(QubitId::input(input_index), target));
  }};
}

OracleBuilder constant_false_oracle() {
  return OracleBuilder{[](QubitId, GateSink&) {}};
}

}  // namespace satoc::test
