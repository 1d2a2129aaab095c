#include "satoc/circuit.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace satoc {

std::string to_string(const QubitId& q) {
  const char* reg = q.reg == Register::Input ? "in" : q.reg == Register::Ancilla ? "anc" : "tgt";
  return std::string(reg) + "[" + std::to_string(q.offset) + "]";
}

bool Layout::contains(const QubitId& q) const {
  switch (q.reg) {
    case Register::Input: return q.offset < n_inputs;
    case Register::Ancilla: return q.offset < n_ancillas;
    case Register::Target: return q.offset < n_targets;
  }
  return false;
}

uint32_t Layout::flatten(const QubitId& q) const {
  switch (q.reg) {
    case Register::Input: return q.offset;
    case Register::Ancilla: return n_inputs + q.offset;
    case Register::Target: return n_inputs + n_ancillas + q.offset;
  }
  return 0;
}

QubitId Layout::unflatten(uint32_t flat) const {
  if (flat < n_inputs) return QubitId::input(flat);
  if (flat < n_inputs + n_ancillas) return QubitId::ancilla(flat - n_inputs);
  return QubitId::target(flat - n_inputs - n_ancillas);
}

const char* qasm_name(Phase1QKind k) {
  switch (k) {
    case Phase1QKind::H: return "h";
    case Phase1QKind::T: return "t";
    case Phase1QKind::Tdg: return "tdg";
    case Phase1QKind::RyQuarter: return "ry(pi/4)";
    case Phase1QKind::RyQuarterNeg: return "ry(-pi/4)";
  }
  return "?";
}

const char* to_string(Level level) {
  switch (level) {
    case Level::MctLevel: return "mct";
    case Level::ToffoliLevel: return "toffoli";
    case Level::ElementaryLevel: return "elementary";
  }
  return "?";
}

void Gate::set_control_negated(size_t i) {
  if (i / 64 >= neg_polarity.size()) neg_polarity.resize(i / 64 + 1, 0);
  neg_polarity[i / 64] |= uint64_t(1) << (i % 64);
}

bool Gate::any_negated() const {
  for (uint64_t w : neg_polarity)
    if (w) return true;
  return false;
}

Gate Gate::x(QubitId t) {
  Gate g;
  g.kind = GateKind::X;
  g.target = t;
  return g;
}

Gate Gate::phase1q(Phase1QKind k, QubitId t) {
  Gate g;
  g.kind = GateKind::Phase1Q;
  g.phase = k;
  g.target = t;
  return g;
}

Gate Gate::cnot(QubitId c, QubitId t, bool neg) {
  Gate g;
  g.kind = GateKind::Cnot;
  g.target = t;
  g.controls = {c};
  if (neg) g.set_control_negated(0);
  return g;
}

Gate Gate::toffoli(QubitId c0, QubitId c1, QubitId t) {
  Gate g;
  g.kind = GateKind::Toffoli;
  g.target = t;
  g.controls = {c0, c1};
  return g;
}

Gate Gate::approx_toffoli(QubitId c0, QubitId c1, QubitId t) {
  Gate g;
  g.kind = GateKind::ApproxToffoli;
  g.target = t;
  g.controls = {c0, c1};
  return g;
}

Gate Gate::mct(std::vector<QubitId> controls, QubitId t, const std::vector<bool>& negated) {
  Gate g;
  g.target = t;
  g.controls = std::move(controls);
  switch (g.controls.size()) {
    case 0: g.kind = GateKind::X; break;
    case 1: g.kind = GateKind::Cnot; break;
    case 2: g.kind = GateKind::Toffoli; break;
    default: g.kind = GateKind::Mct; break;
  }
  for (size_t i = 0; i < negated.size() && i < g.controls.size(); ++i)
    if (negated[i]) g.set_control_negated(i);
  return g;
}

bool kind_allowed(GateKind kind, Level level) {
  switch (level) {
    case Level::MctLevel:
      return kind != GateKind::Phase1Q && kind != GateKind::ApproxToffoli;
    case Level::ToffoliLevel:
      return kind != GateKind::Mct && kind != GateKind::Phase1Q;
    case Level::ElementaryLevel:
      return kind == GateKind::X || kind == GateKind::Cnot || kind == GateKind::Phase1Q;
  }
  return false;
}

void validate_gate(const Gate& g, const Layout& layout, Level level) {
  if (!kind_allowed(g.kind, level))
    throw ValidationError(std::string("gate kind not allowed at ") + to_string(level) +
                          " level");
  size_t expected = g.kind == GateKind::X || g.kind == GateKind::Phase1Q ? 0
                    : g.kind == GateKind::Cnot                           ? 1
                    : g.kind == GateKind::Mct                            ? g.controls.size()
                                                                         : 2;
  if (g.kind == GateKind::Mct && g.controls.size() < 3)
    throw ValidationError("MCT gate needs at least 3 controls");
  if (g.controls.size() != expected)
    throw ValidationError("control count does not match gate kind");
  if (!layout.contains(g.target))
    throw ValidationError("target " + to_string(g.target) + " outside layout");
  for (size_t i = 0; i < g.controls.size(); ++i) {
    if (!layout.contains(g.controls[i]))
      throw ValidationError("control " + to_string(g.controls[i]) + " outside layout");
    if (g.controls[i] == g.target)
      throw ValidationError("control collides with target " + to_string(g.target));
    for (size_t j = i + 1; j < g.controls.size(); ++j)
      if (g.controls[i] == g.controls[j])
        throw ValidationError("duplicate control " + to_string(g.controls[i]));
  }
}

void Circuit::append(Gate g) {
  validate_gate(g, layout_, level_);
  gates_.push_back(std::move(g));
}

Circuit Circuit::inverse() const {
  Circuit inv(layout_, level_);
  inv.gates_.reserve(gates_.size());
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    Gate g = *it;
    if (g.kind == GateKind::Phase1Q) {
      switch (g.phase) {
        case Phase1QKind::T: g.phase = Phase1QKind::Tdg; break;
        case Phase1QKind::Tdg: g.phase = Phase1QKind::T; break;
        case Phase1QKind::RyQuarter: g.phase = Phase1QKind::RyQuarterNeg; break;
        case Phase1QKind::RyQuarterNeg: g.phase = Phase1QKind::RyQuarter; break;
        case Phase1QKind::H: break;
      }
    }
    inv.gates_.push_back(std::move(g));
  }
  return inv;
}

Circuit Circuit::compose(const Circuit& a, const Circuit& b) {
  if (a.layout() != b.layout())
    throw ValidationError("compose: layouts differ");
  if (a.level() != b.level())
    throw ValidationError("compose: levels differ");
  Circuit c(a.layout(), a.level());
  c.gates_ = a.gates_;
  c.gates_.insert(c.gates_.end(), b.gates_.begin(), b.gates_.end());
  return c;
}

CostReport Circuit::cost() const { return satoc::cost(*this); }

CostAccumulator::CostAccumulator(const Layout& layout, Level level)
    : layout_(layout),
      level_(level),
      front_(layout.total(), 0),
      anc_touched_(layout.n_ancillas, 0) {}

void CostAccumulator::on_gate(const Gate& g) {
  ++size_;
  if (g.kind == GateKind::Toffoli || g.kind == GateKind::ApproxToffoli) ++toffoli_;
  if (g.kind == GateKind::Mct) ++mct_;

  uint64_t start = front_[layout_.flatten(g.target)];
  for (const auto& c : g.controls) start = std::max(start, front_[layout_.flatten(c)]);
  uint64_t layer = start + 1;
  front_[layout_.flatten(g.target)] = layer;
  for (const auto& c : g.controls) front_[layout_.flatten(c)] = layer;
  depth_ = std::max(depth_, layer);

  auto touch = [&](const QubitId& q) {
    if (q.reg == Register::Ancilla && !anc_touched_[q.offset]) {
      anc_touched_[q.offset] = 1;
      ++anc_count_;
    }
  };
  touch(g.target);
  for (const auto& c : g.controls) touch(c);
}

CostReport CostAccumulator::report() const {
  CostReport r;
  r.size = size_;
  r.depth = depth_;
  r.toffoli_count = toffoli_;
  r.mct_calls = mct_;
  r.ancillas_touched = anc_count_;
  r.level = level_;
  return r;
}

CostReport cost(const Circuit& c) {
  CostAccumulator acc(c.layout(), c.level());
  for (const auto& g : c.gates()) acc.on_gate(g);
  return acc.report();
}

std::string CostReport::to_json() const {
  nlohmann::json j;
  j["size"] = size;
  j["depth"] = depth;
  j["toffoli_count"] = toffoli_count;
  j["mct_calls"] = mct_calls;
  j["ancillas_touched"] = ancillas_touched;
  j["level"] = to_string(level);
  return j.dump(2);
}

}  // namespace satoc
