#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "satoc/common.hpp"

namespace satoc {

enum class Register : uint8_t { Input = 0, Ancilla = 1, Target = 2 };

struct QubitId {
  Register reg = Register::Input;
  uint32_t offset = 0;

  friend bool operator==(const QubitId&, const QubitId&) = default;
  friend auto operator<=>(const QubitId&, const QubitId&) = default;

  static QubitId input(uint32_t i) { return {Register::Input, i}; }
  static QubitId ancilla(uint32_t i) { return {Register::Ancilla, i}; }
  static QubitId target(uint32_t i = 0) { return {Register::Target, i}; }
};

std::string to_string(const QubitId& q);

struct Layout {
  uint32_t n_inputs = 0;
  uint32_t n_ancillas = 0;
  uint32_t n_targets = 1;

  uint32_t total() const { return n_inputs + n_ancillas + n_targets; }
  bool contains(const QubitId& q) const;
  /// Flat index, inputs first, then ancillas, then targets.
  uint32_t flatten(const QubitId& q) const;
  QubitId unflatten(uint32_t flat) const;

  friend bool operator==(const Layout&, const Layout&) = default;
};

enum class GateKind : uint8_t {
  X,
  Cnot,          // 1 control
  Toffoli,       // 2 controls
  ApproxToffoli, // 2 controls; Toffoli up to a -1 sign on one basis state
  Mct,           // >= 3 controls
  Phase1Q,       // named single-qubit gate, post-lowering only
};

enum class Phase1QKind : uint8_t { H, T, Tdg, RyQuarter, RyQuarterNeg };

const char* qasm_name(Phase1QKind k);  // "h", "t", "tdg", "ry(pi/4)", "ry(-pi/4)"

/// Gates are stored with optional negative-control polarity (bit i of
/// neg_polarity set = control i fires on |0>). Polarities are an MCT-level
/// convenience; lowering expands them into X conjugation.
struct Gate {
  GateKind kind = GateKind::X;
  Phase1QKind phase = Phase1QKind::H;  // meaningful for Phase1Q only
  QubitId target;
  std::vector<QubitId> controls;
  std::vector<uint64_t> neg_polarity;  // empty = all controls positive
  /// Set on Toffolis that sit in matched compute/uncompute pairs whose
  /// relative phases provably cancel; only these may lower approximately.
  bool phase_safe = false;
  /// Preferred dirty-borrow qubits for lowering this MCT site. Parallel
  /// clause gadgets need disjoint pools or the scheduler serializes them.
  std::vector<QubitId> borrow_hint;

  bool control_negated(size_t i) const {
    return i / 64 < neg_polarity.size() && (neg_polarity[i / 64] >> (i % 64)) & 1;
  }
  void set_control_negated(size_t i);
  bool any_negated() const;
  /// All distinct qubits the gate acts on or reads (controls + target).
  size_t arity() const { return controls.size() + 1; }

  static Gate x(QubitId t);
  static Gate phase1q(Phase1QKind k, QubitId t);
  static Gate cnot(QubitId c, QubitId t, bool neg = false);
  static Gate toffoli(QubitId c0, QubitId c1, QubitId t);
  static Gate approx_toffoli(QubitId c0, QubitId c1, QubitId t);
  /// Builds X/Cnot/Toffoli/Mct depending on control count; polarity bit i
  /// negates control i.
  static Gate mct(std::vector<QubitId> controls, QubitId t,
                  const std::vector<bool>& negated = {});
};

enum class Level : uint8_t { MctLevel, ToffoliLevel, ElementaryLevel };

const char* to_string(Level level);

/// True when `kind` may appear in a circuit at `level`.
bool kind_allowed(GateKind kind, Level level);

/// Streaming consumer of a gate sequence. Synthesis and lowering emit into
/// sinks so large benchmark circuits never need materializing.
class GateSink {
 public:
  virtual ~GateSink() = default;
  virtual void on_gate(const Gate& g) = 0;
};

struct CostReport {
  uint64_t size = 0;
  uint64_t depth = 0;
  uint64_t toffoli_count = 0;
  uint64_t mct_calls = 0;
  uint32_t ancillas_touched = 0;
  Level level = Level::MctLevel;

  std::string to_json() const;
};

/// Immutable-after-construction gate list over a typed layout.
class Circuit : public GateSink {
 public:
  Circuit(Layout layout, Level level) : layout_(layout), level_(level) {}

  const Layout& layout() const { return layout_; }
  Level level() const { return level_; }
  const std::vector<Gate>& gates() const { return gates_; }
  size_t size() const { return gates_.size(); }

  /// Validates layout bounds, qubit collisions inside the gate, and the
  /// level's admissible gate kinds; throws ValidationError.
  void append(Gate g);
  void on_gate(const Gate& g) override { append(g); }

  Circuit inverse() const;
  static Circuit compose(const Circuit& a, const Circuit& b);

  CostReport cost() const;

 private:
  Layout layout_;
  Level level_;
  std::vector<Gate> gates_;
};

void validate_gate(const Gate& g, const Layout& layout, Level level);

/// Streaming cost model: size, ASAP-layered depth (two gates conflict iff
/// they share any qubit, including controls and borrow-expanded qubits),
/// Toffoli/MCT tallies, distinct ancillas touched.
class CostAccumulator : public GateSink {
 public:
  explicit CostAccumulator(const Layout& layout, Level level);
  void on_gate(const Gate& g) override;
  CostReport report() const;

 private:
  Layout layout_;
  Level level_;
  uint64_t size_ = 0;
  uint64_t depth_ = 0;
  uint64_t toffoli_ = 0;
  uint64_t mct_ = 0;
  std::vector<uint64_t> front_;        // per-qubit earliest free layer
  std::vector<uint8_t> anc_touched_;
  uint32_t anc_count_ = 0;
};

CostReport cost(const Circuit& c);

/// Forwards one stream to two sinks.
class TeeSink : public GateSink {
 public:
  TeeSink(GateSink& a, GateSink& b) : a_(a), b_(b) {}
  void on_gate(const Gate& g) override {
    a_.on_gate(g);
    b_.on_gate(g);
  }

 private:
  GateSink& a_;
  GateSink& b_;
};

}  // namespace satoc
