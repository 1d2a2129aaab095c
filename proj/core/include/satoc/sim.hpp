#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "satoc/circuit.hpp"
#include "satoc/cnf.hpp"

namespace satoc {

/// Computational-basis state with a phase tracked as an 8th root of unity
/// (octant k = e^{i k pi/4}). Every gate in simulation scope is monomial, so
/// basis propagation is exact.
struct BasisState {
  std::vector<bool> bits;  // flat layout order: inputs, ancillas, targets
  uint8_t phase_octant = 0;

  bool is_plus_one() const { return phase_octant == 0; }
  bool is_real_sign() const { return phase_octant == 0 || phase_octant == 4; }
  int sign() const { return phase_octant == 0 ? +1 : phase_octant == 4 ? -1 : 0; }
};

/// The approximate (Margolus-style) Toffoli acts as the Toffoli permutation
/// with a -1 on the single basis state where control0=1, control1=0, target=1.
/// Frozen from the 3-CNOT/4-Ry decomposition; tests re-derive it by matrix
/// multiplication.
bool approx_toffoli_sign_flips(bool c0, bool c1, bool t);

/// Reference scalar simulator. Accepts X/Cnot/Toffoli/ApproxToffoli/Mct at
/// any level plus diagonal Phase1Q gates (T, Tdg); rejects non-monomial
/// gates (H, Ry) with ValidationError.
BasisState simulate(const Circuit& c, BasisState state);

/// Compact executable form of a monomial circuit.
class SimProgram : public GateSink {
 public:
  explicit SimProgram(const Layout& layout);
  void on_gate(const Gate& g) override;
  static SimProgram compile(const Circuit& c);

  uint32_t num_qubits() const { return n_qubits_; }
  size_t num_ops() const { return ops_.size(); }
  const Layout& layout() const { return layout_; }

  /// Advances 64 independent basis states at once. words[q] holds qubit q's
  /// bit across the 64 lanes; sign_word accumulates -1 phases per lane.
  void run_packed(std::vector<uint64_t>& words, uint64_t& sign_word) const;

  BasisState run_scalar(BasisState state) const;

  /// Deletes op `index` (testing hook for mutation sensitivity).
  SimProgram without_op(size_t index) const;
  size_t count_ops(GateKind kind) const;

 private:
  struct Op {
    GateKind kind;
    uint32_t target;
    uint32_t ctrl_begin;
    uint32_t ctrl_count;
  };
  Layout layout_;
  uint32_t n_qubits_;
  std::vector<Op> ops_;
  std::vector<uint32_t> ctrl_pool_;  // (flat_index << 1) | negated

  friend class PackedVerifier;
};

enum class VerifyMode : uint8_t { Exhaustive, Sampled };
enum class AncillaPolicy : uint8_t { CleanZero, RandomDirty };

struct VerifyOptions {
  VerifyMode mode = VerifyMode::Exhaustive;
  uint64_t sample_count = 4096;   // Sampled mode
  AncillaPolicy ancillas = AncillaPolicy::CleanZero;
  uint32_t dirty_trials = 16;     // RandomDirty mode
  uint64_t seed = 1;              // sampling / dirty patterns
  size_t max_recorded_failures = 16;
};

struct VerifyFailure {
  uint64_t input_bits;
  uint64_t ancilla_bits;
  bool target_in;
  bool expected;
  bool got;
  std::string what;  // "target" | "input" | "ancilla" | "sign"
};

struct VerificationReport {
  std::string formula_id;
  VerifyMode mode = VerifyMode::Exhaustive;
  uint64_t states_checked = 0;
  uint64_t target_failures = 0;
  uint64_t input_failures = 0;
  uint64_t ancilla_restoration_failures = 0;
  uint64_t sign_failures = 0;
  std::vector<VerifyFailure> samples;

  bool passed() const {
    return target_failures == 0 && input_failures == 0 &&
           ancilla_restoration_failures == 0 && sign_failures == 0;
  }
  uint64_t total_failures() const {
    return target_failures + input_failures + ancilla_restoration_failures +
           sign_failures;
  }
  std::string to_json() const;
};

/// Checks the oracle contract C|x>|q>|c> = |x>|q>|c xor f(x)> with sign +1:
/// inputs unchanged, ancillas restored to their initial pattern, target
/// flipped exactly when f(x). Exhaustive mode covers all 2^(n+1) (x, c)
/// pairs; RandomDirty draws `dirty_trials` ancilla patterns per batch.
VerificationReport verify_oracle(const SimProgram& prog, const CnfFormula& f,
                                 const VerifyOptions& opts = {});
VerificationReport verify_oracle(const Circuit& c, const CnfFormula& f,
                                 const VerifyOptions& opts = {});

/// Restoration check for gadgets (GAND etc.): runs `prog` against a
/// reference function of the inputs and asserts every non-target qubit
/// returns to its initial value. `reference` maps input bits to the expected
/// target XOR.
VerificationReport verify_gadget(
    const SimProgram& prog, const std::function<bool(uint64_t)>& reference,
    const VerifyOptions& opts = {});

}  // namespace satoc
