#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "satoc/circuit.hpp"
#include "satoc/cnf.hpp"
#include "satoc/gand.hpp"

namespace satoc {

enum class SynthMode : uint8_t { Size, Depth };

enum class VariantSelect : uint8_t { Default, SmallAncilla, Auto };

struct SynthOptions {
  /// Ancillas assumed |0> at entry: enables the outermost clean merge
  /// (block values on clean holders, one MCT, uncompute). With false the
  /// whole circuit tolerates
  /// arbitrary ancilla contents and restores them.
  bool clean_ancillas = true;
  /// Small-ancilla Gray-cycle recursion (fan-in l instead of floor(l/2)+1).
  VariantSelect variant = VariantSelect::Default;
  uint32_t variant_auto_threshold = 3;
  /// Enlist input qubits untouched by a sub-block as extra dirty ancillas.
  bool reuse_idle_inputs = false;
  /// Depth mode only: fall back to the size-oriented recursion when the
  /// three-register partition is infeasible (else throw ConfigError naming
  /// the minimal feasible l).
  bool depth_fallback_to_size = true;
};

/// Size-oriented synthesis (ancilla budget l >= 3). Output is an MCT-level
/// circuit C with C|x>|q>|c> = |x>|q>|c xor f(x)>; with clean_ancillas the
/// q register is assumed and returned |0>, otherwise arbitrary and restored.
Circuit synth_size(const CnfFormula& f, uint32_t l, const SynthOptions& opts = {});
void synth_size_emit(const CnfFormula& f, uint32_t l, const SynthOptions& opts,
                     GateSink& sink);

/// Clause gadget: one MCT over the clause's variables (controls negated on
/// positive literals) plus an X on the target; width 1 degenerates to a CNOT.
void synth_clause(const Clause& clause, QubitId target, GateSink& sink);
Circuit synth_clause(const Clause& clause, QubitId target, const Layout& layout);

/// Three-register ancilla partition of the depth-oriented algorithm.
struct RegisterPartition {
  uint32_t parallelism = 1;  // S = max(ceil(k / log2 l), 1)
  uint32_t mem = 0;          // fanout copies, clean
  uint32_t dirty = 0;        // recursion scratch
  uint32_t clean = 0;        // parallel merge slots, clean

  static RegisterPartition plan(uint32_t l, uint32_t k);
  bool feasible() const { return dirty >= 3 && clean >= 1; }
};

/// Smallest l whose partition is feasible for clause width k.
uint32_t min_depth_ancillas(uint32_t k);

/// Copies per variable for one parallel clause block: t[v] = gadgets reading
/// v, greedily capped (descending demand) so the extra copies fit capacity.
struct FanoutTable {
  std::vector<uint32_t> copies;  // index = variable - 1; >= 1 everywhere
  uint32_t total_extra = 0;
};

FanoutTable plan_fanout(const std::vector<std::vector<uint32_t>>& gadget_vars,
                        uint32_t num_vars, uint32_t capacity);

/// Depth-oriented synthesis. Requires clean ancillas; the innermost level
/// computes pairwise clause ANDs in parallel (Copy/Clause/Merge/Reset) and
/// block values merge through clean Toffoli trees.
Circuit synth_depth(const CnfFormula& f, uint32_t l, const SynthOptions& opts = {});
void synth_depth_emit(const CnfFormula& f, uint32_t l, const SynthOptions& opts,
                      GateSink& sink);

/// Dispatch by mode; depth mode reports (via the return flag) whether the
/// partition was infeasible and the size recursion ran instead.
struct SynthResult {
  SynthMode requested;
  bool depth_fell_back = false;
};
SynthResult synth_emit(const CnfFormula& f, uint32_t l, SynthMode mode,
                       const SynthOptions& opts, GateSink& sink);

Layout oracle_layout(const CnfFormula& f, uint32_t l);

}  // namespace satoc
