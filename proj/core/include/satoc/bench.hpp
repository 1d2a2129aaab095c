#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "satoc/cnf.hpp"
#include "satoc/lowering.hpp"
#include "satoc/synth.hpp"

namespace satoc {

struct SweepSpec {
  uint32_t k = 4;
  std::vector<uint32_t> n_values;
  /// Clause count; unset = phase transition for this k.
  std::optional<uint32_t> m_override;
  std::optional<double> ratio;  // for k outside {3,4}
  uint32_t ensemble = 100;
  std::vector<uint32_t> ladder;  // ancilla budgets, strictly increasing
  SynthMode mode = SynthMode::Size;
  LoweringConfig lowering;
  SynthOptions synth;
  uint64_t seed = 1;
  uint32_t threads = 0;  // 0 = hardware concurrency
  /// Verification sampling bound; formulas with n <= exhaustive_max_n verify
  /// exhaustively, larger ones draw `samples` random inputs.
  uint32_t exhaustive_max_n = 12;
  uint64_t samples = 4096;

  static SweepSpec from_json(const std::string& text);
  std::string to_json() const;
  /// Stable hash of every field that affects the output table.
  uint64_t config_hash() const;
};

struct SweepRow {
  uint32_t k, n, m, l;
  SynthMode mode;
  bool depth_fell_back = false;
  double mean_size = 0, mean_depth = 0;
  double std_size = 0, std_depth = 0;
  double min_size = 0, max_size = 0;
  bool verified = false;
  uint64_t verify_failures = 0;
};

struct SweepTable {
  SweepSpec spec;
  std::vector<SweepRow> rows;

  /// Fixed column order k,n,m,l,mode,mean_size,mean_depth,std_size,
  /// std_depth,verified with a `# seed=... config=...` header comment.
  void write_csv(std::ostream& out) const;
  std::string to_json() const;
};

/// Synthesizes, verifies, lowers, and cost-counts one ensemble per (n, l).
/// A verification failure marks the row failed (costs still reported for
/// diagnosis); an infeasible depth partition marks depth_fell_back.
SweepTable run_sweep(const SweepSpec& spec);

/// Per-formula pipeline shared by sweep and estimator: emit at MCT level,
/// verify, lower, count.
struct OracleCost {
  CostReport cost;
  bool verified = false;
  uint64_t verify_failures = 0;
  bool depth_fell_back = false;
};
OracleCost synthesize_and_cost(const CnfFormula& f, uint32_t l, SynthMode mode,
                               const SynthOptions& sopts, LoweringConfig lcfg,
                               bool verify, uint32_t exhaustive_max_n,
                               uint64_t samples, uint64_t verify_seed);

struct GroverEstimate {
  uint32_t k, n, m, l;
  SynthMode mode;
  uint64_t one_round_size = 0;
  uint64_t one_round_depth = 0;
  uint64_t rounds = 0;
  uint64_t full_round_size = 0;
  uint64_t full_round_depth = 0;

  std::string to_json() const;
};

/// Grover iteration count under the single-solution assumption.
uint64_t grover_rounds(uint32_t n);

/// One Grover round = oracle + diffusion (H^n, X^n, (n-1)-control MCT, X^n,
/// H^n) lowered with the same config; full = rounds x one round.
GroverEstimate estimate_grover(uint32_t k, uint32_t n, uint32_t m, uint32_t l,
                               SynthMode mode, const SynthOptions& sopts = {},
                               LoweringConfig lcfg = {}, uint64_t seed = 1,
                               const CnfFormula* formula = nullptr);

}  // namespace satoc
