#pragma once

#include <cstdint>
#include <vector>

#include "satoc/circuit.hpp"

namespace satoc {

enum class ToffoliMode : uint8_t { Exact, Approximate };
enum class MctStrategy : uint8_t { Auto, VChainDirty, Recursive };

struct LoweringConfig {
  ToffoliMode toffoli_mode = ToffoliMode::Exact;
  MctStrategy mct_strategy = MctStrategy::Auto;
};

/// MCT -> Toffoli stage. Per-site dirty-borrow pools come from the gate's
/// borrow_hint when sufficient, otherwise from the layout's remaining qubits
/// (any qubit works: the chain restores its borrows). Auto picks the
/// 4(a-2)-Toffoli V-chain when a-2 borrows exist, else the halving split
/// that needs a single borrow. Chain Toffolis not touching the site's real
/// target are marked phase_safe.
class MctLowerer : public GateSink {
 public:
  MctLowerer(GateSink& out, const Layout& layout, LoweringConfig cfg = {});
  void on_gate(const Gate& g) override;

 private:
  void lower_mct(const Gate& g);
  void emit_vchain(const std::vector<QubitId>& controls, QubitId target,
                   const std::vector<QubitId>& borrows, bool top_phase_safe);
  void emit_split(std::vector<QubitId> controls, QubitId target,
                  const std::vector<QubitId>& pool, bool top_phase_safe);
  std::vector<QubitId> pick_borrows(const Gate& g, size_t want) const;

  GateSink& out_;
  Layout layout_;
  LoweringConfig cfg_;
};

/// Toffoli -> elementary stage. Exact Toffolis expand to the frozen
/// 15-gate H/T/Tdg/CNOT network; phase-safe ones expand to the 7-gate
/// Margolus network in Approximate mode. Negative controls become X
/// conjugation here (those X gates count toward size and depth).
class ToffoliLowerer : public GateSink {
 public:
  ToffoliLowerer(GateSink& out, LoweringConfig cfg = {});
  void on_gate(const Gate& g) override;

 private:
  GateSink& out_;
  LoweringConfig cfg_;
};

/// Expansion of one positive-control Toffoli. force_approx demands the
/// Margolus form and throws ValidationError if the site is not phase-safe.
void expand_toffoli_exact(QubitId c0, QubitId c1, QubitId t, GateSink& out);
void expand_toffoli_approx(QubitId c0, QubitId c1, QubitId t, GateSink& out);
void expand_toffoli(const Gate& g, ToffoliMode mode, bool force_approx,
                    GateSink& out);

Circuit lower_to_toffoli(const Circuit& c, LoweringConfig cfg = {});
Circuit lower_to_elementary(const Circuit& c, LoweringConfig cfg = {});

/// Gate counts of the frozen expansions (exact: 15 gates; approx: 7).
constexpr uint32_t kExactToffoliGateCount = 15;
constexpr uint32_t kApproxToffoliGateCount = 7;

}  // namespace satoc
