#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "satoc/circuit.hpp"

namespace satoc {

/// Produces a sub-oracle circuit |c> -> |c xor g_i(x)> on the given target.
/// The builder may borrow any qubit except its target as dirty scratch as
/// long as the emitted circuit restores it exactly.
struct OracleBuilder {
  std::function<void(QubitId target, GateSink& sink)> emit;
};

enum class GandMode : uint8_t { And, Or };

/// Plan for the general p-AND/p-OR gadget: p >= 2 sub-oracles folded onto
/// one target with 2p-2 dirty ancillas (merge + restore stages).
struct GandPlan {
  uint32_t p = 2;
  std::vector<QubitId> ancillas;  // exactly 2p-2, distinct, disjoint from target
  QubitId target;
  GandMode mode = GandMode::And;
};

/// Step observer for structural fixtures: called once per emitted ladder
/// Toffoli / oracle call with the construction's step label ("1.1", "2.4",
/// ..., prefixed "r" in the restore stage).
struct GandStepObserver {
  std::function<void(const std::string& label, const Gate& gate)> on_toffoli;
  std::function<void(const std::string& label, uint32_t oracle_index,
                     QubitId oracle_target)>
      on_oracle_call;
};

/// Emits the p-GAND: target xor= AND of g_i (OR via De Morgan in Or mode),
/// ancillas returned to their initial arbitrary values. Ladder Toffoli count
/// is exactly 8p-12 for p >= 3 (4 for p = 2); each oracle is invoked at most
/// four times.
void build_gand(const GandPlan& plan, const std::vector<OracleBuilder>& oracles,
                GateSink& sink, const GandStepObserver* observer = nullptr);

Circuit build_gand(const GandPlan& plan, const std::vector<OracleBuilder>& oracles,
                   const Layout& layout);
Circuit build_gor(const GandPlan& plan, const std::vector<OracleBuilder>& oracles,
                  const Layout& layout);

}  // namespace satoc
