#include "satoc/gand.hpp"

#include <algorithm>

namespace satoc {

namespace {

struct GandEmitter {
  const GandPlan& plan;
  const std::vector<OracleBuilder>& oracles;
  GateSink& sink;
  const GandStepObserver* observer;

  QubitId anc(uint32_t one_based) const { return plan.ancillas[one_based - 1]; }

  void ladder_toffoli(const std::string& label, QubitId c0, QubitId c1, QubitId t) {
    Gate g = Gate::toffoli(c0, c1, t);
    if (observer && observer->on_toffoli) observer->on_toffoli(label, g);
    sink.on_gate(g);
  }

  // Oracle indices are 1-based as in the construction. In Or mode every call
  // is X-conjugated on its target so the gadget folds the negations.
  void call_oracle(const std::string& label, uint32_t index) {
    QubitId t = anc(index);
    if (observer && observer->on_oracle_call)
      observer->on_oracle_call(label, index, t);
    if (plan.mode == GandMode::Or) sink.on_gate(Gate::x(t));
    oracles[index - 1].emit(t, sink);
  }

  // Merge-stage step i for p >= 3; restore re-runs steps 2..2p-4.
  void step(uint32_t i, const std::string& prefix) {
    const uint32_t p = plan.p;
    const std::string base = prefix + std::to_string(i) + ".";
    if (i <= p - 2) {  // Up phase
      QubitId c0 = anc(p + 1 - i), c1 = anc(2 * p - 1 - i);
      QubitId t = i == 1 ? plan.target : anc(2 * p - i);
      ladder_toffoli(base + "1", c0, c1, t);
      call_oracle(base + "2", p + 1 - i);
      ladder_toffoli(base + "3", c0, c1, t);
    } else if (i == p - 1) {  // Top phase, seven sub-steps
      QubitId c0 = anc(1), c1 = anc(2);
      QubitId t = p == 2 ? plan.target : anc(p + 1);
      ladder_toffoli(base + "1", c0, c1, t);
      call_oracle(base + "2", 2);
      ladder_toffoli(base + "3", c0, c1, t);
      call_oracle(base + "4", 1);
      ladder_toffoli(base + "5", c0, c1, t);
      call_oracle(base + "6", 2);
      ladder_toffoli(base + "7", c0, c1, t);
    } else {  // Down phase, i in [p, 2p-3]
      QubitId c0 = anc(i - p + 3), c1 = anc(i + 1);
      QubitId t = i == 2 * p - 3 ? plan.target : anc(i + 2);
      ladder_toffoli(base + "1", c0, c1, t);
      call_oracle(base + "2", i - p + 3);
      ladder_toffoli(base + "3", c0, c1, t);
    }
  }

  void run() {
    const uint32_t p = plan.p;
    if (p == 2) {
      // Degenerate gadget: the Top phase writes the target directly, and one
      // closing O_1 call undoes the q_1 xor g_1 the trace leaves behind.
      step(1, "");
      call_oracle("1.8", 1);
    } else {
      for (uint32_t i = 1; i <= 2 * p - 3; ++i) step(i, "");
      for (uint32_t i = 2; i <= 2 * p - 4; ++i) step(i, "r");
    }
    if (plan.mode == GandMode::Or) sink.on_gate(Gate::x(plan.target));
  }
};

void validate_plan(const GandPlan& plan, size_t oracle_count) {
  if (plan.p < 2)
    throw ConfigError("GAND needs fan-in p >= 2, got " + std::to_string(plan.p));
  if (oracle_count != plan.p)
    throw ValidationError("GAND fan-in " + std::to_string(plan.p) + " with " +
                          std::to_string(oracle_count) + " oracles");
  if (plan.ancillas.size() != 2 * size_t(plan.p) - 2)
    throw ConfigError("GAND fan-in " + std::to_string(plan.p) + " needs " +
                      std::to_string(2 * plan.p - 2) + " dirty ancillas, got " +
                      std::to_string(plan.ancillas.size()));
  for (size_t i = 0; i < plan.ancillas.size(); ++i) {
    if (plan.ancillas[i] == plan.target)
      throw ValidationError("GAND ancilla collides with target");
    for (size_t j = i + 1; j < plan.ancillas.size(); ++j)
      if (plan.ancillas[i] == plan.ancillas[j])
        throw ValidationError("duplicate GAND ancilla");
  }
}

}  // namespace

void build_gand(const GandPlan& plan, const std::vector<OracleBuilder>& oracles,
                GateSink& sink, const GandStepObserver* observer) {
  validate_plan(plan, oracles.size());
  GandEmitter{plan, oracles, sink, observer}.run();
}

Circuit build_gand(const GandPlan& plan, const std::vector<OracleBuilder>& oracles,
                   const Layout& layout) {
  Circuit c(layout, Level::MctLevel);
  build_gand(plan, oracles, c);
  return c;
}

Circuit build_gor(const GandPlan& plan, const std::vector<OracleBuilder>& oracles,
                  const Layout& layout) {
  GandPlan or_plan = plan;
  or_plan.mode = GandMode::Or;
  Circuit c(layout, Level::MctLevel);
  build_gand(or_plan, oracles, c);
  return c;
}

}  // namespace satoc
