#include "doctest.h"

#include <functional>

#include "satoc/gand.hpp"
#include "satoc/sim.hpp"
#include "support/test_util.hpp"

using namespace satoc;

namespace {

GandPlan make_plan(uint32_t p, GandMode mode = GandMode::And) {
  GandPlan plan;
  plan.p = p;
  plan.mode = mode;
  plan.target = QubitId::target();
  for (uint32_t i = 0; i < 2 * p - 2; ++i)
    plan.ancillas.push_back(QubitId::ancilla(i));
  return plan;
}

// Exhaustive functional + dirty-restoration check over every basis state of
// the whole layout (inputs x ancillas x target), which subsumes "for every
// basis assignment of the 2p-2 ancillas".
void check_gadget(const Circuit& c, const std::function<bool(uint64_t)>& reference) {
  auto rep = verify_gadget(SimProgram::compile(c), reference);
  CHECK(rep.target_failures == 0);
  CHECK(rep.ancilla_restoration_failures == 0);
  CHECK(rep.sign_failures == 0);
  CHECK(rep.states_checked == uint64_t(1) << (c.layout().n_inputs +
                                              c.layout().n_ancillas + 1));
}

}  // namespace

TEST_CASE("p=2 GAND computes the AND of two clause oracles on dirty ancillas") {
  Layout layout{4, 2, 1};
  Clause c1{{1, false}, {2, true}};   // x1 or not-x2
  Clause c2{{3, false}, {4, false}};  // x3 or x4
  auto circuit = build_gand(make_plan(2), {test::clause_oracle(c1), test::clause_oracle(c2)},
                            layout);
  check_gadget(circuit, [](uint64_t x) {
    bool g1 = (x & 1) || !(x & 2);
    bool g2 = (x & 4) || (x & 8);
    return g1 && g2;
  });
}

TEST_CASE("p=3 GAND: three clause oracles, exhaustive against evaluate") {
  Layout layout{6, 4, 1};
  auto f = parse_dimacs("p cnf 6 3\n1 -2 0\n3 4 0\n-5 6 0\n");
  std::vector<OracleBuilder> oracles;
  for (const auto& clause : f.clauses) oracles.push_back(test::clause_oracle(clause));
  auto circuit = build_gand(make_plan(3), oracles, layout);
  check_gadget(circuit, [&](uint64_t x) { return test::evaluate_reference(f, x); });
}

TEST_CASE("p=4 GAND with random clauses") {
  Layout layout{8, 6, 1};
  auto f = random_kcnf(8, 4, 3, 1234);
  std::vector<OracleBuilder> oracles;
  for (const auto& clause : f.clauses) oracles.push_back(test::clause_oracle(clause));
  auto circuit = build_gand(make_plan(4), oracles, layout);
  check_gadget(circuit, [&](uint64_t x) { return test::evaluate_reference(f, x); });
}

TEST_CASE("identity oracles: AND of equal bits is the bit") {
  Layout layout{1, 4, 1};
  std::vector<OracleBuilder> oracles(3, test::input_copy_oracle(0));
  auto circuit = build_gand(make_plan(3), oracles, layout);
  check_gadget(circuit, [](uint64_t x) { return (x & 1) != 0; });
}

TEST_CASE("GAND gate budget: exactly 8p-12 ladder Toffolis, each oracle at most 4 calls") {
  for (uint32_t p : {3u, 4u, 5u, 8u, 13u, 21u, 64u}) {
    Layout layout{1, 2 * p - 2, 1};
    std::vector<uint32_t> calls(p, 0);
    std::vector<OracleBuilder> oracles;
    for (uint32_t i = 0; i < p; ++i)
      oracles.push_back(OracleBuilder{[&calls, i](QubitId, GateSink&) { ++calls[i]; }});
    auto circuit = build_gand(make_plan(p), oracles, layout);

    uint64_t toffolis = 0;
    for (const auto& g : circuit.gates())
      if (g.kind == GateKind::Toffoli) ++toffolis;
    CHECK(toffolis == 8 * p - 12);
    for (uint32_t i = 0; i < p; ++i) CHECK(calls[i] <= 4);
    CHECK(calls[0] == 2);      // O_1 appears only in the two Top phases
    CHECK(calls[p - 1] == 2);  // O_p only in the Up/Down steps of the merge
  }
}

TEST_CASE("p=2 budget: 4 Toffolis, two calls each") {
  Layout layout{1, 2, 1};
  std::vector<uint32_t> calls(2, 0);
  std::vector<OracleBuilder> oracles;
  for (uint32_t i = 0; i < 2; ++i)
    oracles.push_back(OracleBuilder{[&calls, i](QubitId, GateSink&) { ++calls[i]; }});
  auto circuit = build_gand(make_plan(2), oracles, layout);
  uint64_t toffolis = 0;
  for (const auto& g : circuit.gates())
    if (g.kind == GateKind::Toffoli) ++toffolis;
  CHECK(toffolis == 4);
  CHECK(calls[0] == 2);
  CHECK(calls[1] == 2);
}

TEST_CASE("GOR: De Morgan over two input bits") {
  Layout layout{2, 2, 1};
  auto circuit = build_gor(make_plan(2),
                           {test::input_copy_oracle(0), test::input_copy_oracle(1)},
                           layout);
  check_gadget(circuit, [](uint64_t x) { return (x & 1) || (x & 2); });
}

TEST_CASE("GOR of constant-false oracles leaves the target alone") {
  Layout layout{1, 4, 1};
  std::vector<OracleBuilder> oracles(3, test::constant_false_oracle());
  auto circuit = build_gor(make_plan(3, GandMode::Or), oracles, layout);
  check_gadget(circuit, [](uint64_t) { return false; });
}

TEST_CASE("GOR: three random clause oracles against the classical evaluator") {
  Layout layout{6, 4, 1};
  auto f = random_kcnf(6, 3, 3, 77);
  std::vector<OracleBuilder> oracles;
  for (const auto& clause : f.clauses) oracles.push_back(test::clause_oracle(clause));
  auto circuit = build_gor(make_plan(3), oracles, layout);
  check_gadget(circuit, [&](uint64_t x) {
    for (uint32_t i = 0; i < 3; ++i) {
      CnfFormula single;
      single.num_vars = 6;
      single.clauses = {f.clauses[i]};
      if (test::evaluate_reference(single, x)) return true;
    }
    return false;
  });
}

TEST_CASE("larger gadgets keep the dirty guarantee under random ancilla states") {
  // p = 6 exceeds the exhaustive-all-qubits budget comfortably, so sample.
  const uint32_t p = 6;
  Layout layout{10, 2 * p - 2, 1};
  auto f = random_kcnf(10, p, 3, 55);
  std::vector<OracleBuilder> oracles;
  for (const auto& clause : f.clauses) oracles.push_back(test::clause_oracle(clause));
  auto circuit = build_gand(make_plan(p), oracles, layout);
  VerifyOptions vo;
  vo.mode = VerifyMode::Sampled;
  vo.sample_count = 100 * 64;
  auto rep = verify_gadget(SimProgram::compile(circuit),
                           [&](uint64_t x) { return test::evaluate_reference(f, x); }, vo);
  CHECK(rep.passed());
}

TEST_CASE("GAND rejects bad plans") {
  Layout layout{1, 2, 1};
  std::vector<OracleBuilder> oracles(2, test::input_copy_oracle(0));
  GandPlan plan = make_plan(2);
  plan.p = 1;
  CHECK_THROWS_AS(build_gand(plan, {test::input_copy_oracle(0)}, layout), ConfigError);

  GandPlan dup = make_plan(2);
  dup.ancillas[1] = dup.ancillas[0];
  CHECK_THROWS_AS(build_gand(dup, oracles, layout), ValidationError);

  GandPlan clash = make_plan(2);
  clash.ancillas[1] = clash.target;
  CHECK_THROWS_AS(build_gand(clash, oracles, layout), ValidationError);
}
