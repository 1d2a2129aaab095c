#include "doctest.h"

#include <chrono>
#include <cmath>

#include "satoc/lowering.hpp"
#include "satoc/sim.hpp"
#include "satoc/synth.hpp"
#include "support/test_util.hpp"

using namespace satoc;

namespace {

BasisState make_state(const Layout& layout, uint64_t bits) {
  BasisState s;
  s.bits.resize(layout.total());
  for (uint32_t i = 0; i < layout.total(); ++i) s.bits[i] = (bits >> i) & 1;
  return s;
}

uint64_t pack_bits(const BasisState& s) {
  uint64_t out = 0;
  for (size_t i = 0; i < s.bits.size(); ++i)
    if (s.bits[i]) out |= uint64_t(1) << i;
  return out;
}

}  // namespace

TEST_CASE("X flips one bit with sign +1") {
  Layout layout{0, 2, 1};
  Circuit c(layout, Level::MctLevel);
  c.append(Gate::x(QubitId::ancilla(0)));
  BasisState out = simulate(c, make_state(layout, 0b000));
  CHECK(pack_bits(out) == 0b001);
  CHECK(out.sign() == +1);
}

TEST_CASE("Toffoli fires only when both controls set") {
  Layout layout{2, 0, 1};
  Circuit c(layout, Level::MctLevel);
  c.append(Gate::toffoli(QubitId::input(0), QubitId::input(1), QubitId::target()));
  CHECK(pack_bits(simulate(c, make_state(layout, 0b011))) == 0b111);
  CHECK(pack_bits(simulate(c, make_state(layout, 0b001))) == 0b001);
  CHECK(pack_bits(simulate(c, make_state(layout, 0b111))) == 0b011);
}

TEST_CASE("approximate Toffoli table matches the product of its 7 gate matrices") {
  // Independent oracle: multiply the frozen Margolus decomposition out with
  // the dense simulator and compare, basis state by basis state, against the
  // atomic gate's permutation and sign.
  Layout layout{2, 0, 1};  // in[0]=c0, in[1]=c1, tgt
  Circuit expansion(layout, Level::ElementaryLevel);
  expand_toffoli_approx(QubitId::input(0), QubitId::input(1), QubitId::target(),
                        expansion);
  CHECK(expansion.size() == kApproxToffoliGateCount);

  for (uint64_t in = 0; in < 8; ++in) {
    test::StateVector sv = test::StateVector::basis(3, in);
    sv.apply_all(expansion);
    auto [out, phase] = sv.basis_decompose();

    bool c0 = in & 1, c1 = in & 2, t = in & 4;
    uint64_t expect = (c0 && c1) ? (in ^ 4) : in;
    double expect_sign = approx_toffoli_sign_flips(c0, c1, t) ? -1.0 : 1.0;
    CHECK(out == expect);
    CHECK(phase.real() == doctest::Approx(expect_sign).epsilon(1e-9));
    CHECK(phase.imag() == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("exact Toffoli expansion is the Toffoli unitary, sign-exact") {
  Layout layout{2, 0, 1};
  Circuit expansion(layout, Level::ElementaryLevel);
  expand_toffoli_exact(QubitId::input(0), QubitId::input(1), QubitId::target(),
                       expansion);
  CHECK(expansion.size() == kExactToffoliGateCount);

  for (uint64_t in = 0; in < 8; ++in) {
    test::StateVector sv = test::StateVector::basis(3, in);
    sv.apply_all(expansion);
    auto [out, phase] = sv.basis_decompose();
    uint64_t expect = ((in & 1) && (in & 2)) ? (in ^ 4) : in;
    CHECK(out == expect);
    CHECK(phase.real() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(phase.imag() == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("simulate composes and inverts") {
  Layout layout{3, 3, 1};
  auto f = random_kcnf(3, 5, 2, 11);
  Circuit c = synth_size(f, 3);
  Circuit inv = c.inverse();
  Circuit both = Circuit::compose(c, inv);

  SplitMix64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    BasisState s = make_state(layout, rng.below(uint64_t(1) << layout.total()));
    BasisState round = simulate(both, s);
    CHECK(pack_bits(round) == pack_bits(s));
    CHECK(round.sign() == +1);

    // compose = run one after the other
    BasisState a = simulate(inv, simulate(c, s));
    CHECK(pack_bits(a) == pack_bits(round));
  }
}

TEST_CASE("diagonal phase gates accumulate 8th roots") {
  Layout layout{0, 0, 1};
  Circuit c(layout, Level::ElementaryLevel);
  for (int i = 0; i < 4; ++i) c.append(Gate::phase1q(Phase1QKind::T, QubitId::target()));
  BasisState s = make_state(layout, 1);
  BasisState out = simulate(c, s);
  CHECK(out.phase_octant == 4);  // T^4 = Z
  CHECK(out.sign() == -1);

  Circuit c2(layout, Level::ElementaryLevel);
  c2.append(Gate::phase1q(Phase1QKind::T, QubitId::target()));
  BasisState mid = simulate(c2, s);
  CHECK(mid.phase_octant == 1);
  CHECK(mid.is_real_sign() == false);

  // H is not monomial: basis simulation must refuse.
  Circuit c3(layout, Level::ElementaryLevel);
  c3.append(Gate::phase1q(Phase1QKind::H, QubitId::target()));
  CHECK_THROWS_AS(simulate(c3, s), ValidationError);
}

TEST_CASE("packed and scalar simulators agree") {
  auto f = random_kcnf(6, 18, 3, 5);
  Circuit c = lower_to_toffoli(synth_size(f, 4), LoweringConfig{ToffoliMode::Approximate});
  SimProgram prog = SimProgram::compile(c);
  const uint32_t q = prog.num_qubits();

  SplitMix64 rng(17);
  std::vector<uint64_t> words(q);
  for (auto& w : words) w = rng.next();
  std::vector<uint64_t> init = words;
  uint64_t sign_word = 0;
  prog.run_packed(words, sign_word);

  for (int lane = 0; lane < 64; ++lane) {
    BasisState s;
    s.bits.resize(q);
    for (uint32_t i = 0; i < q; ++i) s.bits[i] = (init[i] >> lane) & 1;
    BasisState out = prog.run_scalar(s);
    for (uint32_t i = 0; i < q; ++i)
      CHECK(static_cast<uint64_t>(out.bits[i]) == ((words[i] >> lane) & 1));
    CHECK((out.phase_octant == 4) == static_cast<bool>((sign_word >> lane) & 1));
  }
}

TEST_CASE("verify_oracle flags a corrupted circuit") {
  auto f = random_kcnf(8, 30, 3, 21);
  Circuit c = synth_size(f, 5);
  SimProgram good = SimProgram::compile(c);
  CHECK(verify_oracle(good, f).passed());

  // Gates that only compensate dirty ancilla contents never fire when the
  // ancillas start clean, so deleting one is invisible to CleanZero checks;
  // the dirty trials are what catch those mutants.
  VerifyOptions dirty;
  dirty.ancillas = AncillaPolicy::RandomDirty;
  dirty.dirty_trials = 4;
  size_t victims = 0, caught = 0;
  for (size_t i = 0; i < good.num_ops(); i += 7) {
    ++victims;
    SimProgram mutant = good.without_op(i);
    if (verify_oracle(mutant, f).total_failures() > 0 ||
        verify_oracle(mutant, f, dirty).total_failures() > 0)
      ++caught;
  }
  CHECK(caught == victims);  // every sampled deletion must be seen
}

TEST_CASE("exhaustive verification of a mid-size oracle is fast enough") {
  auto f = random_kcnf(12, 50, 3, 33);
  Circuit c = synth_size(f, 24);
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep = verify_oracle(c, f);
  auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(rep.passed());
  CHECK(rep.states_checked == (uint64_t(1) << 13));
  CHECK(seconds < 60.0);
}

TEST_CASE("gadget verifier covers dirty ancilla patterns exhaustively") {
  // CNOT from in[0] to tgt restores nothing else; trivially a gadget.
  Layout layout{1, 3, 1};
  Circuit c(layout, Level::MctLevel);
  c.append(Gate::cnot(QubitId::input(0), QubitId::target()));
  auto rep = verify_gadget(SimProgram::compile(c),
                           [](uint64_t x) { return (x & 1) != 0; });
  CHECK(rep.passed());
  CHECK(rep.states_checked == 32);  // all 2^5 basis states
}
