#include <cmath>
#include <numbers>
#include <random>

#include "antispec/classifier.hpp"
#include "antispec/errors.hpp"
#include "antispec/planted.hpp"
#include "antispec/random.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace antispec;

TEST_SUITE("classifier") {

TEST_CASE("flip_value takes the principal branch and pins Omega=-1 to +i") {
  CHECK(flip_value(Complex(1, 0)) == Complex(1, 0));
  CHECK(flip_value(Complex(-1, 0)) == Complex(0, 1));
  // numerical noise straddling the negative real axis must not flip the sign
  CHECK(std::abs(flip_value(Complex(-1, -1e-15)) - Complex(0, 1)) <= 1e-7);
  const Complex om = std::polar(1.0, 1.3);
  const Complex w = flip_value(om);
  CHECK(std::abs(w * w - om) <= 1e-14);
  CHECK(w.real() > 0);
  // lower half plane input stays principal: arg(w) in (-pi/2, 0)
  const Complex w2 = flip_value(std::conj(om));
  CHECK(std::abs(w2 * w2 - std::conj(om)) <= 1e-14);
  CHECK(w2.real() > 0);
  CHECK(w2.imag() < 0);
  CHECK_THROWS_AS((void)flip_value(Complex(0.5, 0)), NotUnimodular);
}

TEST_CASE("gauge_fix produces a genuine fixed point of the anti-unitary") {
  const double th = 2.4;
  CMatrix u(1, 1);
  u << std::polar(1.0, th);
  AntiUnitaryOp a(u);
  CVector psi(1);
  psi << Complex(1.0, 0.0);  // A psi = e^{i th} psi
  const GaugeFixed gf = gauge_fix(psi, a);
  CHECK((antispec::apply(a, gf.state) - gf.state).norm() <= 1e-12);
  CHECK(std::abs(gf.phase - std::polar(1.0, th / 2)) <= 1e-12);
  // the naive opposite half-phase is not a fixed point (anti-linearity)
  const CVector naive = std::polar(1.0, -th / 2) * psi;
  CHECK((antispec::apply(a, naive) - naive).norm() > 0.5);
}

TEST_CASE("gauge_fix rejects states that are not symmetry-parallel") {
  AntiUnitaryOp a(CMatrix::Identity(2, 2));
  CVector psi(2);
  psi << Complex(1, 0), Complex(0, 1);
  psi /= psi.norm();  // A psi = conj(psi), orthogonal to psi
  CHECK_THROWS_AS((void)gauge_fix(psi, a), NotProportional);
}

TEST_CASE("each planted kind is recovered individually") {
  struct Case {
    PlantedBlockSpec spec;
  };
  const Complex om_star = std::polar(1.0, 2.0);
  std::vector<PlantedBlockSpec> specs = {
      {RepKind::GammaPlus1D, Complex(1.5, 0), {}},
      {RepKind::GammaPlus2D, Complex(0.5, 0.8), {}},
      {RepKind::GammaMinus2D, Complex(-1.0, 1.2), {}},
      {RepKind::GammaStar2D, Complex(2.0, 0.6), om_star},
      {RepKind::GammaPlusDeg, Complex(-2.5, 0), {}},
      {RepKind::GammaMinusDeg, Complex(0.25, 0), {}},
      {RepKind::GammaStarDeg, Complex(3.0, 0), om_star},
  };
  std::uint64_t seed = 100;
  for (const auto& s : specs) {
    PlantedPlan plan;
    plan.seed = seed++;
    plan.blocks = {s};
    const PlantedModel m = build_planted(plan);
    const ClassificationReport rep = classify(m.hamiltonian, m.symmetry);
    std::string why;
    const bool ok = report_matches(rep, m.expected, 1e-8, &why);
    INFO(rep_kind_name(s.kind), ": ", why);
    CHECK(ok);
  }
}

TEST_CASE("a planted degenerate Omega=+1 doublet splits into two fixed singlets") {
  PlantedPlan plan;
  plan.seed = 42;
  plan.blocks = {{RepKind::GammaPlusDeg, Complex(1.0, 0), {}}};
  const PlantedModel m = build_planted(plan);
  const ClassificationReport rep = classify(m.hamiltonian, m.symmetry);
  REQUIRE(rep.blocks.size() == 2);
  for (const auto& b : rep.blocks) {
    CHECK(b.kind == RepKind::GammaPlus1D);
    CHECK(std::abs(b.energies[0] - Complex(1.0, 0)) <= 1e-8);
    CHECK(b.residuals.flip <= 1e-8);
  }
  CHECK(rep.multiplicities.n_plus_1d == 2);
  CHECK(rep.multiplicities.n_plus == 0);
}

TEST_CASE("mixed degenerate cluster: Kramers pair plus a fixed singlet at one energy") {
  PlantedPlan plan;
  plan.seed = 43;
  plan.blocks = {{RepKind::GammaMinusDeg, Complex(0.7, 0), {}},
                 {RepKind::GammaPlus1D, Complex(0.7, 0), {}}};
  const PlantedModel m = build_planted(plan);
  const ClassificationReport rep = classify(m.hamiltonian, m.symmetry);
  CHECK(rep.multiplicities.n_minus == 1);
  CHECK(rep.multiplicities.n_plus_1d == 1);
  CHECK(rep.unassigned.empty());
}

TEST_CASE("coincident complex pairs with different Omega separate cleanly") {
  const Complex e(1.0, 0.9);
  PlantedPlan plan;
  plan.seed = 44;
  plan.blocks = {{RepKind::GammaMinus2D, e, {}}, {RepKind::GammaPlus2D, e, {}}};
  const PlantedModel m = build_planted(plan);
  const ClassificationReport rep = classify(m.hamiltonian, m.symmetry);
  std::string why;
  const bool ok = report_matches(rep, m.expected, 1e-8, &why);
  INFO(why);
  CHECK(ok);
}

TEST_CASE("non-commuting input throws SymmetryViolated with the residual attached") {
  std::mt19937_64 rng(17);
  AntiUnitaryOp a(random_unitary(4, rng));
  const CMatrix h = random_gaussian(4, rng);
  try {
    (void)classify(h, a);
    FAIL("expected SymmetryViolated");
  } catch (const SymmetryViolated& e) {
    CHECK(e.residual > 1e-3);
  }
}

TEST_CASE("random planted plans: full recovery and dimension bookkeeping") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const PlantedPlan plan = random_plan(rng);
    const PlantedModel m = build_planted(plan);
    const ClassificationReport rep = classify(m.hamiltonian, m.symmetry);
    std::string why;
    const bool ok = report_matches(rep, m.expected, 1e-8, &why);
    INFO("trial ", trial, ": ", why);
    CHECK(ok);
    const auto& mu = rep.multiplicities;
    const int covered = 2 * (mu.n_star + mu.n_minus + mu.n_plus) + mu.n_plus_1d +
                        static_cast<int>(rep.unassigned.size());
    CHECK(covered == rep.dim);
  }
}

TEST_CASE("planted eigenvalues cross-check against the polynomial oracle") {
  std::mt19937_64 rng(7);
  const PlantedPlan plan = random_plan(rng, 3);
  const PlantedModel m = build_planted(plan);
  if (m.hamiltonian.rows() <= 8) {
    const auto ev = oracle::eigenvalues(m.hamiltonian);
    std::vector<Complex> want;
    for (const auto& b : m.expected.blocks)
      for (const auto& e : b.energies) want.push_back(e);
    CHECK(oracle::multiset_distance(ev, want) <= 1e-6);
  }
}

}  // TEST_SUITE
