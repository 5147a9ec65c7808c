#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "antispec/antiunitary.hpp"
#include "antispec/classifier.hpp"
#include "antispec/errors.hpp"
#include "antispec/linalg.hpp"
#include "antispec/square_well.hpp"
#include "oracles.hpp"
#include "doctest.h"

using namespace antispec;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Exact spectrum of the discrete Dirichlet Laplacian: the Z = 0 well is
// (1/h^2) tridiag(-1, 2, -1), whose eigenvalues are known in closed form.
double fd_laplacian_eigenvalue(int n, int N) {
  const double h = 2.0 / (N + 1);
  const double s = std::sin(n * kPi * h / 4.0);
  return 4.0 / (h * h) * s * s;
}

} // namespace

TEST_SUITE("square_well") {

TEST_CASE("builder validates and commutes with parity conjugation") {
  CHECK_THROWS_AS(build_square_well(1.0, 8), InvalidInput);

  for (int N : {16, 33, 64}) {
    const SquareWellModel m = build_square_well(2.5, N);
    CHECK(m.h == doctest::Approx(2.0 / (N + 1)).epsilon(1e-15));
    CHECK(check_commutation(m.hamiltonian, m.symmetry) <= 1e-12);
    // reversal composed with conjugation squares to +1
    CHECK((square(m.symmetry) - CMatrix::Identity(N, N)).norm() <= 1e-12);
    // potential is antisymmetric: diag entries come in conjugate mirror pairs
    for (int j = 0; j < N; ++j)
      CHECK(std::abs(m.hamiltonian(j, j) - std::conj(m.hamiltonian(N - 1 - j, N - 1 - j))) <=
            1e-12);
  }
}

TEST_CASE("hermitean limit reproduces the discrete Laplacian spectrum") {
  const int N = 64;
  const SquareWellModel m = build_square_well(0.0, N);
  const Eigensystem es = eig_general(m.hamiltonian);
  for (int n = 1; n <= N; ++n) {
    const double exact = fd_laplacian_eigenvalue(n, N);
    CHECK(std::abs(es.values(n - 1) - exact) <= 1e-9 * std::max(1.0, exact));
  }
}

TEST_CASE("matching solver at Z = 0 recovers n^2 pi^2 / 4") {
  const ComplexRect region{0.0, 110.0, 0.0, 0.0};
  const auto sols = square_well_matching(0.0, region, 64);
  REQUIRE(sols.size() >= 6);
  for (int n = 1; n <= 6; ++n) {
    const double exact = n * n * kPi * kPi / 4.0;
    CHECK(std::abs(sols[n - 1].E - exact) <= 1e-10 * std::max(1.0, exact));
    CHECK(sols[n - 1].residual <= 1e-10);
  }
}

TEST_CASE("normalized matching function equals the determinant form") {
  // Independent oracle: the raw determinant kappa cosh kappa sinh lambda +
  // lambda cosh lambda sinh kappa divided by kappa lambda.
  std::vector<Complex> probes = {{3.7, 0.4}, {-2.0, 1.5}, {25.0, -3.0}, {0.3, 0.0}, {60.0, 9.0}};
  for (double Z : {0.0, 1.7, 6.3}) {
    for (const Complex& E : probes) {
      const Complex kappa = std::sqrt(-(E + Complex(0, Z)));
      const Complex lam = std::sqrt(-(E - Complex(0, Z)));
      const Complex raw =
          kappa * std::cosh(kappa) * std::sinh(lam) + lam * std::cosh(lam) * std::sinh(kappa);
      const Complex norm = square_well_matching_function(Z, E);
      CHECK(std::abs(norm - raw / (kappa * lam)) <= 1e-12 * std::max(1.0, std::abs(norm)));
    }
  }
}

TEST_CASE("matching solver flags a rootless region") {
  const ComplexRect region{-40.0, -10.0, 0.0, 0.0};
  CHECK_THROWS_AS(square_well_matching(0.0, region), NoRootInRegion);
}

TEST_CASE("finite difference converges to the matching energies at O(h^2)") {
  const double Z = 2.0;
  const ComplexRect region{0.0, 15.0, -2.0, 2.0};
  const auto sols = square_well_matching(Z, region, 48);
  REQUIRE(sols.size() >= 2);
  const Complex exact = sols[0].E;

  auto lowest_fd = [&](int N) {
    const Eigensystem es = eig_general(build_square_well(Z, N).hamiltonian);
    return es.values(0);
  };
  const double err1 = std::abs(lowest_fd(100) - exact);
  const double err2 = std::abs(lowest_fd(200) - exact);
  // halving h divides the error by about 4
  CHECK(err1 / err2 >= 3.0);
  CHECK(err1 / err2 <= 5.0);
}

TEST_CASE("below-threshold well classifies as one-dimensional invariants only") {
  const int N = 48;
  const SquareWellModel m = build_square_well(1.5, N);
  const ClassificationReport rep = classify(m.hamiltonian, m.symmetry);
  CHECK(rep.multiplicities.n_plus_1d == N);
  CHECK(rep.multiplicities.n_star == 0);
  CHECK(rep.multiplicities.n_minus == 0);
  CHECK(rep.multiplicities.n_plus == 0);
  CHECK(rep.unassigned.empty());
}

TEST_CASE("spectrum stays conjugate symmetric across couplings") {
  for (double Z : {0.5, 3.0, 7.0}) {
    const SquareWellModel m = build_square_well(Z, 40);
    const Eigensystem es = eig_general(m.hamiltonian);
    std::vector<Complex> vals(es.values.data(), es.values.data() + es.values.size());
    std::vector<Complex> conj_vals;
    conj_vals.reserve(vals.size());
    for (const Complex& v : vals) conj_vals.push_back(std::conj(v));
    double scale = 1.0;
    for (const Complex& v : vals) scale = std::max(scale, std::abs(v));
    CHECK(oracle::multiset_distance(vals, conj_vals) <= 1e-8 * scale);
  }
}

TEST_CASE("arnoldi probe matches the exact discrete spectrum") {
  const int N = 2000;
  const CVector low = square_well_lowest(0.0, N, 6);
  for (int n = 1; n <= 6; ++n) {
    const double exact = fd_laplacian_eigenvalue(n, N);
    CHECK(std::abs(low(n - 1) - exact) <= 1e-9 * std::max(1.0, exact));
    // and the discretization itself is within 5e-5 relative of the continuum
    const double cont = n * n * kPi * kPi / 4.0;
    CHECK(std::abs(low(n - 1) - cont) <= 5e-5 * cont);
  }

  // complex coupling: cross-check against the dense solver on the same grid
  const int Nd = 220;
  const CVector low_d = square_well_lowest(4.0, Nd, 5);
  const Eigensystem es = eig_general(build_square_well(4.0, Nd).hamiltonian);
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(low_d(i) - es.values(i)) <= 1e-9 * std::max(1.0, std::abs(es.values(i))));
}

} // TEST_SUITE
