#include "antispec/square_well.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "antispec/errors.hpp"

namespace antispec {

SquareWellModel build_square_well(double Z, int N) {
  if (N < 16) throw InvalidInput("square well needs at least 16 grid points");
  if (!std::isfinite(Z)) throw InvalidInput("square well coupling must be finite");

  const double h = 2.0 / (N + 1);
  const double inv_h2 = 1.0 / (h * h);

  CMatrix H = CMatrix::Zero(N, N);
  for (int j = 0; j < N; ++j) {
    const double x = -1.0 + (j + 1) * h;
    const double sign = (x < 0.0) ? 1.0 : (x > 0.0 ? -1.0 : 0.0);
    H(j, j) = Complex(2.0 * inv_h2, sign * Z);
    if (j > 0) H(j, j - 1) = Complex(-inv_h2, 0.0);
    if (j + 1 < N) H(j, j + 1) = Complex(-inv_h2, 0.0);
  }

  CMatrix P = CMatrix::Zero(N, N);
  for (int j = 0; j < N; ++j) P(j, N - 1 - j) = Complex(1.0, 0.0);

  SquareWellModel model{H, AntiUnitaryOp(P, "parity"), Z, N, h};
  return model;
}

namespace {

// C(a) = cosh(sqrt a) and S(a) = sinh(sqrt a)/sqrt a as entire functions of
// a; their derivatives in a.  S' needs a series near a = 0 because the
// closed form (C - S)/(2a) cancels there.
Complex fn_C(Complex a) { return std::cosh(std::sqrt(a)); }

Complex fn_S(Complex a) {
  if (std::abs(a) < 1e-12) return 1.0 + a / 6.0 + a * a / 120.0;
  const Complex r = std::sqrt(a);
  return std::sinh(r) / r;
}

Complex fn_Sp(Complex a) {
  if (std::abs(a) < 0.5) {
    Complex acc(1.0 / 6.0, 0.0);
    Complex p(1.0, 0.0);
    double fact = 6.0; // (2k+1)! at k = 1
    for (int k = 2; k <= 8; ++k) {
      p *= a;
      fact *= (2 * k) * (2 * k + 1);
      acc += double(k) * p / fact;
    }
    return acc;
  }
  return (fn_C(a) - fn_S(a)) / (2.0 * a);
}

struct MatchingEval {
  Complex value;
  Complex derivative; // d/dE
};

MatchingEval eval_matching(double Z, Complex E) {
  const Complex a = -(E + Complex(0.0, Z));
  const Complex b = -(E - Complex(0.0, Z));
  const Complex Ca = fn_C(a), Cb = fn_C(b);
  const Complex Sa = fn_S(a), Sb = fn_S(b);
  const Complex value = Ca * Sb + Cb * Sa;
  // dC/da = S/2, and both a and b carry da/dE = db/dE = -1.
  const Complex dA = 0.5 * Sa * Sb + Cb * fn_Sp(a);
  const Complex dB = 0.5 * Sb * Sa + Ca * fn_Sp(b);
  return {value, -(dA + dB)};
}

bool inside(const ComplexRect& r, Complex E, double pad) {
  return E.real() >= r.re_lo - pad && E.real() <= r.re_hi + pad &&
         E.imag() >= r.im_lo - pad && E.imag() <= r.im_hi + pad;
}

// Continuity system at x = 0 for (K_p, K_n); a genuine eigenvalue makes it
// singular.  Returns sigma_min/sigma_max and the unit null vector.
double matching_system(double Z, Complex E, Complex* kp, Complex* kn) {
  const Complex kappa = std::sqrt(-(E + Complex(0.0, Z)));
  const Complex lam = std::sqrt(-(E - Complex(0.0, Z)));
  Eigen::Matrix2cd B;
  B << std::sinh(kappa), -std::sinh(lam), -kappa * std::cosh(kappa), -lam * std::cosh(lam);
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(B, Eigen::ComputeFullV);
  Eigen::Vector2cd null = svd.matrixV().col(1);
  int lead;
  null.cwiseAbs().maxCoeff(&lead);
  null /= null(lead) / std::abs(null(lead)); // deterministic phase
  *kp = null(0);
  *kn = null(1);
  const double smax = svd.singularValues()(0);
  return smax > 0.0 ? svd.singularValues()(1) / smax : 0.0;
}

} // namespace

Complex square_well_matching_function(double Z, Complex E) { return eval_matching(Z, E).value; }

std::vector<MatchingSolution> square_well_matching(double Z, const ComplexRect& region, int grid) {
  if (grid < 2) throw InvalidInput("matching seed grid must have at least 2 points per axis");
  if (region.re_hi < region.re_lo || region.im_hi < region.im_lo)
    throw InvalidInput("matching region is empty");

  const double re_span = region.re_hi - region.re_lo;
  const double im_span = region.im_hi - region.im_lo;
  const double pad = 1e-7 * (re_span + im_span + 1.0);
  const int im_grid = im_span > 0.0 ? grid : 1;

  std::vector<Complex> roots;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < im_grid; ++j) {
      Complex E(region.re_lo + (i + 0.5) * re_span / grid,
                im_span > 0.0 ? region.im_lo + (j + 0.5) * im_span / im_grid : region.im_lo);
      bool converged = false;
      for (int it = 0; it < 80; ++it) {
        const MatchingEval f = eval_matching(Z, E);
        if (!std::isfinite(std::abs(f.value)) || !std::isfinite(std::abs(f.derivative)) ||
            std::abs(f.derivative) == 0.0)
          break;
        const Complex step = f.value / f.derivative;
        E -= step;
        if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(E))) {
          converged = true;
          break;
        }
      }
      if (!converged || !inside(region, E, pad)) continue; // diverged seeds are dropped
      roots.push_back(E);
    }
  }

  std::sort(roots.begin(), roots.end(), spectral_less);
  std::vector<MatchingSolution> out;
  for (const Complex& E : roots) {
    const double dedupe = 1e-8 * std::max(1.0, std::abs(E));
    const bool dup = std::any_of(out.begin(), out.end(), [&](const MatchingSolution& s) {
      return std::abs(s.E - E) <= dedupe;
    });
    if (dup) continue;
    MatchingSolution s;
    s.E = E;
    s.kappa = std::sqrt(-(E + Complex(0.0, Z)));
    s.lambda_star = std::sqrt(-(E - Complex(0.0, Z)));
    s.residual = matching_system(Z, E, &s.K_p, &s.K_n);
    if (s.residual > 1e-10) continue; // Newton artefact, not a root of the system
    out.push_back(s);
  }
  if (out.empty()) throw NoRootInRegion("no matching root inside the requested region");
  return out;
}

CVector square_well_lowest(double Z, int N, int k) {
  if (k < 1) throw InvalidInput("need at least one eigenvalue");
  if (N < 16) throw InvalidInput("square well needs at least 16 grid points");
  if (k > N / 4) throw InvalidInput("requested too many eigenvalues for the Arnoldi probe");

  const double h = 2.0 / (N + 1);
  const double inv_h2 = 1.0 / (h * h);

  Eigen::SparseMatrix<Complex> H(N, N);
  {
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(3 * N);
    for (int j = 0; j < N; ++j) {
      const double x = -1.0 + (j + 1) * h;
      const double sign = (x < 0.0) ? 1.0 : (x > 0.0 ? -1.0 : 0.0);
      trips.emplace_back(j, j, Complex(2.0 * inv_h2, sign * Z));
      if (j > 0) trips.emplace_back(j, j - 1, Complex(-inv_h2, 0.0));
      if (j + 1 < N) trips.emplace_back(j, j + 1, Complex(-inv_h2, 0.0));
    }
    H.setFromTriplets(trips.begin(), trips.end());
  }

  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.compute(H);
  if (lu.info() != Eigen::Success)
    throw NoConvergence("sparse factorization of the well matrix failed");

  const int m = std::min(N, std::max(60, 2 * k + 20));
  CMatrix V(N, m + 1);
  CMatrix Hess = CMatrix::Zero(m + 1, m);

  // Deterministic dense start vector; randomness breaks the parity symmetry
  // of the grid so both sectors enter the Krylov space.
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v0(N);
  for (int j = 0; j < N; ++j) v0(j) = Complex(gauss(rng), gauss(rng));
  V.col(0) = v0 / v0.norm();

  int steps = m;
  for (int j = 0; j < m; ++j) {
    CVector w = lu.solve(V.col(j));
    for (int pass = 0; pass < 2; ++pass) { // MGS with reorthogonalization
      for (int i = 0; i <= j; ++i) {
        const Complex c = V.col(i).dot(w);
        w -= c * V.col(i);
        Hess(i, j) += c;
      }
    }
    const double nrm = w.norm();
    Hess(j + 1, j) = nrm;
    if (nrm < 1e-14) {
      steps = j + 1;
      break;
    }
    V.col(j + 1) = w / nrm;
  }

  Eigen::ComplexEigenSolver<CMatrix> es(Hess.topLeftCorner(steps, steps));
  if (es.info() != Eigen::Success) throw NoConvergence("Arnoldi projection eigensolve failed");

  std::vector<std::pair<Complex, double>> ritz; // eigenvalue, residual
  for (int i = 0; i < steps; ++i) {
    const Complex theta = es.eigenvalues()(i);
    if (std::abs(theta) < 1e-14) continue;
    const Complex lambda = 1.0 / theta;
    CVector x = V.leftCols(steps) * es.eigenvectors().col(i);
    x /= x.norm();
    const double res = (H * x - lambda * x).norm() / std::max(1.0, std::abs(lambda));
    ritz.emplace_back(lambda, res);
  }
  std::sort(ritz.begin(), ritz.end(),
            [](const auto& p, const auto& q) { return spectral_less(p.first, q.first); });

  CVector out(k);
  int found = 0;
  for (const auto& [lambda, res] : ritz) {
    if (res > 1e-9) continue;
    if (found > 0 && std::abs(lambda - out(found - 1)) <= 1e-10 * std::max(1.0, std::abs(lambda)))
      continue; // duplicate Ritz copy of the same eigenvalue
    out(found++) = lambda;
    if (found == k) break;
  }
  if (found < k)
    throw NoConvergence("Arnoldi probe converged fewer eigenvalues than requested", found);
  return out;
}

} // namespace antispec
