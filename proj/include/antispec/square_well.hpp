#pragma once

#include <vector>

#include "antispec/antiunitary.hpp"
#include "antispec/types.hpp"

namespace antispec {

// Finite-difference model of the imaginary square well on [-1, 1] with
// Dirichlet walls: H = -d^2/dx^2 + V_Z, where V_Z(x) = +iZ for x < 0 and
// -iZ for x > 0 (0 at a grid point sitting exactly on the centre, which is
// the antisymmetric limit).  The anti-unitary symmetry is spatial reversal
// composed with complex conjugation; on the interior grid the reversal is
// an exact permutation, so the commutation residual is at roundoff level.
struct SquareWellModel {
  CMatrix hamiltonian;
  AntiUnitaryOp symmetry;
  double Z = 0.0;
  int N = 0;      // interior grid points
  double h = 0.0; // spacing, 2 / (N + 1)
};

// Requires N >= 16.  Even N keeps the grid clear of x = 0.
SquareWellModel build_square_well(double Z, int N);

// Axis-aligned rectangle in the complex energy plane.  A degenerate
// rectangle (im_lo == im_hi) is allowed and means a segment of the real
// axis.
struct ComplexRect {
  double re_lo = 0.0;
  double re_hi = 0.0;
  double im_lo = 0.0;
  double im_hi = 0.0;
};

// Semi-analytic eigenvalue of the continuum well.  The piecewise ansatz is
//   psi(x) = K_n sinh(lambda_star (1 + x))  for x < 0,
//   psi(x) = K_p sinh(kappa (1 - x))        for x > 0,
// with kappa^2 = -(E + iZ) and lambda_star^2 = -(E - iZ); E solves the
// continuity conditions for psi and psi' at x = 0.
struct MatchingSolution {
  Complex E;
  Complex kappa;
  Complex lambda_star;
  Complex K_p;
  Complex K_n;
  double residual = 0.0; // sigma_min / sigma_max of the 2x2 matching system
};

// All matching roots inside the region, deduplicated and spectrally sorted.
// Newton iteration runs on the entire function
//   F(E) = C(a) S(b) + C(b) S(a),  a = kappa^2, b = lambda_star^2,
// with C(a) = cosh(sqrt a) and S(a) = sinh(sqrt a)/sqrt a.  This equals the
// determinant form kappa cosh(kappa) sinh(lambda_star) +
// lambda_star cosh(lambda_star) sinh(kappa) divided by kappa lambda_star,
// so it depends only on the squares (no branch ambiguity), keeps both root
// families (cosh-type and sinh-type), and drops the spurious zeros at
// kappa = 0 and lambda_star = 0 where the ansatz degenerates to psi == 0.
// grid is the number of Newton seeds per axis.  Throws NoRootInRegion when
// the region contains no root.
std::vector<MatchingSolution> square_well_matching(double Z, const ComplexRect& region,
                                                   int grid = 48);

// Value of the normalized matching function F(E); exposed for tests.
Complex square_well_matching_function(double Z, Complex E);

// The k lowest eigenvalues (by real part, then imaginary part) of the
// N-point discretized well, computed with shift-invert Arnoldi on the
// sparse tridiagonal matrix.  Intended for N far beyond the dense range;
// results are deterministic for fixed arguments.  Throws NoConvergence if
// fewer than k Ritz values pass the residual check.
CVector square_well_lowest(double Z, int N, int k);

} // namespace antispec
