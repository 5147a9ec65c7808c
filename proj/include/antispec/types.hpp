#pragma once

#include <Eigen/Dense>
#include <complex>

namespace antispec {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Canonical spectral order: lexicographic (Re, Im) ascending.
inline bool spectral_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Default tolerances. Anything numeric that callers can override defaults to
// one of these, so the knobs live in one place.
inline constexpr double kTolSym = 1e-10;    // symmetry (commutation) residual
inline constexpr double kTolReal = 1e-8;    // reality / degeneracy of eigenvalues
inline constexpr double kTolProp = 1e-8;    // proportionality of states
inline constexpr double kTolParam = 1e-6;   // parameter-space bracket width
inline constexpr double kCondBound = 1e8;   // bi-orthogonal conditioning cutoff

}  // namespace antispec
