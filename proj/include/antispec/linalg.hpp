#pragma once

#include <vector>

#include "antispec/types.hpp"

namespace antispec {

struct Eigensystem {
  CVector values;   // sorted by (Re, Im) ascending
  CMatrix vectors;  // unit-norm columns, same order
};

/// Dense eigendecomposition of a general complex matrix.
/// Throws NoConvergence if the underlying QR iteration fails,
/// InvalidInput/DimensionMismatch on malformed input.
Eigensystem eig_general(const CMatrix& H);

/// Right/left eigenvector system of a (generally non-normal) matrix, with
/// left vectors scaled to duality: right.adjoint() * left == I.
struct BiorthogonalSystem {
  CVector eigenvalues;       // of H, sorted (Re, Im)
  CVector left_eigenvalues;  // of H^dagger, matched index-by-index (== conj up to noise)
  CMatrix right;             // columns |psi_n>, unit norm
  CMatrix left;              // columns |psi^n>
  double cond = 1.0;         // max_n ||psi_n|| * ||psi^n||, the EP-proximity diagnostic
  std::vector<std::vector<int>> clusters;  // degeneracy clusters, index lists
};

/// Builds the bi-orthonormal system. Degenerate clusters (eigenvalue gap below
/// tol_degeneracy * max(1, spectral radius)) are handled jointly so the duality
/// correction stays well posed. Throws NotDiagonalizable when cond > 1e8.
BiorthogonalSystem biorthogonalize(const CMatrix& H, double tol_degeneracy = kTolReal);

/// Partition of the spectrum into clusters of (numerically) equal eigenvalues.
/// Single-linkage with threshold tol * scale; each cluster is sorted ascending,
/// clusters ordered by their first member.
std::vector<std::vector<int>> cluster_spectrum(const CVector& eigenvalues, double tol, double scale);

}  // namespace antispec
