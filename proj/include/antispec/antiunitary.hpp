#pragma once

#include <string>

#include "antispec/types.hpp"

namespace antispec {

/// Anti-unitary operator A = U ∘ K: a unitary part composed with entrywise
/// complex conjugation. Every anti-unitary on C^n has this form once a basis
/// is fixed; K itself is the special case U = I.
struct AntiUnitaryOp {
  CMatrix unitary_part;
  std::string label;

  AntiUnitaryOp() = default;
  /// Validates unitarity (||U^dag U - I||_F <= tol); throws NotUnitary.
  explicit AntiUnitaryOp(CMatrix U, std::string lbl = "", double tol = 1e-12);

  int dim() const { return static_cast<int>(unitary_part.rows()); }
};

/// A v = U * conj(v). Anti-linear: apply(A, a*v) == conj(a) * apply(A, v).
CVector apply(const AntiUnitaryOp& A, const CVector& v);

/// A^2 = U * conj(U): a plain unitary whose spectrum lies on the unit circle.
CMatrix square(const AntiUnitaryOp& A);

/// Relative symmetry defect ||U conj(H) U^dag - H||_F / max(1, ||H||_F),
/// i.e. how far A H A^-1 is from H.
double check_commutation(const CMatrix& H, const AntiUnitaryOp& A);

/// Transport to a new basis: (V ∘ A ∘ V^-1) has unitary part V * U * V^T.
/// The transpose is forced by anti-linearity; conjugating with V^dag on the
/// right is the classic mistake and breaks apply() equivariance.
AntiUnitaryOp conjugate_basis(const AntiUnitaryOp& A, const CMatrix& V, double tol = 1e-10);

}  // namespace antispec
