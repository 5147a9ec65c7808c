#include "antispec/antiunitary.hpp"

#include <cmath>
#include <utility>

#include "antispec/errors.hpp"

namespace antispec {

namespace {

double unitarity_defect(const CMatrix& U) {
  return (U.adjoint() * U - CMatrix::Identity(U.rows(), U.cols())).norm();
}

}  // namespace

AntiUnitaryOp::AntiUnitaryOp(CMatrix U, std::string lbl, double tol)
    : unitary_part(std::move(U)), label(std::move(lbl)) {
  if (unitary_part.rows() != unitary_part.cols() || unitary_part.rows() < 1)
    throw DimensionMismatch("unitary part must be square and non-empty");
  if (!unitary_part.allFinite()) throw InvalidInput("unitary part has non-finite entries");
  const double d = unitarity_defect(unitary_part);
  if (!(d <= tol)) throw NotUnitary("unitary part fails U^dag U = I, defect " + std::to_string(d));
}

CVector apply(const AntiUnitaryOp& A, const CVector& v) {
  if (v.size() != A.dim()) throw DimensionMismatch("apply: vector/operator dimension mismatch");
  return A.unitary_part * v.conjugate();
}

CMatrix square(const AntiUnitaryOp& A) {
  return A.unitary_part * A.unitary_part.conjugate();
}

double check_commutation(const CMatrix& H, const AntiUnitaryOp& A) {
  if (H.rows() != H.cols() || H.rows() != A.dim())
    throw DimensionMismatch("check_commutation: dimension mismatch");
  const CMatrix& U = A.unitary_part;
  return (U * H.conjugate() * U.adjoint() - H).norm() / std::max(1.0, H.norm());
}

AntiUnitaryOp conjugate_basis(const AntiUnitaryOp& A, const CMatrix& V, double tol) {
  if (V.rows() != V.cols() || V.rows() != A.dim())
    throw DimensionMismatch("conjugate_basis: dimension mismatch");
  const double d = unitarity_defect(V);
  if (!(d <= tol)) throw NotUnitary("basis change is not unitary, defect " + std::to_string(d));
  return AntiUnitaryOp(V * A.unitary_part * V.transpose(), A.label);
}

}  // namespace antispec
