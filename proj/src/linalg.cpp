#include "antispec/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "antispec/errors.hpp"

namespace antispec {

namespace {

void require_square_finite(const CMatrix& H) {
  if (H.rows() != H.cols() || H.rows() < 1)
    throw DimensionMismatch("matrix must be square and non-empty");
  if (!H.allFinite()) throw InvalidInput("matrix has non-finite entries");
}

std::vector<int> spectral_order(const CVector& v) {
  std::vector<int> p(v.size());
  std::iota(p.begin(), p.end(), 0);
  std::sort(p.begin(), p.end(), [&](int i, int j) { return spectral_less(v(i), v(j)); });
  return p;
}

Eigensystem solve_sorted(const CMatrix& H) {
  Eigen::ComplexEigenSolver<CMatrix> es(H, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw NoConvergence("complex QR iteration did not converge");
  const CVector vals = es.eigenvalues();
  const CMatrix vecs = es.eigenvectors();
  auto p = spectral_order(vals);
  Eigensystem out;
  out.values.resize(vals.size());
  out.vectors.resize(vecs.rows(), vecs.cols());
  for (int k = 0; k < vals.size(); ++k) {
    out.values(k) = vals(p[k]);
    out.vectors.col(k) = vecs.col(p[k]).normalized();
  }
  return out;
}

}  // namespace

Eigensystem eig_general(const CMatrix& H) {
  require_square_finite(H);
  return solve_sorted(H);
}

std::vector<std::vector<int>> cluster_spectrum(const CVector& eigenvalues, double tol,
                                               double scale) {
  const int n = static_cast<int>(eigenvalues.size());
  const double thresh = tol * scale;
  // Union-find over all pairs; n stays small enough on the dense path.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(eigenvalues(i) - eigenvalues(j)) <= thresh) parent[find(i)] = find(j);
  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& g : groups)
    if (!g.empty()) out.push_back(std::move(g));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

BiorthogonalSystem biorthogonalize(const CMatrix& H, double tol_degeneracy) {
  require_square_finite(H);
  const int n = static_cast<int>(H.rows());

  Eigensystem rs = solve_sorted(H);

  // Left eigenvectors come from H^dagger, whose spectrum is the conjugate of
  // H's. Match columns by nearest conjugated eigenvalue: an independent sort
  // is not enough, because the (Re, Im) order flips when two real parts agree
  // only up to roundoff.
  Eigen::ComplexEigenSolver<CMatrix> esl(H.adjoint(), true);
  if (esl.info() != Eigen::Success)
    throw NoConvergence("complex QR iteration did not converge (adjoint)");
  const CVector lvals = esl.eigenvalues();
  std::vector<int> lp(n, -1);
  std::vector<bool> taken(n, false);
  for (int k = 0; k < n; ++k) {
    double best = std::numeric_limits<double>::infinity();
    int arg = -1;
    for (int j = 0; j < n; ++j) {
      if (taken[j]) continue;
      const double d = std::abs(std::conj(lvals(j)) - rs.values(k));
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    lp[k] = arg;
    taken[arg] = true;
  }

  BiorthogonalSystem bs;
  bs.eigenvalues = rs.values;
  bs.right = rs.vectors;
  bs.left_eigenvalues.resize(n);
  bs.left.resize(n, n);
  for (int k = 0; k < n; ++k) {
    bs.left_eigenvalues(k) = lvals(lp[k]);
    bs.left.col(k) = esl.eigenvectors().col(lp[k]).normalized();
  }

  const double scale = std::max(1.0, bs.eigenvalues.cwiseAbs().maxCoeff());
  bs.clusters = cluster_spectrum(bs.eigenvalues, tol_degeneracy, scale);

  // Clustered eigenvalues need care: QR-iteration eigenvectors of (near-)
  // coincident eigenvalues come out nearly parallel, because extraction from
  // the triangular factor divides by the vanishing gap. Rebuild each cluster
  // from its invariant subspaces instead: SVD of (H - E I) gives orthonormal
  // right/left subspace bases, and re-diagonalizing the shift-centered
  // restriction has O(1) relative gaps, so it is stable whenever the cluster
  // is actually diagonalizable. A defective cluster still shows up as a
  // nearly parallel restricted eigenbasis and trips the conditioning bound.
  for (const auto& c : bs.clusters) {
    const int m = static_cast<int>(c.size());
    if (m < 2) continue;
    Complex center(0, 0);
    for (int j : c) center += bs.eigenvalues(j);
    center /= static_cast<double>(m);

    Eigen::BDCSVD<CMatrix> svd(H - center * CMatrix::Identity(n, n),
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CMatrix Q = svd.matrixV().rightCols(m);  // right invariant subspace
    const CMatrix P = svd.matrixU().rightCols(m);  // left invariant subspace

    Eigensystem r_small = solve_sorted(CMatrix(Q.adjoint() * H * Q - center * CMatrix::Identity(m, m)));
    Eigensystem l_small = solve_sorted(
        CMatrix(P.adjoint() * H.adjoint() * P - std::conj(center) * CMatrix::Identity(m, m)));
    // match left eigenvalues to the right ones through conjugation (order
    // within the cluster is then only bookkeeping; the duality correction
    // below absorbs any residual mixing)
    std::vector<int> lp_small(m, -1);
    std::vector<bool> taken_small(m, false);
    for (int j = 0; j < m; ++j) {
      double best = std::numeric_limits<double>::infinity();
      int arg = -1;
      for (int k = 0; k < m; ++k) {
        if (taken_small[k]) continue;
        const double d = std::abs(std::conj(l_small.values(k)) - r_small.values(j));
        if (d < best) {
          best = d;
          arg = k;
        }
      }
      lp_small[j] = arg;
      taken_small[arg] = true;
    }
    for (int j = 0; j < m; ++j) {
      bs.eigenvalues(c[j]) = center + r_small.values(j);
      bs.right.col(c[j]) = Q * r_small.vectors.col(j);
      bs.left_eigenvalues(c[j]) = std::conj(center) + l_small.values(lp_small[j]);
      bs.left.col(c[j]) = P * l_small.vectors.col(lp_small[j]);
    }
  }

  // Enforce duality cluster by cluster: replace L_c by L_c * (R_c^dag L_c)^-1.
  for (const auto& c : bs.clusters) {
    const int m = static_cast<int>(c.size());
    CMatrix Rc(n, m), Lc(n, m);
    for (int j = 0; j < m; ++j) {
      Rc.col(j) = bs.right.col(c[j]);
      Lc.col(j) = bs.left.col(c[j]);
    }
    CMatrix M = Rc.adjoint() * Lc;
    Eigen::PartialPivLU<CMatrix> lu(M);
    CMatrix Minv = lu.inverse();
    if (!Minv.allFinite())
      throw NotDiagonalizable("duality correction singular (exceptional point?)",
                              std::numeric_limits<double>::infinity());
    Lc = Lc * Minv;
    for (int j = 0; j < m; ++j) bs.left.col(c[j]) = Lc.col(j);
  }

  bs.cond = 1.0;
  for (int k = 0; k < n; ++k) bs.cond = std::max(bs.cond, bs.left.col(k).norm());
  if (!(bs.cond <= kCondBound))
    throw NotDiagonalizable("bi-orthogonal conditioning exceeds bound", bs.cond);
  return bs;
}

}  // namespace antispec
