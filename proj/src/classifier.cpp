#include "antispec/classifier.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "antispec/errors.hpp"

namespace antispec {

std::string rep_kind_name(RepKind k) {
  switch (k) {
    case RepKind::GammaPlus1D: return "gamma_plus";
    case RepKind::GammaPlus2D: return "Gamma_plus";
    case RepKind::GammaMinus2D: return "Gamma_minus";
    case RepKind::GammaStar2D: return "Gamma_star";
    case RepKind::GammaPlusDeg: return "Gamma_plus_deg";
    case RepKind::GammaMinusDeg: return "Gamma_minus_deg";
    case RepKind::GammaStarDeg: return "Gamma_star_deg";
  }
  return "?";
}

RepKind rep_kind_from_name(const std::string& s) {
  static const std::map<std::string, RepKind> m = {
      {"gamma_plus", RepKind::GammaPlus1D},      {"Gamma_plus", RepKind::GammaPlus2D},
      {"Gamma_minus", RepKind::GammaMinus2D},    {"Gamma_star", RepKind::GammaStar2D},
      {"Gamma_plus_deg", RepKind::GammaPlusDeg}, {"Gamma_minus_deg", RepKind::GammaMinusDeg},
      {"Gamma_star_deg", RepKind::GammaStarDeg}};
  auto it = m.find(s);
  if (it == m.end()) throw InvalidInput("unknown representation kind: " + s);
  return it->second;
}

bool rep_kind_is_2d(RepKind k) { return k != RepKind::GammaPlus1D; }

bool rep_kind_is_degenerate(RepKind k) {
  return k == RepKind::GammaPlusDeg || k == RepKind::GammaMinusDeg || k == RepKind::GammaStarDeg;
}

Complex flip_value(const Complex& omega_sq, double tol) {
  const double a = std::abs(omega_sq);
  if (std::abs(a - 1.0) > tol)
    throw NotUnimodular("flip_value: |Omega| deviates from 1 by " + std::to_string(a - 1.0));
  const Complex om = omega_sq / a;
  // On (or within noise of) the negative real axis the two square roots are
  // +-i; the convention here is +i, matching arg in (-pi/2, pi/2].
  if (std::abs(om.imag()) <= 1e-14 && om.real() < 0.0) return Complex(0.0, 1.0);
  Complex w = std::sqrt(om);
  if (w.real() == 0.0 && w.imag() < 0.0) w = -w;
  return w;
}

GaugeFixed gauge_fix(const CVector& psi, const AntiUnitaryOp& A, double tol) {
  if (psi.size() != A.dim()) throw DimensionMismatch("gauge_fix: dimension mismatch");
  const double nrm = psi.norm();
  if (!(nrm > 0.0)) throw InvalidInput("gauge_fix: zero state");
  const CVector phi = antispec::apply(A, psi);
  Complex c = psi.dot(phi) / (nrm * nrm);
  const double defect = (phi - c * psi).norm() / nrm;
  if (defect > tol)
    throw NotProportional("gauge_fix: A psi is not parallel to psi, defect " +
                          std::to_string(defect));
  c /= std::abs(c);  // anti-unitarity forces |c| = 1; drop the noise
  Complex ph = std::sqrt(c);
  if (ph.real() == 0.0 && ph.imag() < 0.0) ph = -ph;
  return {ph * psi, ph};
}

namespace {

enum class OmegaClass { Plus, Minus, Star };

OmegaClass omega_class(const Complex& om, double tol) {
  if (std::abs(om - Complex(1.0, 0.0)) <= tol) return OmegaClass::Plus;
  if (std::abs(om + Complex(1.0, 0.0)) <= tol) return OmegaClass::Minus;
  return OmegaClass::Star;
}

// Orthonormal basis of the column span (full column rank assumed).
CMatrix thin_onb(const CMatrix& cols) {
  Eigen::HouseholderQR<CMatrix> qr(cols);
  return CMatrix(qr.householderQ() * CMatrix::Identity(cols.rows(), cols.cols()));
}

// Orthonormal basis of span(B) with span(F) projected out, F orthonormal and
// contained in span(B). QR of [F B]: the columns after the first F.cols() ones
// extend F to a basis of span(B).
CMatrix complement_within(const CMatrix& B, const CMatrix& F) {
  const int keep = static_cast<int>(B.cols() - F.cols());
  if (keep <= 0) return CMatrix(B.rows(), 0);
  CMatrix W(B.rows(), F.cols() + B.cols());
  W << F, B;
  Eigen::HouseholderQR<CMatrix> qr(W);
  CMatrix Q = qr.householderQ() * CMatrix::Identity(W.rows(), W.cols());
  return Q.middleCols(F.cols(), keep);
}

// Eigen-decomposition of a (numerically) unitary small matrix via Schur:
// for a normal matrix T comes out diagonal, so U's columns are an orthonormal
// eigenbasis and the diagonal of T holds the eigenvalues.
void unitary_eigs(const CMatrix& s, CMatrix& basis, CVector& vals) {
  Eigen::ComplexSchur<CMatrix> schur(s, /*computeU=*/true);
  if (schur.info() != Eigen::Success) throw NoConvergence("Schur iteration failed");
  basis = schur.matrixU();
  vals = schur.matrixT().diagonal();
}

std::vector<std::vector<int>> group_values(const CVector& vals, double tol) {
  std::vector<int> order(vals.size());
  std::iota(order.begin(), order.end(), 0);
  // union-find on closeness, same scheme as the spectral clustering
  std::vector<int> parent(vals.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < vals.size(); ++i)
    for (int j = i + 1; j < vals.size(); ++j)
      if (std::abs(vals(i) - vals(j)) <= tol) parent[find(i)] = find(j);
  std::vector<std::vector<int>> groups(vals.size());
  for (int i = 0; i < vals.size(); ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& g : groups)
    if (!g.empty()) out.push_back(std::move(g));
  return out;
}

struct Builder {
  const CMatrix& H;
  const AntiUnitaryOp& A;
  const CMatrix S;  // square(A)
  double tol;
  double omega_tol;
  double incons_tol;
  BiorthogonalSystem bs;
  ClassificationReport rep;

  Builder(const CMatrix& h, const AntiUnitaryOp& a, double t)
      : H(h), A(a), S(square(a)), tol(t), omega_tol(std::max(1e-6, 100 * t)),
        incons_tol(std::max(1e-6, 100 * t)) {}

  void unassign(int idx, const std::string& why) { rep.unassigned.push_back({idx, why}); }

  void unassign_all(const std::vector<int>& idx, const std::string& why) {
    for (int i : idx) unassign(i, why);
  }

  void emit(RepKind kind, Complex omega_sq, Complex omega, std::vector<int> idx,
            BlockResiduals res) {
    RepBlock b;
    b.kind = kind;
    b.omega_sq = omega_sq;
    b.omega = omega;
    for (int i : idx) b.energies.push_back(bs.eigenvalues(i));
    b.state_indices = idx;
    if (idx.size() == 2) {
      // canonical pair order: conjugate partners share Re up to roundoff, so
      // compare Re with a tolerance and break ties by Im (E* before E)
      const Complex e0 = b.energies[0], e1 = b.energies[1];
      const double tau = 1e-10 * std::max({1.0, std::abs(e0), std::abs(e1)});
      const bool swap = (e1.real() < e0.real() - tau) ||
                        (std::abs(e1.real() - e0.real()) <= tau && e1.imag() < e0.imag());
      if (swap) {
        std::swap(b.energies[0], b.energies[1]);
        std::swap(b.state_indices[0], b.state_indices[1]);
      }
    }
    b.residuals = res;
    rep.blocks.push_back(std::move(b));
  }

  double omega_residual(const CVector& chi, const Complex& om) const {
    return (S * chi - om * chi).norm() / chi.norm();
  }

  // --- real nondegenerate eigenvalue ---------------------------------------
  void handle_real_singlet(int idx) {
    const CVector psi = bs.right.col(idx);
    const CVector phi = antispec::apply(A, psi);
    const double overlap = std::abs(psi.dot(phi));
    const double prop_defect = 1.0 - overlap;
    if (prop_defect > tol) {
      unassign(idx, "real nondegenerate eigenvalue but A psi is not parallel to psi");
      return;
    }
    const Complex om = psi.dot(S * psi);
    const double om_res = omega_residual(psi, om);
    if (std::abs(om - Complex(1.0, 0.0)) > omega_tol || om_res > incons_tol) {
      unassign(idx, "proportional A-image with Omega != +1 (inconsistent)");
      return;
    }
    GaugeFixed gf = gauge_fix(psi, A, std::max(tol, 10 * prop_defect + 1e-14));
    const double fix_defect = (antispec::apply(A, gf.state) - gf.state).norm() / gf.state.norm();
    emit(RepKind::GammaPlus1D, om, Complex(1.0, 0.0), {idx},
         {prop_defect, fix_defect, om_res});
  }

  // --- conjugate pair of clusters (complex eigenvalues) ---------------------
  void handle_complex_pair(const std::vector<int>& ci, const std::vector<int>& cj) {
    const int m = static_cast<int>(ci.size());
    const int n = static_cast<int>(H.rows());
    CMatrix R(n, m);
    for (int k = 0; k < m; ++k) R.col(k) = bs.right.col(ci[k]);
    const CMatrix Q = (m == 1) ? R : thin_onb(R);
    const CMatrix s_sub = Q.adjoint() * S * Q;
    CMatrix Y;
    CVector oms;
    if (m == 1) {
      Y = CMatrix::Identity(1, 1);
      oms = s_sub.diagonal();
    } else {
      unitary_eigs(s_sub, Y, oms);
    }
    for (int k = 0; k < m; ++k) {
      const CVector chi = Q * Y.col(k);
      const Complex om = oms(k);
      const double om_res = omega_residual(chi, om);
      Complex om_unit = om / std::abs(om);
      const OmegaClass cls = omega_class(om_unit, omega_tol);
      Complex w;          // flip value used for the partner construction
      Complex om_report;  // canonical Omega stored on the block
      RepKind kind;
      switch (cls) {
        case OmegaClass::Plus:
          kind = RepKind::GammaPlus2D;
          w = Complex(1.0, 0.0);
          om_report = om;
          break;
        case OmegaClass::Minus:
          kind = RepKind::GammaMinus2D;
          w = Complex(0.0, 1.0);
          om_report = om;
          break;
        default:
          kind = RepKind::GammaStar2D;
          w = flip_value(om_unit);
          om_report = om_unit.imag() >= 0 ? om_unit : std::conj(om_unit);
          break;
      }
      const CVector partner = w * antispec::apply(A, chi);
      const double flip_res = (antispec::apply(A, partner) - w * chi).norm() / chi.norm();
      const double prop_defect = 1.0 - std::abs(chi.dot(partner)) / (chi.norm() * partner.norm());
      if (om_res > incons_tol || flip_res > incons_tol) {
        unassign(ci[k], "flip relation defect beyond tolerance");
        unassign(cj[k], "flip relation defect beyond tolerance");
        continue;
      }
      emit(kind, om_report, cls == OmegaClass::Star ? flip_value(om_report) : w,
           {ci[k], cj[k]}, {prop_defect, flip_res, om_res});
    }
  }

  // --- degenerate real eigenvalue: Wigner reduction inside the eigenspace ---
  void handle_real_cluster(const std::vector<int>& c) {
    const int m = static_cast<int>(c.size());
    const int n = static_cast<int>(H.rows());
    CMatrix R(n, m);
    for (int k = 0; k < m; ++k) R.col(k) = bs.right.col(c[k]);
    const CMatrix Q = thin_onb(R);

    // A restricted to the eigenspace, in coordinates: a(z) = u * conj(z).
    const CMatrix u = Q.adjoint() * A.unitary_part * Q.conjugate();
    const double leak = (A.unitary_part * Q.conjugate() - Q * u).norm();
    if (leak > incons_tol) {
      unassign_all(c, "symmetry image leaves the degenerate eigenspace");
      return;
    }

    CMatrix Y;
    CVector oms;
    unitary_eigs(u * u.conjugate(), Y, oms);
    auto groups = group_values(oms, omega_tol);

    int cursor = 0;  // next label to hand out from the cluster's index list
    auto take = [&]() { return c[cursor++]; };

    std::vector<bool> done(groups.size(), false);
    for (size_t gi = 0; gi < groups.size(); ++gi) {
      if (done[gi]) continue;
      done[gi] = true;
      Complex om(0, 0);
      for (int t : groups[gi]) om += oms(t);
      om /= static_cast<double>(groups[gi].size());
      om /= std::abs(om);
      const int d = static_cast<int>(groups[gi].size());
      CMatrix Yg(m, d);
      for (int t = 0; t < d; ++t) Yg.col(t) = Y.col(groups[gi][t]);

      const OmegaClass cls = omega_class(om, omega_tol);
      if (cls == OmegaClass::Plus) {
        reduce_plus_sector(Q, Yg, om, take);
      } else if (cls == OmegaClass::Minus) {
        reduce_minus_sector(Q, Yg, om, take);
      } else {
        // find the conjugate sector
        int pj = -1;
        for (size_t gj = 0; gj < groups.size(); ++gj) {
          if (done[gj]) continue;
          Complex omj(0, 0);
          for (int t : groups[gj]) omj += oms(t);
          omj /= static_cast<double>(groups[gj].size());
          if (std::abs(omj - std::conj(om)) <= omega_tol &&
              groups[gj].size() == groups[gi].size()) {
            pj = static_cast<int>(gj);
            break;
          }
        }
        if (pj < 0) {
          for (int t = 0; t < d; ++t) unassign(take(), "complex Omega sector without conjugate partner");
          continue;
        }
        done[pj] = true;
        const Complex w = flip_value(om);
        const Complex om_report = om.imag() >= 0 ? om : std::conj(om);
        for (int t = 0; t < d; ++t) {
          const CVector chi = Q * Yg.col(t);
          const CVector partner = w * antispec::apply(A, chi);
          const double om_res = omega_residual(chi, om);
          const double flip_res = (antispec::apply(A, partner) - w * chi).norm();
          const int i1 = take();
          const int i2 = take();
          if (om_res > incons_tol || flip_res > incons_tol) {
            unassign(i1, "flip relation defect beyond tolerance (degenerate)");
            unassign(i2, "flip relation defect beyond tolerance (degenerate)");
            continue;
          }
          emit(RepKind::GammaStarDeg, om_report, flip_value(om_report), {i1, i2},
               {1.0 - std::abs(chi.dot(partner)), flip_res, om_res});
        }
      }
    }
  }

  // Omega = +1 sector of a scalar (real, degenerate) eigenspace: an
  // anti-unitary squaring to +1 always admits an orthonormal basis of fixed
  // vectors, so the sector reduces to gamma_plus singlets. This is the
  // canonical resolution of "Gamma_plus with real energy == gamma_plus (x) 2".
  template <typename Take>
  void reduce_plus_sector(const CMatrix& Q, const CMatrix& Yg, const Complex& om, Take&& take) {
    const CMatrix Z = Q * Yg;  // n x d orthonormal
    const int d = static_cast<int>(Z.cols());
    // a in sector coordinates
    const CMatrix cc = Z.adjoint() * A.unitary_part * Z.conjugate();
    auto a_of = [&](const CVector& z) { return CVector(cc * z.conjugate()); };
    CMatrix B = CMatrix::Identity(d, d);
    for (int step = 0; step < d; ++step) {
      const int r = static_cast<int>(B.cols());
      CVector best;
      double best_norm = -1.0;
      for (int j = 0; j < r; ++j) {
        const CVector z = B.col(j);
        const CVector az = a_of(z);
        const CVector f1 = z + az;
        const CVector f2 = Complex(0, 1) * (z - az);
        if (f1.norm() > best_norm) { best = f1; best_norm = f1.norm(); }
        if (f2.norm() > best_norm) { best = f2; best_norm = f2.norm(); }
      }
      const CVector f = best / best_norm;
      const CVector psi = Z * f;
      const int idx = take();
      const double fix_defect = (antispec::apply(A, psi) - psi).norm();
      const double om_res = omega_residual(psi, om);
      if (fix_defect > incons_tol) {
        unassign(idx, "fixed-point extraction failed in Omega=+1 sector");
      } else {
        emit(RepKind::GammaPlus1D, om, Complex(1.0, 0.0), {idx},
             {fix_defect, fix_defect, om_res});
      }
      B = complement_within(B, f);
    }
  }

  // Omega = -1 sector: Kramers structure, no fixed vectors; reduce to
  // Gamma_minus_deg flip pairs.
  template <typename Take>
  void reduce_minus_sector(const CMatrix& Q, const CMatrix& Yg, const Complex& om, Take&& take) {
    const CMatrix Z = Q * Yg;
    const int d = static_cast<int>(Z.cols());
    const CMatrix cc = Z.adjoint() * A.unitary_part * Z.conjugate();
    auto a_of = [&](const CVector& z) { return CVector(cc * z.conjugate()); };
    const Complex w(0.0, 1.0);
    CMatrix B = CMatrix::Identity(d, d);
    while (B.cols() >= 2) {
      const CVector x = B.col(0);
      CVector y = a_of(x);
      y -= x * x.dot(y);  // exact orthogonality up to noise; clean it
      y.normalize();
      const CVector psi = Z * x;
      const CVector partner = w * antispec::apply(A, psi);
      const double om_res = omega_residual(psi, om);
      const double flip_res = (antispec::apply(A, partner) - w * psi).norm();
      const int i1 = take();
      const int i2 = take();
      if (om_res > incons_tol || flip_res > incons_tol) {
        unassign(i1, "Kramers pair defect beyond tolerance");
        unassign(i2, "Kramers pair defect beyond tolerance");
      } else {
        emit(RepKind::GammaMinusDeg, om, w, {i1, i2},
             {1.0 - std::abs(psi.dot(partner)), flip_res, om_res});
      }
      CMatrix F(d, 2);
      F.col(0) = x;
      F.col(1) = y;
      B = complement_within(B, F);
    }
    if (B.cols() == 1) unassign(take(), "odd-dimensional Omega=-1 sector (inconsistent)");
  }
};

}  // namespace

ClassificationReport classify(const CMatrix& H, const AntiUnitaryOp& A, double tol) {
  if (H.rows() != H.cols() || H.rows() != A.dim())
    throw DimensionMismatch("classify: dimension mismatch");

  Builder b(H, A, tol);
  b.rep.dim = static_cast<int>(H.rows());
  b.rep.commutation_residual = check_commutation(H, A);
  if (b.rep.commutation_residual > tol)
    throw SymmetryViolated("[H, A] != 0: residual " + std::to_string(b.rep.commutation_residual),
                           b.rep.commutation_residual);

  b.bs = biorthogonalize(H, tol);
  const CVector& ev = b.bs.eigenvalues;
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());

  const auto& clusters = b.bs.clusters;
  std::vector<Complex> reps(clusters.size());
  std::vector<bool> is_real(clusters.size());
  for (size_t i = 0; i < clusters.size(); ++i) {
    Complex s(0, 0);
    for (int k : clusters[i]) s += ev(k);
    reps[i] = s / static_cast<double>(clusters[i].size());
    is_real[i] = std::abs(reps[i].imag()) <= tol * std::max(1.0, std::abs(reps[i]));
  }

  std::vector<bool> used(clusters.size(), false);
  for (size_t i = 0; i < clusters.size(); ++i) {
    if (used[i]) continue;
    if (is_real[i]) {
      used[i] = true;
      if (clusters[i].size() == 1)
        b.handle_real_singlet(clusters[i][0]);
      else
        b.handle_real_cluster(clusters[i]);
      continue;
    }
    // complex cluster: find the conjugate partner cluster
    const Complex target = std::conj(reps[i]);
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < clusters.size(); ++j) {
      if (used[j] && j != i) continue;
      const double d = std::abs(reps[j] - target);
      if (d < best_d) { best_d = d; best = static_cast<int>(j); }
    }
    used[i] = true;
    if (best < 0 || best_d > std::max(10 * tol * scale, 1e-12)) {
      b.unassign_all(clusters[i], "complex eigenvalue without conjugate partner");
      continue;
    }
    if (best == static_cast<int>(i)) {
      // self-conjugate cluster (pair merged by the degeneracy window):
      // treat like a real degenerate eigenspace
      b.handle_real_cluster(clusters[i]);
      continue;
    }
    used[best] = true;
    if (clusters[best].size() != clusters[i].size()) {
      b.unassign_all(clusters[i], "conjugate cluster size mismatch");
      b.unassign_all(clusters[best], "conjugate cluster size mismatch");
      continue;
    }
    b.handle_complex_pair(clusters[i], clusters[best]);
  }

  // canonical block order
  auto kind_ord = [](RepKind k) { return static_cast<int>(k); };
  std::sort(b.rep.blocks.begin(), b.rep.blocks.end(), [&](const RepBlock& x, const RepBlock& y) {
    if (x.energies[0] != y.energies[0]) return spectral_less(x.energies[0], y.energies[0]);
    if (x.kind != y.kind) return kind_ord(x.kind) < kind_ord(y.kind);
    return x.state_indices[0] < y.state_indices[0];
  });
  std::sort(b.rep.unassigned.begin(), b.rep.unassigned.end(),
            [](const UnassignedState& x, const UnassignedState& y) {
              return x.state_index < y.state_index;
            });

  for (const auto& blk : b.rep.blocks) {
    switch (blk.kind) {
      case RepKind::GammaPlus1D: b.rep.multiplicities.n_plus_1d++; break;
      case RepKind::GammaPlus2D:
      case RepKind::GammaPlusDeg: b.rep.multiplicities.n_plus++; break;
      case RepKind::GammaMinus2D:
      case RepKind::GammaMinusDeg: b.rep.multiplicities.n_minus++; break;
      case RepKind::GammaStar2D:
      case RepKind::GammaStarDeg: b.rep.multiplicities.n_star++; break;
    }
  }
  return b.rep;
}

}  // namespace antispec
