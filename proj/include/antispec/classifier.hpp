#pragma once

#include <string>
#include <vector>

#include "antispec/antiunitary.hpp"
#include "antispec/linalg.hpp"
#include "antispec/types.hpp"

namespace antispec {

/// Wigner representation types of an anti-unitary symmetry acting on the
/// eigenstates of a commuting (generally non-hermitean) Hamiltonian.
///   GammaPlus1D   "gamma_plus"      1D, Omega=+1, A psi = psi after gauge fix
///   GammaPlus2D   "Gamma_plus"      complex pair (E, E*), Omega=+1, flip value 1
///   GammaMinus2D  "Gamma_minus"     complex pair, Omega=-1, flip value i
///   GammaStar2D   "Gamma_star"      complex pair, Omega off the real axis
///   *Deg          "..._deg"         same structure on a real twofold-degenerate E
enum class RepKind {
  GammaPlus1D,
  GammaPlus2D,
  GammaMinus2D,
  GammaStar2D,
  GammaPlusDeg,
  GammaMinusDeg,
  GammaStarDeg,
};

std::string rep_kind_name(RepKind k);   // stable ASCII token, e.g. "Gamma_minus"
RepKind rep_kind_from_name(const std::string& s);
bool rep_kind_is_2d(RepKind k);
bool rep_kind_is_degenerate(RepKind k);

/// Principal square root of Omega with arg in (-pi/2, pi/2]; Omega=-1 -> +i.
/// Throws NotUnimodular when | |Omega| - 1 | > tol.
Complex flip_value(const Complex& omega_sq, double tol = 1e-6);

/// For psi with A psi = c psi (|c|=1), returns psi' = sqrt(c) * psi, which is a
/// fixed point of A, together with the applied phase sqrt(c). Anti-linearity is
/// what makes the half-phase work: A(a psi) = conj(a) A psi.
/// Throws NotProportional if A psi is not parallel to psi within tol.
struct GaugeFixed {
  CVector state;
  Complex phase;
};
GaugeFixed gauge_fix(const CVector& psi, const AntiUnitaryOp& A, double tol = kTolProp);

struct BlockResiduals {
  double proportionality = 0.0;  // 1 - |<psi, A psi>| (normalized overlap defect)
  double flip = 0.0;             // ||A(partner) - omega psi|| / ||psi|| (2D);
                                 // fixed-point defect for 1D
  double omega = 0.0;            // ||A^2 psi - Omega psi|| / ||psi||
};

struct RepBlock {
  RepKind kind;
  Complex omega_sq;                // Omega, eigenvalue of A^2 on the block
  Complex omega;                   // flip value, omega^2 = Omega
  std::vector<Complex> energies;   // 1 entry (1D) or 2 entries sorted (Re, Im)
  std::vector<int> state_indices;  // into the BiorthogonalSystem ordering
  BlockResiduals residuals;
};

struct Multiplicities {
  int n_star = 0;     // Gamma_star blocks (degenerate included)
  int n_minus = 0;    // Gamma_minus blocks
  int n_plus = 0;     // Gamma_plus blocks
  int n_plus_1d = 0;  // gamma_plus singlets
  bool operator==(const Multiplicities&) const = default;
};

struct UnassignedState {
  int state_index;
  std::string reason;
};

struct ClassificationReport {
  std::vector<RepBlock> blocks;  // sorted by (Re E, Im E, kind)
  Multiplicities multiplicities;
  double commutation_residual = 0.0;
  std::vector<UnassignedState> unassigned;
  int dim = 0;
};

/// Decomposes the spectrum of H into Wigner blocks of A.
///
/// Steps: verify [H, A] = 0, build the bi-orthogonal system, cluster equal
/// eigenvalues, diagonalize A^2 inside each cluster to get Omega, then
///   - real nondegenerate E with A psi ∝ psi        -> gamma_plus (gauge fixed)
///   - complex pair (E, E*)                         -> Gamma_plus/minus/star by Omega,
///                                                     partner = omega * A psi
///   - real degenerate E                            -> Omega=+1 parts reduce to
///     gamma_plus singlets (an anti-unitary squaring to +1 always admits a fixed
///     basis on a scalar H-eigenspace); Omega=-1 gives Gamma_minus_deg Kramers
///     pairs; complex Omega gives Gamma_star_deg pairs.
/// States that defy the pattern beyond tolerance land in `unassigned`.
///
/// Throws SymmetryViolated when check_commutation(H, A) > tol, and propagates
/// NotDiagonalizable from biorthogonalize.
ClassificationReport classify(const CMatrix& H, const AntiUnitaryOp& A, double tol = kTolReal);

}  // namespace antispec
