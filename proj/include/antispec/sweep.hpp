#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "antispec/classifier.hpp"
#include "antispec/types.hpp"

namespace antispec {

// One classified spectrum at a fixed parameter value: energies in spectral
// order with the representation kind of every state alongside.
struct SpectrumProbe {
  std::vector<Complex> energies;
  std::vector<RepKind> kinds;
};

// A one-parameter family of spectra.  Implementations may throw
// NotDiagonalizable at isolated parameter values (exceptional points);
// sweep() records such points and keeps going, find_threshold() treats them
// as lying above the threshold.
using SpectrumFamily = std::function<SpectrumProbe(double)>;

struct SweepSample {
  double param = 0.0;
  std::vector<Complex> energies;
  std::vector<RepKind> kinds;
  std::vector<int> branch; // trajectory ids, aligned with energies
  int complex_pairs = 0;
  bool diagonalizable = true;
  std::string note; // failure detail when !diagonalizable
};

struct SweepResult {
  std::string param_name;
  std::vector<SweepSample> samples;
  bool has_transition = false;
  double transition_param = 0.0;   // midpoint of the first pair-count increase
  double transition_bracket = 0.0; // width of that interval
};

// Number of eigenvalues in the open upper half plane, i.e. the number of
// conjugate pairs of a conjugation-symmetric spectrum.  An eigenvalue counts
// as complex when Im E > tol * max(1, |E|).
int count_complex_pairs(const std::vector<Complex>& energies, double tol = kTolReal);

// Samples the family at `steps` >= 2 evenly spaced parameter values
// (endpoints included) and links eigenvalue trajectories between
// consecutive samples with a minimum-cost assignment (optimal for
// dimensions <= 64, greedy beyond).  Sample evaluation honours the
// ANTISPEC_THREADS environment variable; results are deterministic
// regardless of the thread count.
SweepResult sweep(const SpectrumFamily& family, const std::string& param_name, double lo,
                  double hi, int steps);

struct ThresholdResult {
  double value = 0.0;   // bracket midpoint after bisection
  double bracket = 0.0; // final bracket width
  double lo = 0.0;
  double hi = 0.0;
  int pairs_below = 0;
  int pairs_above = 0;
  // (param, smallest adjacent gap among real eigenvalues) for each bisection
  // iterate that landed below the threshold; the gap of the coalescing pair
  // shrinks monotonically as the parameter climbs toward the threshold.
  std::vector<std::pair<double, double>> below_gaps;
};

// Bisects for the parameter where the complex-pair count first increases.
// Requires count(lo) != count(hi), otherwise throws BracketInvalid.  A
// NotDiagonalizable probe counts as "above" (the exceptional point is the
// threshold itself).  The returned bracket is at most tol_param.
ThresholdResult find_threshold(const SpectrumFamily& family, double lo, double hi,
                               double tol_param = kTolParam);

// Optimal assignment (Hungarian method with potentials) for a square cost
// matrix; returns, per row, the matched column.  O(n^3).
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

// Greedy assignment for rectangular costs: repeatedly matches the globally
// cheapest unmatched (row, col) pair.  Rows or columns left over when the
// sizes differ stay -1.
std::vector<int> greedy_assignment(const Eigen::MatrixXd& cost);

// Spectrum families for the imaginary square well.
//
// Dense variant: full diagonalization plus Wigner classification of every
// state; N is capped at 256 to keep a sweep interactive.
SpectrumFamily square_well_dense_family(int N);
// Sparse variant: the k lowest levels via the Arnoldi probe, kinds assigned
// by reality (real -> gamma_plus, conjugate pair -> Gamma_plus; the parity
// conjugation squares to +1 so 2D blocks of this model are Gamma_plus).
SpectrumFamily square_well_arnoldi_family(int N, int k);
// Continuum variant: matching roots with Re E in [0, re_hi]; the imaginary
// window scales with the coupling so migrating pairs stay inside.
SpectrumFamily square_well_matching_family(double re_hi, int grid = 48);

// CSV trajectory table: header param,branch_id,re_E,im_E,rep_kind and one
// row per (sample, state), 14 significant digits, written atomically.
void write_sweep_csv(const SweepResult& result, const std::string& path);

} // namespace antispec
