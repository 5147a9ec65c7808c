#include "antispec/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "antispec/errors.hpp"
#include "antispec/square_well.hpp"

namespace antispec {

int count_complex_pairs(const std::vector<Complex>& energies, double tol) {
  int count = 0;
  for (const Complex& e : energies)
    if (e.imag() > tol * std::max(1.0, std::abs(e))) ++count;
  return count;
}

std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw DimensionMismatch("assignment cost matrix must be square");
  const int n = static_cast<int>(cost.rows());
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();

  // Hungarian method with row/column potentials, one augmenting path per row.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> match(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) match[p[j] - 1] = j - 1;
  return match;
}

std::vector<int> greedy_assignment(const Eigen::MatrixXd& cost) {
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());
  struct Entry {
    double c;
    int i, j;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) entries.push_back({cost(i, j), i, j});
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.c != b.c) return a.c < b.c;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  std::vector<int> match(rows, -1);
  std::vector<char> col_used(cols, 0);
  int left = std::min(rows, cols);
  for (const Entry& e : entries) {
    if (left == 0) break;
    if (match[e.i] != -1 || col_used[e.j]) continue;
    match[e.i] = e.j;
    col_used[e.j] = 1;
    --left;
  }
  return match;
}

namespace {

int thread_budget(int jobs) {
  int n = 0;
  if (const char* env = std::getenv("ANTISPEC_THREADS")) n = std::atoi(env);
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  return std::min(n, std::max(jobs, 1));
}

void evaluate_sample(const SpectrumFamily& family, double param, SweepSample& out) {
  out.param = param;
  try {
    SpectrumProbe probe = family(param);
    out.energies = std::move(probe.energies);
    out.kinds = std::move(probe.kinds);
    out.complex_pairs = count_complex_pairs(out.energies);
    out.diagonalizable = true;
  } catch (const NotDiagonalizable& e) {
    out.diagonalizable = false;
    out.note = e.what();
  }
}

void link_branches(const SweepSample& prev, SweepSample& cur, int& next_branch) {
  const int np = static_cast<int>(prev.energies.size());
  const int nc = static_cast<int>(cur.energies.size());
  cur.branch.assign(nc, -1);
  if (np == 0 || nc == 0) {
    for (int j = 0; j < nc; ++j) cur.branch[j] = next_branch++;
    return;
  }
  Eigen::MatrixXd cost(np, nc);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nc; ++j) cost(i, j) = std::abs(prev.energies[i] - cur.energies[j]);
  const std::vector<int> match =
      (np == nc && np <= 64) ? min_cost_assignment(cost) : greedy_assignment(cost);
  for (int i = 0; i < np; ++i)
    if (match[i] >= 0) cur.branch[match[i]] = prev.branch[i];
  for (int j = 0; j < nc; ++j)
    if (cur.branch[j] < 0) cur.branch[j] = next_branch++;
}

} // namespace

SweepResult sweep(const SpectrumFamily& family, const std::string& param_name, double lo,
                  double hi, int steps) {
  if (steps < 2) throw InvalidInput("sweep needs at least 2 steps");
  if (!(hi > lo)) throw InvalidInput("sweep range must have positive width");

  SweepResult result;
  result.param_name = param_name;
  result.samples.resize(steps);

  const int workers = thread_budget(steps);
  std::atomic<int> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&]() {
    for (int i = cursor.fetch_add(1); i < steps; i = cursor.fetch_add(1)) {
      const double p = lo + (hi - lo) * i / (steps - 1);
      try {
        evaluate_sample(family, p, result.samples[i]);
      } catch (...) {
        std::lock_guard<std::mutex> guard(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(run);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Trajectory ids: fresh at the first usable sample, then carried through
  // minimum-cost links; a failed point is bridged over.
  int next_branch = 0;
  const SweepSample* prev = nullptr;
  for (SweepSample& s : result.samples) {
    if (!s.diagonalizable) continue;
    if (prev == nullptr) {
      s.branch.resize(s.energies.size());
      for (size_t j = 0; j < s.branch.size(); ++j) s.branch[j] = next_branch++;
    } else {
      link_branches(*prev, s, next_branch);
    }
    prev = &s;
  }

  const SweepSample* last = nullptr;
  for (const SweepSample& s : result.samples) {
    if (!s.diagonalizable) continue;
    if (last != nullptr && s.complex_pairs > last->complex_pairs && !result.has_transition) {
      result.has_transition = true;
      result.transition_param = 0.5 * (last->param + s.param);
      result.transition_bracket = s.param - last->param;
    }
    last = &s;
  }
  return result;
}

namespace {

struct ProbeOutcome {
  int pairs = 0;
  bool diagonalizable = true;
  std::vector<Complex> energies;
};

ProbeOutcome probe_point(const SpectrumFamily& family, double p) {
  ProbeOutcome out;
  try {
    SpectrumProbe pr = family(p);
    out.pairs = count_complex_pairs(pr.energies);
    out.energies = std::move(pr.energies);
  } catch (const NotDiagonalizable&) {
    out.diagonalizable = false;
  }
  return out;
}

double min_real_gap(const std::vector<Complex>& energies) {
  std::vector<double> re;
  for (const Complex& e : energies)
    if (std::abs(e.imag()) <= kTolReal * std::max(1.0, std::abs(e))) re.push_back(e.real());
  std::sort(re.begin(), re.end());
  double gap = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < re.size(); ++i) gap = std::min(gap, re[i] - re[i - 1]);
  return gap;
}

} // namespace

ThresholdResult find_threshold(const SpectrumFamily& family, double lo, double hi,
                               double tol_param) {
  if (!(hi > lo)) throw BracketInvalid("threshold bracket is empty");
  if (!(tol_param > 0.0)) throw InvalidInput("bracket tolerance must be positive");

  const ProbeOutcome at_lo = probe_point(family, lo);
  if (!at_lo.diagonalizable)
    throw BracketInvalid("lower bracket end sits on a non-diagonalizable point");
  const ProbeOutcome at_hi = probe_point(family, hi);
  if (at_hi.diagonalizable && at_hi.pairs == at_lo.pairs)
    throw BracketInvalid("complex-pair count does not change across the bracket");

  ThresholdResult result;
  result.pairs_below = at_lo.pairs;
  result.pairs_above = at_hi.diagonalizable ? at_hi.pairs : at_lo.pairs + 1;

  while (hi - lo > tol_param) {
    const double mid = 0.5 * (lo + hi);
    const ProbeOutcome at_mid = probe_point(family, mid);
    const bool above = !at_mid.diagonalizable || at_mid.pairs != at_lo.pairs;
    if (above) {
      hi = mid;
    } else {
      lo = mid;
      result.below_gaps.emplace_back(mid, min_real_gap(at_mid.energies));
    }
  }
  result.lo = lo;
  result.hi = hi;
  result.value = 0.5 * (lo + hi);
  result.bracket = hi - lo;
  return result;
}

SpectrumFamily square_well_dense_family(int N) {
  if (N < 16 || N > 256)
    throw InvalidInput("dense sweep family supports 16 to 256 grid points");
  return [N](double Z) {
    const SquareWellModel m = build_square_well(Z, N);
    const ClassificationReport rep = classify(m.hamiltonian, m.symmetry);
    if (!rep.unassigned.empty())
      throw NotDiagonalizable("classification left states unassigned near a coalescence", 0.0);
    SpectrumProbe probe;
    probe.energies.resize(rep.dim);
    probe.kinds.resize(rep.dim, RepKind::GammaPlus1D);
    for (const RepBlock& b : rep.blocks) {
      for (size_t j = 0; j < b.state_indices.size(); ++j) {
        probe.energies[b.state_indices[j]] = b.energies[j];
        probe.kinds[b.state_indices[j]] = b.kind;
      }
    }
    return probe;
  };
}

SpectrumFamily square_well_arnoldi_family(int N, int k) {
  if (N < 16) throw InvalidInput("square well needs at least 16 grid points");
  if (k < 2) throw InvalidInput("arnoldi sweep family needs at least 2 levels");
  return [N, k](double Z) {
    const CVector low = square_well_lowest(Z, N, k);
    SpectrumProbe probe;
    probe.energies.assign(low.data(), low.data() + low.size());
    probe.kinds.resize(probe.energies.size());
    for (size_t j = 0; j < probe.energies.size(); ++j) {
      const Complex e = probe.energies[j];
      const bool is_complex = std::abs(e.imag()) > kTolReal * std::max(1.0, std::abs(e));
      probe.kinds[j] = is_complex ? RepKind::GammaPlus2D : RepKind::GammaPlus1D;
    }
    return probe;
  };
}

SpectrumFamily square_well_matching_family(double re_hi, int grid) {
  if (!(re_hi > 0.0)) throw InvalidInput("matching family needs a positive energy window");
  return [re_hi, grid](double Z) {
    const ComplexRect region{0.0, re_hi, -(std::abs(Z) + 3.0), std::abs(Z) + 3.0};
    const auto sols = square_well_matching(Z, region, grid);
    SpectrumProbe probe;
    probe.energies.reserve(sols.size());
    probe.kinds.reserve(sols.size());
    for (const MatchingSolution& s : sols) {
      probe.energies.push_back(s.E);
      const bool is_complex = std::abs(s.E.imag()) > kTolReal * std::max(1.0, std::abs(s.E));
      probe.kinds.push_back(is_complex ? RepKind::GammaPlus2D : RepKind::GammaPlus1D);
    }
    return probe;
  };
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  const std::string tmp = path + ".tmp~";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw InvalidInput("cannot open '" + tmp + "' for writing");
    out << "param,branch_id,re_E,im_E,rep_kind\n";
    char buf[128];
    for (const SweepSample& s : result.samples) {
      if (!s.diagonalizable) continue;
      for (size_t j = 0; j < s.energies.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.14g,%d,%.14g,%.14g,", s.param, s.branch[j],
                      s.energies[j].real(), s.energies[j].imag());
        out << buf << rep_kind_name(s.kinds[j]) << '\n';
      }
    }
    if (!out.good()) throw InvalidInput("failed while writing '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw InvalidInput("cannot move temporary file onto '" + path + "'");
}

} // namespace antispec
