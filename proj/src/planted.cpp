#include "antispec/planted.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "antispec/errors.hpp"
#include "antispec/random.hpp"

namespace antispec {

namespace {

constexpr double kSeparation = 1e-6;

bool is_pair_kind(RepKind k) {
  return k == RepKind::GammaPlus2D || k == RepKind::GammaMinus2D || k == RepKind::GammaStar2D;
}

bool is_star_kind(RepKind k) {
  return k == RepKind::GammaStar2D || k == RepKind::GammaStarDeg;
}

void tally(ClassificationReport& rep) {
  rep.multiplicities = {};
  for (const auto& blk : rep.blocks) {
    switch (blk.kind) {
      case RepKind::GammaPlus1D: rep.multiplicities.n_plus_1d++; break;
      case RepKind::GammaPlus2D:
      case RepKind::GammaPlusDeg: rep.multiplicities.n_plus++; break;
      case RepKind::GammaMinus2D:
      case RepKind::GammaMinusDeg: rep.multiplicities.n_minus++; break;
      case RepKind::GammaStar2D:
      case RepKind::GammaStarDeg: rep.multiplicities.n_star++; break;
    }
  }
}

}  // namespace

PlantedPlan canonicalize_plan(const PlantedPlan& plan) {
  if (plan.blocks.empty()) throw InvalidPlan("plan has no blocks");
  PlantedPlan out;
  out.seed = plan.seed;
  for (const auto& b : plan.blocks) {
    PlantedBlockSpec c = b;
    if (is_pair_kind(c.kind)) {
      if (std::abs(c.energy.imag()) < kSeparation)
        throw InvalidPlan("pair kind needs |Im(energy)| >= 1e-6");
      if (c.energy.imag() < 0) {
        c.energy = std::conj(c.energy);
        if (c.omega_sq) c.omega_sq = std::conj(*c.omega_sq);
      }
    } else {
      if (std::abs(c.energy.imag()) > 1e-12)
        throw InvalidPlan("scalar and degenerate kinds need a real energy");
      c.energy = Complex(c.energy.real(), 0.0);
    }
    if (is_star_kind(c.kind)) {
      if (!c.omega_sq) throw InvalidPlan("Gamma_star kinds need omega_sq");
      Complex om = *c.omega_sq;
      if (std::abs(std::abs(om) - 1.0) > 1e-9) throw InvalidPlan("omega_sq must be unimodular");
      om /= std::abs(om);
      if (std::abs(om - Complex(1, 0)) < 1e-3 || std::abs(om + Complex(1, 0)) < 1e-3)
        throw InvalidPlan("omega_sq of a Gamma_star kind must stay away from +-1");
      c.omega_sq = om;
    } else if (c.omega_sq) {
      const Complex want = (c.kind == RepKind::GammaMinus2D || c.kind == RepKind::GammaMinusDeg)
                               ? Complex(-1, 0)
                               : Complex(1, 0);
      if (std::abs(*c.omega_sq - want) > 1e-9)
        throw InvalidPlan("omega_sq inconsistent with the block kind");
      c.omega_sq = want;
    }
    out.blocks.push_back(c);
  }
  for (size_t i = 0; i < out.blocks.size(); ++i) {
    for (size_t j = i + 1; j < out.blocks.size(); ++j) {
      const Complex a = out.blocks[i].energy;
      const Complex b = out.blocks[j].energy;
      for (const Complex d : {a - b, a - std::conj(b)}) {
        const double dist = std::abs(d);
        if (dist != 0.0 && dist < kSeparation)
          throw InvalidPlan("block energies closer than 1e-6 but not identical");
      }
    }
  }
  return out;
}

PlantedModel build_planted(const PlantedPlan& raw) {
  const PlantedPlan plan = canonicalize_plan(raw);

  std::vector<CMatrix> hs, us;
  ClassificationReport exp;
  std::vector<Complex> frame_energy;  // energy at each frame position

  auto add_expected = [&](RepKind kind, Complex om_sq, Complex om, std::vector<Complex> es,
                          std::vector<int> idx) {
    RepBlock rb;
    rb.kind = kind;
    rb.omega_sq = om_sq;
    rb.omega = om;
    rb.energies = std::move(es);
    rb.state_indices = std::move(idx);  // frame positions; remapped below
    rb.residuals = {0.0, 0.0, 0.0};
    exp.blocks.push_back(std::move(rb));
  };

  int off = 0;
  for (const auto& b : plan.blocks) {
    const Complex E = b.energy;
    const Complex Ec = std::conj(E);
    switch (b.kind) {
      case RepKind::GammaPlus1D: {
        hs.push_back((CMatrix(1, 1) << E).finished());
        us.push_back(CMatrix::Identity(1, 1));
        frame_energy.push_back(E);
        add_expected(RepKind::GammaPlus1D, {1, 0}, {1, 0}, {E}, {off});
        off += 1;
        break;
      }
      case RepKind::GammaPlus2D: {
        hs.push_back((CMatrix(2, 2) << E, 0, 0, Ec).finished());
        us.push_back((CMatrix(2, 2) << 0, 1, 1, 0).finished());
        frame_energy.push_back(E);
        frame_energy.push_back(Ec);
        add_expected(RepKind::GammaPlus2D, {1, 0}, {1, 0}, {Ec, E}, {off, off + 1});
        off += 2;
        break;
      }
      case RepKind::GammaMinus2D: {
        hs.push_back((CMatrix(2, 2) << E, 0, 0, Ec).finished());
        us.push_back((CMatrix(2, 2) << 0, -1, 1, 0).finished());
        frame_energy.push_back(E);
        frame_energy.push_back(Ec);
        add_expected(RepKind::GammaMinus2D, {-1, 0}, {0, 1}, {Ec, E}, {off, off + 1});
        off += 2;
        break;
      }
      case RepKind::GammaStar2D: {
        const Complex om = *b.omega_sq;
        hs.push_back((CMatrix(2, 2) << E, 0, 0, Ec).finished());
        us.push_back((CMatrix(2, 2) << 0, 1, om, 0).finished());
        frame_energy.push_back(E);
        frame_energy.push_back(Ec);
        const Complex canon = om.imag() >= 0 ? om : std::conj(om);
        add_expected(RepKind::GammaStar2D, canon, flip_value(canon), {Ec, E}, {off, off + 1});
        off += 2;
        break;
      }
      case RepKind::GammaPlusDeg: {
        hs.push_back(E * CMatrix::Identity(2, 2));
        us.push_back((CMatrix(2, 2) << 0, 1, 1, 0).finished());
        frame_energy.push_back(E);
        frame_energy.push_back(E);
        // canonical reduction: the real twofold Omega=+1 block splits into
        // two gamma_plus singlets
        add_expected(RepKind::GammaPlus1D, {1, 0}, {1, 0}, {E}, {off});
        add_expected(RepKind::GammaPlus1D, {1, 0}, {1, 0}, {E}, {off + 1});
        off += 2;
        break;
      }
      case RepKind::GammaMinusDeg: {
        hs.push_back(E * CMatrix::Identity(2, 2));
        us.push_back((CMatrix(2, 2) << 0, -1, 1, 0).finished());
        frame_energy.push_back(E);
        frame_energy.push_back(E);
        add_expected(RepKind::GammaMinusDeg, {-1, 0}, {0, 1}, {E, E}, {off, off + 1});
        off += 2;
        break;
      }
      case RepKind::GammaStarDeg: {
        const Complex om = *b.omega_sq;
        hs.push_back(E * CMatrix::Identity(2, 2));
        us.push_back((CMatrix(2, 2) << 0, 1, om, 0).finished());
        frame_energy.push_back(E);
        frame_energy.push_back(E);
        const Complex canon = om.imag() >= 0 ? om : std::conj(om);
        add_expected(RepKind::GammaStarDeg, canon, flip_value(canon), {E, E}, {off, off + 1});
        off += 2;
        break;
      }
    }
  }

  const int n = off;
  CMatrix H0 = CMatrix::Zero(n, n);
  CMatrix U0 = CMatrix::Zero(n, n);
  int pos = 0;
  for (size_t k = 0; k < hs.size(); ++k) {
    const int d = static_cast<int>(hs[k].rows());
    H0.block(pos, pos, d, d) = hs[k];
    U0.block(pos, pos, d, d) = us[k];
    pos += d;
  }

  std::mt19937_64 rng(plan.seed);
  const CMatrix V = random_unitary(n, rng);
  const CMatrix H = V * H0 * V.adjoint();
  const CMatrix U = V * U0 * V.transpose();

  // frame positions -> positions in the spectrally sorted eigenvalue list
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (frame_energy[a] != frame_energy[b])
      return spectral_less(frame_energy[a], frame_energy[b]);
    return a < b;
  });
  std::vector<int> rank(n);
  for (int i = 0; i < n; ++i) rank[order[i]] = i;
  for (auto& blk : exp.blocks) {
    for (auto& ix : blk.state_indices) ix = rank[ix];
    std::sort(blk.state_indices.begin(), blk.state_indices.end());
  }

  exp.dim = n;
  exp.commutation_residual = 0.0;
  tally(exp);
  std::sort(exp.blocks.begin(), exp.blocks.end(), [](const RepBlock& x, const RepBlock& y) {
    if (x.energies[0] != y.energies[0]) return spectral_less(x.energies[0], y.energies[0]);
    if (x.kind != y.kind) return static_cast<int>(x.kind) < static_cast<int>(y.kind);
    return x.state_indices[0] < y.state_indices[0];
  });

  return PlantedModel{H, AntiUnitaryOp(U, "planted"), V, std::move(exp)};
}

PlantedPlan random_plan(std::mt19937_64& rng, int max_blocks) {
  std::uniform_int_distribution<int> nb(1, std::max(1, max_blocks));
  std::uniform_real_distribution<double> re(-5.0, 5.0);
  std::uniform_real_distribution<double> im(0.1, 2.0);
  std::uniform_real_distribution<double> th(0.15, std::numbers::pi - 0.15);
  std::uniform_int_distribution<int> kind_pick(0, 6);
  std::uniform_int_distribution<int> coin(0, 1);

  PlantedPlan plan;
  plan.seed = rng();
  const int nblocks = nb(rng);
  std::vector<Complex> taken;
  auto far_enough = [&](const Complex& e) {
    for (const Complex& t : taken)
      if (std::abs(e - t) < 0.05 || std::abs(e - std::conj(t)) < 0.05) return false;
    return true;
  };
  for (int i = 0; i < nblocks; ++i) {
    PlantedBlockSpec b;
    b.kind = static_cast<RepKind>(kind_pick(rng));
    Complex e;
    do {
      const double r = re(rng);
      e = is_pair_kind(b.kind) ? Complex(r, im(rng)) : Complex(r, 0.0);
    } while (!far_enough(e));
    taken.push_back(e);
    b.energy = e;
    if (is_star_kind(b.kind)) {
      double t = th(rng);
      if (coin(rng)) t = -t;
      b.omega_sq = std::polar(1.0, t);
    }
    plan.blocks.push_back(b);
  }
  return plan;
}

bool report_matches(const ClassificationReport& actual, const ClassificationReport& expected,
                    double tol, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (actual.dim != expected.dim) return fail("dimension mismatch");
  if (!actual.unassigned.empty()) {
    std::ostringstream os;
    os << actual.unassigned.size() << " unassigned state(s): " << actual.unassigned[0].reason;
    return fail(os.str());
  }
  if (!(actual.multiplicities == expected.multiplicities)) {
    std::ostringstream os;
    os << "multiplicities differ: got (" << actual.multiplicities.n_star << ","
       << actual.multiplicities.n_minus << "," << actual.multiplicities.n_plus << ","
       << actual.multiplicities.n_plus_1d << ") expected (" << expected.multiplicities.n_star
       << "," << expected.multiplicities.n_minus << "," << expected.multiplicities.n_plus << ","
       << expected.multiplicities.n_plus_1d << ")";
    return fail(os.str());
  }
  if (actual.blocks.size() != expected.blocks.size()) return fail("block count mismatch");

  const double om_tol = std::max(1e-6, 100 * tol);
  std::vector<bool> used(actual.blocks.size(), false);
  for (const auto& e : expected.blocks) {
    bool matched = false;
    for (size_t j = 0; j < actual.blocks.size(); ++j) {
      if (used[j]) continue;
      const auto& a = actual.blocks[j];
      if (a.kind != e.kind || a.energies.size() != e.energies.size()) continue;
      bool ok = true;
      for (size_t k = 0; k < e.energies.size(); ++k)
        ok = ok && std::abs(a.energies[k] - e.energies[k]) <=
                       tol * std::max(1.0, std::abs(e.energies[k]));
      ok = ok && std::abs(a.omega_sq - e.omega_sq) <= om_tol;
      ok = ok && std::abs(a.omega - e.omega) <= om_tol;
      if (ok) {
        used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) {
      std::ostringstream os;
      os << "no match for expected block " << rep_kind_name(e.kind) << " at (" << e.energies[0].real()
         << "," << e.energies[0].imag() << ")";
      return fail(os.str());
    }
  }
  return true;
}

}  // namespace antispec
