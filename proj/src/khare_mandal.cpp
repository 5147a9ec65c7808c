#include "antispec/khare_mandal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "antispec/errors.hpp"

namespace antispec {

namespace {

constexpr double kPi = 3.14159265358979323846;

Complex envelope(double zeta, Complex z) {
  return std::exp(Complex(0.0, 0.5) * zeta * std::cosh(2.0 * z));
}

WaveFunction make_state(double zeta, const std::function<Complex(Complex)>& f) {
  return [zeta, f](Complex z) { return envelope(zeta, z) * f(z); };
}

void require_zeta(double zeta, double limit) {
  if (!std::isfinite(zeta) || std::abs(zeta) > limit)
    throw InvalidInput("coupling strength outside the supported range");
}

} // namespace

Complex pt_image(const WaveFunction& psi, const Complex& z) {
  return std::conj(psi(std::conj(Complex(0.0, kPi / 2.0) - z)));
}

Complex km_apply_hamiltonian(const WaveFunction& psi, int M, double zeta, double x) {
  // 9-point second derivative, O(h^8)
  static const double c[9] = {-1.0 / 560.0, 8.0 / 315.0,  -1.0 / 5.0,
                              8.0 / 5.0,    -205.0 / 72.0, 8.0 / 5.0,
                              -1.0 / 5.0,   8.0 / 315.0,   -1.0 / 560.0};
  const double rate = M + 2.0 * std::abs(zeta) * std::cosh(2.0 * x) + 1.0;
  const double h = std::min(0.05, 0.12 / rate);
  Complex d2(0.0, 0.0);
  for (int j = -4; j <= 4; ++j) d2 += c[j + 4] * psi(Complex(x + j * h, 0.0));
  d2 /= h * h;
  const Complex v = zeta * std::cosh(2.0 * x) - Complex(0.0, M);
  return -d2 - v * v * psi(Complex(x, 0.0));
}

std::vector<KMState> khare_mandal_states(int M, double zeta) {
  if (M != 2 && M != 3 && M != 4) throw UnknownM("level number must be 2, 3 or 4");
  require_zeta(zeta, 1.0);

  std::vector<KMState> states;
  if (M == 2) {
    const Complex ep(3.0 - zeta * zeta, 2.0 * zeta);
    states.push_back({"psi_plus", ep, make_state(zeta, [](Complex z) { return std::cosh(z); })});
    states.push_back(
        {"psi_minus", std::conj(ep), make_state(zeta, [](Complex z) { return std::sinh(z); })});
    return states;
  }

  if (M == 3) {
    const double disc = 1.0 - 4.0 * zeta * zeta;
    if (disc < -1e-12)
      throw OutOfRegime("the M = 3 doublet is only real for zeta^2 <= 1/4");
    const double s = std::sqrt(std::max(disc, 0.0));
    states.push_back({"psi_zero", Complex(5.0 - zeta * zeta, 0.0),
                      make_state(zeta, [](Complex z) { return std::sinh(2.0 * z); })});
    if (disc <= 1e-12) {
      // zeta^2 = 1/4: the pair has merged into one state
      states.push_back({"psi_merged", Complex(7.0 - zeta * zeta, 0.0),
                        make_state(zeta, [zeta](Complex z) {
                          return 2.0 * zeta * std::cosh(2.0 * z) - Complex(0.0, 1.0);
                        })});
      return states;
    }
    states.push_back({"psi_plus", Complex(7.0 - zeta * zeta + 2.0 * s, 0.0),
                      make_state(zeta, [zeta, s](Complex z) {
                        return 2.0 * zeta * std::cosh(2.0 * z) - Complex(0.0, 1.0 + s);
                      })});
    // normalization regular at zeta = 0: (1 - s)/(2 zeta) = 2 zeta/(1 + s)
    states.push_back({"psi_minus", Complex(7.0 - zeta * zeta - 2.0 * s, 0.0),
                      make_state(zeta, [zeta, s](Complex z) {
                        return std::cosh(2.0 * z) - Complex(0.0, 2.0 * zeta / (1.0 + s));
                      })});
    return states;
  }

  // M = 4: two 2x2 blocks, even {cosh 3x, cosh x} and odd {sinh 3x, sinh x}
  const Complex w = std::sqrt(Complex(1.0 - zeta * zeta, zeta));
  const Complex lam_p = Complex(11.0 - zeta * zeta, 2.0 * zeta) + 4.0 * w;
  const Complex lam_m = Complex(11.0 - zeta * zeta, 2.0 * zeta) - 4.0 * w;
  const Complex iz(0.0, zeta);
  const Complex bp = 4.0 + 2.0 * iz + 4.0 * w;       // cosh x weight of the + branch
  const Complex bm = -6.0 * iz / bp;                 // cosh x weight of the - branch
  states.push_back({"psi_even_plus", lam_p, make_state(zeta, [iz, bp](Complex z) {
                      return 2.0 * iz * std::cosh(3.0 * z) + bp * std::cosh(z);
                    })});
  states.push_back({"psi_odd_plus", std::conj(lam_p),
                    make_state(zeta, [iz, bp](Complex z) {
                      return 2.0 * iz * std::sinh(3.0 * z) + std::conj(bp) * std::sinh(z);
                    })});
  states.push_back({"psi_even_minus", lam_m, make_state(zeta, [bm](Complex z) {
                      return std::cosh(3.0 * z) + bm * std::cosh(z);
                    })});
  states.push_back({"psi_odd_minus", std::conj(lam_m),
                    make_state(zeta, [bm](Complex z) {
                      return std::sinh(3.0 * z) - std::conj(bm) * std::sinh(z);
                    })});
  return states;
}

namespace {

double state_scale(const KMState& st, const std::vector<double>& xs) {
  double scale = 0.0;
  for (double x : xs) scale = std::max(scale, std::abs(st.psi(Complex(x, 0.0))));
  return std::max(scale, std::numeric_limits<double>::min());
}

KMCheck eigen_residual_check(const KMState& st, int M, double zeta,
                             const std::vector<double>& xs) {
  const double scale = state_scale(st, xs);
  double worst = 0.0;
  for (double x : xs) {
    const Complex hv = km_apply_hamiltonian(st.psi, M, zeta, x);
    const Complex ev = st.energy * st.psi(Complex(x, 0.0));
    const double local = std::max(std::abs(st.psi(Complex(x, 0.0))), 1e-2 * scale);
    worst = std::max(worst, std::abs(hv - ev) / ((1.0 + std::abs(st.energy)) * local));
  }
  return {"eigen residual of " + st.name, worst, 1e-6, worst <= 1e-6};
}

// max_x |(PT a)(x) - coeff b(x)| / max_x |b(x)|
KMCheck flip_check(const std::string& what, const KMState& a, const Complex& coeff,
                   const KMState& b, const std::vector<double>& xs) {
  const double scale = state_scale(b, xs);
  double worst = 0.0;
  for (double x : xs)
    worst = std::max(worst,
                     std::abs(pt_image(a.psi, Complex(x, 0.0)) - coeff * b.psi(Complex(x, 0.0))) /
                         scale);
  return {what, worst, 1e-10, worst <= 1e-10};
}

KMCheck twofold_check(const KMState& st, double sign, const std::vector<double>& xs) {
  const WaveFunction once = [&st](Complex z) { return pt_image(st.psi, z); };
  const double scale = state_scale(st, xs);
  double worst = 0.0;
  for (double x : xs)
    worst = std::max(worst, std::abs(pt_image(once, Complex(x, 0.0)) -
                                     sign * st.psi(Complex(x, 0.0))) /
                                scale);
  const char* tag = sign < 0 ? " equals -psi" : " equals +psi";
  return {"twofold application on " + st.name + tag, worst, 1e-10, worst <= 1e-10};
}

KMCheck conjugate_pair_check(const std::string& what, const Complex& e1, const Complex& e2) {
  const double d = std::abs(e1 - std::conj(e2)) / std::max(1.0, std::abs(e1));
  return {what, d, 1e-10, d <= 1e-10};
}

} // namespace

KMReport khare_mandal_verify(int M, double zeta, std::vector<double> sample_points) {
  if (sample_points.empty()) {
    sample_points.reserve(50);
    for (int i = 0; i < 50; ++i) sample_points.push_back(-2.0 + 4.0 * i / 49.0);
  }

  KMReport report;
  report.M = M;
  report.zeta = zeta;
  report.states = khare_mandal_states(M, zeta);

  for (const KMState& st : report.states)
    report.checks.push_back(eigen_residual_check(st, M, zeta, sample_points));

  const auto& st = report.states;
  if (M == 2) {
    report.representation = "Γ₋";
    report.checks.push_back(conjugate_pair_check("energies form a conjugate pair", st[0].energy,
                                                 st[1].energy));
    report.checks.push_back(
        flip_check("PT psi_plus equals -i psi_minus", st[0], Complex(0.0, -1.0), st[1],
                   sample_points));
    report.checks.push_back(flip_check("PT psi_minus equals +i psi_plus", st[1],
                                       Complex(0.0, 1.0), st[0], sample_points));
    report.checks.push_back(twofold_check(st[0], -1.0, sample_points));
    report.checks.push_back(twofold_check(st[1], -1.0, sample_points));
  } else if (M == 3) {
    const bool merged = st.size() == 2;
    report.representation = merged ? "γ₊ ⊗ γ₊" : "γ₊ ⊗ γ₊ ⊗ γ₊";
    // gauge-fixed invariant combinations: psi_zero itself, i * psi_{+,-}
    report.checks.push_back(
        flip_check("PT fixes psi_zero", st[0], Complex(1.0, 0.0), st[0], sample_points));
    for (size_t k = 1; k < st.size(); ++k) {
      KMState gauged = st[k];
      const WaveFunction raw = st[k].psi;
      gauged.name = "i " + st[k].name;
      gauged.psi = [raw](Complex z) { return Complex(0.0, 1.0) * raw(z); };
      report.checks.push_back(flip_check("PT fixes " + gauged.name, gauged, Complex(1.0, 0.0),
                                         gauged, sample_points));
    }
    for (const KMState& s : st) {
      const double im = std::abs(s.energy.imag());
      report.checks.push_back(
          {"energy of " + s.name + " is real", im, 1e-12, im <= 1e-12});
    }
    double min_gap = std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < st.size(); ++a)
      for (size_t b = a + 1; b < st.size(); ++b)
        min_gap = std::min(min_gap, std::abs(st[a].energy - st[b].energy));
    report.checks.push_back({"smallest energy gap (must exceed bound)", min_gap, 1e-6,
                             min_gap >= 1e-6});
    report.checks.push_back(twofold_check(st[0], 1.0, sample_points));
  } else {
    report.representation = "Γ₋ ⊗ Γ₋";
    report.checks.push_back(conjugate_pair_check("plus-branch energies form a conjugate pair",
                                                 st[0].energy, st[1].energy));
    report.checks.push_back(conjugate_pair_check("minus-branch energies form a conjugate pair",
                                                 st[2].energy, st[3].energy));
    report.checks.push_back(flip_check("PT psi_even_plus equals -i psi_odd_plus", st[0],
                                       Complex(0.0, -1.0), st[1], sample_points));
    report.checks.push_back(flip_check("PT psi_odd_plus equals +i psi_even_plus", st[1],
                                       Complex(0.0, 1.0), st[0], sample_points));
    report.checks.push_back(flip_check("PT psi_even_minus equals +i psi_odd_minus", st[2],
                                       Complex(0.0, 1.0), st[3], sample_points));
    report.checks.push_back(flip_check("PT psi_odd_minus equals -i psi_even_minus", st[3],
                                       Complex(0.0, -1.0), st[2], sample_points));
    report.checks.push_back(twofold_check(st[0], -1.0, sample_points));
    report.checks.push_back(twofold_check(st[2], -1.0, sample_points));
  }

  report.all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const KMCheck& c) { return c.pass; });
  return report;
}

} // namespace antispec
