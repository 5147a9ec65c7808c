#include "antispec/random.hpp"

#include <cmath>

namespace antispec {

CMatrix random_gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng) * s, g(rng) * s);
  return m;
}

CMatrix random_unitary(int n, std::mt19937_64& rng) {
  CMatrix g = random_gaussian(n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the gauge: make the R diagonal positive real so Q is Haar and does
  // not depend on sign conventions inside the QR kernel.
  for (int j = 0; j < n; ++j) {
    Complex d = r(j, j);
    double a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return q;
}

}  // namespace antispec
