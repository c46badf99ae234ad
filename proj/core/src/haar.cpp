#include "entsym/haar.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "entsym/rng.hpp"

namespace entsym {

Matrix haar_unitary(int d, const HaarStream& stream, std::uint64_t k) {
  if (d < 1) throw DomainError("haar_unitary requires d >= 1");
  auto eng = rng::substream(stream.seed, k);
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng::complex_normal(eng);

  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double m = std::abs(rii);
    q.col(i) *= (m > 0.0) ? rii / m : Complex(1.0, 0.0);
  }
  return q;
}

double element_modulus_mean(int d) {
  if (d < 2) throw DomainError("element_modulus_mean requires d >= 2");
  const double dd = static_cast<double>(d);
  const double gamma_form = std::exp(0.5 * std::log(std::numbers::pi) +
                                     std::lgamma(dd) - std::numbers::ln2 -
                                     std::lgamma(dd + 0.5));
  // 2^{2d-2} / [(2d-1) C(2d-2, d-1)] via log-gamma.
  const double log_binom = std::lgamma(2.0 * dd - 1.0) - 2.0 * std::lgamma(dd);
  const double binom_form =
      std::exp((2.0 * dd - 2.0) * std::numbers::ln2 - std::log(2.0 * dd - 1.0) - log_binom);
  if (std::abs(gamma_form - binom_form) > 1e-12)
    throw DomainError("closed forms for the element modulus mean disagree");
  return gamma_form;
}

DensityCheck element_density_check(int d, int n, const HaarStream& stream) {
  if (d < 2) throw DomainError("element_density_check requires d >= 2");
  constexpr int kBins = 20;
  std::vector<double> observed(kBins, 0.0);
  for (int k = 0; k < n; ++k) {
    const Matrix u = haar_unitary(d, stream, static_cast<std::uint64_t>(k));
    const double r = std::abs(u(0, 0));
    int bin = static_cast<int>(r * kBins);
    if (bin >= kBins) bin = kBins - 1;
    observed[bin] += 1.0;
  }

  // CDF of |U_jk| is F(r) = 1 - (1 - r^2)^{d-1}.
  auto cdf = [d](double r) {
    return 1.0 - std::pow(1.0 - r * r, static_cast<double>(d - 1));
  };
  DensityCheck check;
  for (int b = 0; b < kBins; ++b) {
    const double lo = static_cast<double>(b) / kBins;
    const double hi = static_cast<double>(b + 1) / kBins;
    const double expected = (cdf(hi) - cdf(lo)) * n;
    const double diff = observed[b] - expected;
    check.statistic += diff * diff / expected;
  }
  check.threshold = 43.820; // chi-square 99.9% critical value, 19 dof
  check.pass = check.statistic < check.threshold;
  return check;
}

} // namespace entsym
