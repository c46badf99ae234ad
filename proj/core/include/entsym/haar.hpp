#pragma once

#include <cstdint>

#include "entsym/state.hpp"

namespace entsym {

/// Identifies a reproducible stream of Haar samples. Sample k is a pure
/// function of (seed, k), so draws are order-independent and can be farmed
/// out to any number of workers.
struct HaarStream {
  std::uint64_t seed = 0;
};

/// Haar-distributed d x d unitary: Ginibre matrix, QR factorization, then
/// the Q columns are rescaled by the phases of R's diagonal. Without that
/// phase correction the factorization is not unique and Q is not Haar.
Matrix haar_unitary(int d, const HaarStream& stream, std::uint64_t k);

/// E|U_jk| over the Haar measure: sqrt(pi) Gamma(d) / (2 Gamma(d + 1/2)),
/// checked internally against the binomial form
/// 2^{2d-2} / [(2d-1) C(2d-2, d-1)].
double element_modulus_mean(int d);

struct DensityCheck {
  double statistic = 0.0; // chi-square over 20 equal-width bins of |U_11|
  double threshold = 0.0; // 99.9% critical value, 19 dof
  bool pass = false;
};

/// Goodness of fit of the sampled |U_11| against the analytic density
/// (d-1)(1-r^2)^{d-2} * 2r on [0, 1].
DensityCheck element_density_check(int d, int n, const HaarStream& stream);

} // namespace entsym
