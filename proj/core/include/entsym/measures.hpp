#pragma once

#include <cstdint>

#include "entsym/state.hpp"

namespace entsym {

/// Monte Carlo estimate with its standard error.
struct MeasureEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
  std::uint64_t seed = 0;
};

struct OptimizerConfig {
  int n_restarts = 16;
  int max_iters = 400;
  double f_tol = 1e-10;
  std::uint64_t seed = 0;
};

struct MaxFidelityResult {
  double value = 0.0;
  Matrix v_opt; // unitary on side B achieving the value
};

/// M(U) = max over unitary V of |<psi| U^dag x V |psi>| = Tr|Sigma U Sigma|.
/// The optimizer V comes from inverting the unitary polar part of
/// Sigma U^* Sigma on the Schmidt-rank block, identity on the complement.
MaxFidelityResult max_fidelity_unitary(const Matrix& u, const SchmidtDecomposition& sd);

/// max over unitary V of |Tr[(U^dag x V) rho]|, which equals the trace norm
/// of the partial trace over A of (U^dag x 1) rho.
double inner_max_mixed(const Matrix& u, const DensityMatrix& rho, const Bipartition& split);

/// Closed form min over U of M(U) for pure states:
/// sum_i sigma_i sigma_{d_a+1-i}. Vanishes when rank <= d_a/2.
double min_fidelity_pure(const SchmidtDecomposition& sd);

struct MinFidelityResult {
  double value = 0.0;
  bool converged = false; // false when no restart met f_tol in max_iters
};

/// Derivative-free minimization of inner_max_mixed over unitaries on side A,
/// parameterized as exp(iH) with H Hermitian. Deterministic per cfg.seed.
MinFidelityResult min_fidelity_numeric(const DensityMatrix& rho, const Bipartition& split,
                                       const OptimizerConfig& cfg);

/// E_S: Haar average of the best achievable fidelity. Sample k is drawn from
/// the (seed, k) substream, so the estimate does not depend on the worker
/// count. Pure-state overload uses the Tr|Sigma U Sigma| closed form.
MeasureEstimate symmetry_of_entanglement(const DensityMatrix& rho, const Bipartition& split,
                                         long n_samples, std::uint64_t seed, int workers = 1);
MeasureEstimate symmetry_of_entanglement(const SchmidtDecomposition& sd, long n_samples,
                                         std::uint64_t seed, int workers = 1);

/// E_S of separable states: sqrt(pi) Gamma(d) / (2 Gamma(d + 1/2)).
double separable_baseline(int d);

/// Affine rescale of E_S so separable states map to 0 and maximally
/// entangled states to 1.
double normalized_symmetry(double e_value, int d);

double entanglement_entropy(const SchmidtDecomposition& sd); // nats
double negativity_pure(const SchmidtDecomposition& sd);
double entropy_normalized(const SchmidtDecomposition& sd);    // / log d_a
double negativity_normalized(const SchmidtDecomposition& sd); // / (d_a - 1)

/// First-order expansion of Tr|Sigma U Sigma| around a separable state with
/// Sigma = diag(sqrt(1-eps), sqrt(eps), 0, ...), in terms of the top-left
/// 2x2 block of U. The correction enters at order eps.
double perturbative_M(const Matrix& u, double eps);

enum class ConvexMeasure { MinFidelity, SymmetryOfEntanglement };

/// Checks measure(sum_i p_i rho_i) <= sum_i p_i measure(rho_i) + slack,
/// with slack 1e-5 for the minimum fidelity and 3 combined standard errors
/// for the symmetry of entanglement.
bool convexity_check(const std::vector<DensityMatrix>& rhos, const std::vector<double>& weights,
                     ConvexMeasure measure, const Bipartition& split, const OptimizerConfig& cfg,
                     long n_samples = 20000);

} // namespace entsym
