#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "entsym/errors.hpp"

namespace entsym {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Pure state of a multi-qudit register. Amplitudes are stored row-major
/// over the subsystems in ascending index order (subsystem 0 is the most
/// significant digit of the composite index).
struct PureState {
  std::vector<int> dims;
  Vector amplitudes;
  // Multiplicative factor applied to the input vector at construction
  // (1.0 when the input was already normalized).
  double normalization = 1.0;

  int total_dim() const {
    int n = 1;
    for (int d : dims) n *= d;
    return n;
  }
};

struct NormalizationPolicy {
  double slack = 1e-6;
  bool auto_normalize = true;
};

/// A bipartition of the subsystem indices into side A and its complement.
struct Bipartition {
  std::vector<int> side_a; // sorted, nonempty, proper subset
  std::vector<int> side_b; // complement, sorted
  int dim_a = 0;
  int dim_b = 0;
};

Bipartition make_bipartition(const std::vector<int>& dims, std::vector<int> side_a);

/// Schmidt data for a state across a bipartition, in the convention
/// C = Y * Sigma * Z with Y (dim_a x dim_a) and Z (dim_b x dim_b) unitary
/// and Sigma the rectangular diagonal of the descending coefficients.
struct SchmidtDecomposition {
  RealVector sigma;   // length min(dim_a, dim_b), descending, >= 0
  Matrix left_basis;  // Y
  Matrix right_basis; // Z
  int rank = 0;       // count of sigma_i > rank_tol * sigma_1
  Bipartition bipartition;

  int dim_a() const { return bipartition.dim_a; }
  int dim_b() const { return bipartition.dim_b; }
};

struct DensityMatrix {
  std::vector<int> dims;
  Matrix matrix;

  int total_dim() const {
    int n = 1;
    for (int d : dims) n *= d;
    return n;
  }
};

PureState make_pure_state(const Vector& amplitudes, std::vector<int> dims,
                          NormalizationPolicy policy = {});

/// Reshape the amplitude vector into the coefficient matrix C of the
/// bipartition: rows enumerate side-A indices row-major in ascending
/// original order, columns likewise for side B.
Matrix bipartition_matrix(const PureState& state, const Bipartition& bp);

SchmidtDecomposition schmidt_decompose(const PureState& state, const Bipartition& bp,
                                       double rank_tol = 1e-10);

/// Density matrix re-indexed to the bipartition product basis |a>|b>, with
/// a row-major over side A and b row-major over side B.
Matrix bipartition_density(const DensityMatrix& rho, const Bipartition& bp);

/// Validating constructor: Hermitian within 1e-12, unit trace within 1e-12,
/// minimum eigenvalue >= -1e-10.
DensityMatrix make_density(const Matrix& m, std::vector<int> dims);

DensityMatrix to_density(const PureState& state);

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

/// Purification with one ancilla of dimension equal to the full matrix size;
/// eigenvalues placed in descending order.
PureState purify(const DensityMatrix& rho);

/// Two-ququart family with Schmidt coefficients
/// (1 - x/4 - x^2/4 - x^3/4)^{1/2}, x^{1/2}/2, x/2, x^{3/2}/2.
PureState fig1_state(double x);

/// sqrt(1-eps)|00> + sqrt(eps)|11> embedded in d x d.
PureState fig2_state(double eps, int d);

PureState max_entangled(int d);

PureState random_pure(const std::vector<int>& dims, std::uint64_t seed);

} // namespace entsym
