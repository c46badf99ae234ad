#pragma once

#include <vector>

#include "entsym/state.hpp"

namespace entsym {

/// Quantum operation as a finite list of equal-shaped Kraus operators.
struct KrausMap {
  int in_dim = 0;
  int out_dim = 0;
  std::vector<Matrix> ops;
};

KrausMap make_kraus(std::vector<Matrix> ops);

struct SymmetryReport {
  double residual = 0.0; // max-entry norm of the density-matrix identity
  bool related_is_cp = false;
  bool related_is_tp = false;
  bool related_is_unital = false;
  double choi_min_eigenvalue = 0.0;
};

/// True iff the Schmidt rank equals min(dim_a, dim_b).
bool is_fully_entangled(const SchmidtDecomposition& sd);

/// The related-operator construction requires side A to be the smaller side.
bool small_side_is_a(const SchmidtDecomposition& sd);

/// True iff dim_a == dim_b and all coefficients equal 1/sqrt(dim_a) within tol.
bool is_maximally_entangled(const SchmidtDecomposition& sd, double tol = 1e-10);

/// Operator V on side B with (U x 1)|psi> = (1 x V)|psi>, built as
/// V = Z^T (Sigma_R^{-1} (Y^dag U Y) Sigma)^T Z^*. When dim_a < dim_b the
/// freedom outside the Schmidt block is fixed to zero.
Matrix related_operator(const Matrix& u, const SchmidtDecomposition& sd);

struct VerifyResult {
  double state_residual = 0.0;  // ||(U x 1)|psi> - (1 x V)|psi>||_2
  double matrix_residual = 0.0; // ||U~ Sigma - Sigma V~^T||_F in the Schmidt basis
};

VerifyResult verify_related(const Matrix& u, const Matrix& v, const PureState& state,
                            const Bipartition& bp);

/// Applies the related-operator construction to every Kraus operator.
KrausMap related_kraus(const KrausMap& map, const SchmidtDecomposition& sd);

/// Unnormalized Choi matrix, sum_ij |i><j| x sum_l K_l |i><j| K_l^dag;
/// trace equals the dimension for trace-preserving maps.
Matrix choi_matrix(const KrausMap& map);

bool is_cp(const KrausMap& map, double tol = 1e-9);
bool is_tp(const KrausMap& map, double tol = 1e-9);
bool is_unital(const KrausMap& map, double tol = 1e-9);
double choi_min_eigenvalue(const KrausMap& map);

SymmetryReport analyze_related_map(const KrausMap& map, const SchmidtDecomposition& sd);

/// Generalized Pauli X^a Z^b on a d-level system; the d^2 of them form a
/// basis of the matrix algebra and generate an irreducible representation.
Matrix generalized_pauli(int d, int a, int b);

} // namespace entsym
