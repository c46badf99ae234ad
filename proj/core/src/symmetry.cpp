#include "entsym/symmetry.hpp"

#include <cmath>
#include <numbers>

namespace entsym {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Rectangular dim_a x dim_b diagonal of the Schmidt coefficients.
Matrix sigma_matrix(const SchmidtDecomposition& sd) {
  Matrix s = Matrix::Zero(sd.dim_a(), sd.dim_b());
  for (int i = 0; i < sd.sigma.size(); ++i) s(i, i) = sd.sigma(i);
  return s;
}

void require_square(const KrausMap& map) {
  if (map.in_dim != map.out_dim)
    throw NonSquare("operation requires square Kraus operators");
}

} // namespace

KrausMap make_kraus(std::vector<Matrix> ops) {
  if (ops.empty()) throw DimensionMismatch("Kraus map needs at least one operator");
  const auto rows = ops.front().rows();
  const auto cols = ops.front().cols();
  for (const auto& k : ops)
    if (k.rows() != rows || k.cols() != cols)
      throw DimensionMismatch("Kraus operators must share one shape");
  KrausMap map;
  map.out_dim = static_cast<int>(rows);
  map.in_dim = static_cast<int>(cols);
  map.ops = std::move(ops);
  return map;
}

bool is_fully_entangled(const SchmidtDecomposition& sd) {
  return sd.rank == std::min(sd.dim_a(), sd.dim_b());
}

bool small_side_is_a(const SchmidtDecomposition& sd) {
  return sd.dim_a() <= sd.dim_b();
}

bool is_maximally_entangled(const SchmidtDecomposition& sd, double tol) {
  if (sd.dim_a() != sd.dim_b()) return false;
  const double target = 1.0 / std::sqrt(static_cast<double>(sd.dim_a()));
  for (int i = 0; i < sd.sigma.size(); ++i)
    if (std::abs(sd.sigma(i) - target) >= tol) return false;
  return true;
}

Matrix related_operator(const Matrix& u, const SchmidtDecomposition& sd) {
  const int da = sd.dim_a();
  const int db = sd.dim_b();
  if (da > db)
    throw WrongOrientation("actions on the larger side cannot be replicated");
  if (sd.rank < da)
    throw NotFullyEntangled("state is not fully entangled across this bipartition");
  if (u.rows() != da || u.cols() != da)
    throw DimensionMismatch("operator shape does not match side A");

  const Matrix u_tilde = sd.left_basis.adjoint() * u * sd.left_basis;
  // Sigma_R^{-1} U~ Sigma has entries u~_ij sigma_j / sigma_i on the
  // dim_a block; the complement is the canonical zero choice.
  Matrix m = Matrix::Zero(db, db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      m(i, j) = u_tilde(i, j) * sd.sigma(j) / sd.sigma(i);
  const Matrix v_tilde = m.transpose();
  return sd.right_basis.transpose() * v_tilde * sd.right_basis.conjugate();
}

VerifyResult verify_related(const Matrix& u, const Matrix& v, const PureState& state,
                            const Bipartition& bp) {
  if (u.rows() != bp.dim_a || u.cols() != bp.dim_a ||
      v.rows() != bp.dim_b || v.cols() != bp.dim_b)
    throw DimensionMismatch("operator shapes do not match the bipartition");

  const Matrix c = bipartition_matrix(state, bp);
  VerifyResult r;
  r.state_residual = (u * c - c * v.transpose()).norm();

  const SchmidtDecomposition sd = schmidt_decompose(state, bp);
  const Matrix u_tilde = sd.left_basis.adjoint() * u * sd.left_basis;
  const Matrix v_tilde = sd.right_basis.conjugate() * v * sd.right_basis.transpose();
  const Matrix sig = sigma_matrix(sd);
  r.matrix_residual = (u_tilde * sig - sig * v_tilde.transpose()).norm();
  return r;
}

KrausMap related_kraus(const KrausMap& map, const SchmidtDecomposition& sd) {
  require_square(map);
  std::vector<Matrix> related;
  related.reserve(map.ops.size());
  for (const auto& k : map.ops) related.push_back(related_operator(k, sd));
  return make_kraus(std::move(related));
}

Matrix choi_matrix(const KrausMap& map) {
  require_square(map);
  const int d = map.in_dim;
  Matrix choi = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Matrix block = Matrix::Zero(d, d);
      for (const auto& k : map.ops) block += k.col(i) * k.col(j).adjoint();
      choi.block(i * d, j * d, d, d) = block;
    }
  return choi;
}

bool is_cp(const KrausMap& map, double tol) {
  return choi_min_eigenvalue(map) >= -tol;
}

bool is_tp(const KrausMap& map, double tol) {
  require_square(map);
  Matrix acc = Matrix::Zero(map.in_dim, map.in_dim);
  for (const auto& k : map.ops) acc += k.adjoint() * k;
  acc -= Matrix::Identity(map.in_dim, map.in_dim);
  return acc.cwiseAbs().maxCoeff() < tol;
}

bool is_unital(const KrausMap& map, double tol) {
  require_square(map);
  Matrix acc = Matrix::Zero(map.out_dim, map.out_dim);
  for (const auto& k : map.ops) acc += k * k.adjoint();
  acc -= Matrix::Identity(map.out_dim, map.out_dim);
  return acc.cwiseAbs().maxCoeff() < tol;
}

double choi_min_eigenvalue(const KrausMap& map) {
  const Matrix choi = choi_matrix(map);
  // The construction is Hermitian up to rounding; symmetrize before solving.
  const Matrix herm = 0.5 * (choi + choi.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

SymmetryReport analyze_related_map(const KrausMap& map, const SchmidtDecomposition& sd) {
  const KrausMap rel = related_kraus(map, sd);
  const int da = sd.dim_a();
  const int db = sd.dim_b();

  // State in the bipartition-ordered product basis.
  const Matrix sig = sigma_matrix(sd);
  const Matrix c = sd.left_basis * sig * sd.right_basis;
  Vector psi(da * db);
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b) psi(a * db + b) = c(a, b);
  const Matrix rho = psi * psi.adjoint();

  const Matrix eye_a = Matrix::Identity(da, da);
  const Matrix eye_b = Matrix::Identity(db, db);
  Matrix lhs = Matrix::Zero(da * db, da * db);
  Matrix rhs = Matrix::Zero(da * db, da * db);
  for (std::size_t l = 0; l < map.ops.size(); ++l) {
    const Matrix ka = kron(map.ops[l], eye_b);
    const Matrix jb = kron(eye_a, rel.ops[l]);
    lhs += ka * rho * ka.adjoint();
    rhs += jb * rho * jb.adjoint();
  }

  SymmetryReport report;
  report.residual = (lhs - rhs).cwiseAbs().maxCoeff();
  report.related_is_cp = is_cp(rel);
  report.related_is_tp = is_tp(rel);
  report.related_is_unital = is_unital(rel);
  report.choi_min_eigenvalue = choi_min_eigenvalue(rel);
  return report;
}

Matrix generalized_pauli(int d, int a, int b) {
  if (d < 2) throw DomainError("generalized_pauli requires d >= 2");
  a = ((a % d) + d) % d;
  b = ((b % d) + d) % d;
  Matrix m = Matrix::Zero(d, d);
  const double w = 2.0 * std::numbers::pi / static_cast<double>(d);
  for (int j = 0; j < d; ++j)
    m((j + a) % d, j) = std::polar(1.0, w * static_cast<double>(b * j));
  return m;
}

} // namespace entsym
