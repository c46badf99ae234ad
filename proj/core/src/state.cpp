#include "entsym/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "entsym/rng.hpp"

namespace entsym {

namespace {

void check_dims(const std::vector<int>& dims) {
  if (dims.empty()) throw DimensionMismatch("dimension list is empty");
  for (int d : dims)
    if (d < 2) throw DimensionMismatch("subsystem dimensions must be >= 2");
}

// Composite index strides, subsystem 0 most significant.
std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> s(dims.size());
  int acc = 1;
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= dims[i];
  }
  return s;
}

// Make the first largest-modulus entry of each column real nonnegative,
// absorbing the phase into the paired row of Z when one exists.
void fix_column_phases(Matrix& y, Matrix& z, int paired) {
  for (int i = 0; i < y.cols(); ++i) {
    int arg = 0;
    double best = -1.0;
    for (int j = 0; j < y.rows(); ++j) {
      const double m = std::abs(y(j, i));
      if (m > best + 1e-14) {
        best = m;
        arg = j;
      }
    }
    if (best <= 0.0) continue;
    const Complex v = y(arg, i);
    if (std::abs(v) == 0.0) continue;
    const Complex phase = v / std::abs(v);
    y.col(i) *= std::conj(phase);
    if (i < paired) z.row(i) *= phase;
  }
}

} // namespace

Bipartition make_bipartition(const std::vector<int>& dims, std::vector<int> side_a) {
  check_dims(dims);
  const int n = static_cast<int>(dims.size());
  std::sort(side_a.begin(), side_a.end());
  side_a.erase(std::unique(side_a.begin(), side_a.end()), side_a.end());
  if (side_a.empty()) throw InvalidBipartition("side A is empty");
  if (static_cast<int>(side_a.size()) >= n)
    throw InvalidBipartition("side A must be a proper subset of the subsystems");
  for (int i : side_a)
    if (i < 0 || i >= n) throw InvalidBipartition("subsystem index out of range");

  Bipartition bp;
  bp.side_a = side_a;
  bp.dim_a = 1;
  for (int i : side_a) bp.dim_a *= dims[i];
  bp.dim_b = 1;
  for (int i = 0; i < n; ++i) {
    if (!std::binary_search(side_a.begin(), side_a.end(), i)) {
      bp.side_b.push_back(i);
      bp.dim_b *= dims[i];
    }
  }
  return bp;
}

PureState make_pure_state(const Vector& amplitudes, std::vector<int> dims,
                          NormalizationPolicy policy) {
  check_dims(dims);
  int total = 1;
  for (int d : dims) total *= d;
  if (amplitudes.size() != total)
    throw DimensionMismatch("amplitude length does not match product of dims");

  const double norm = amplitudes.norm();
  if (norm < 1e-300) throw ZeroVector("amplitude vector has vanishing norm");

  PureState st;
  st.dims = std::move(dims);
  const double dev = std::abs(norm - 1.0);
  if (dev <= 1e-12) {
    st.amplitudes = amplitudes;
    st.normalization = 1.0;
  } else if (dev <= policy.slack || policy.auto_normalize) {
    st.amplitudes = amplitudes / norm;
    st.normalization = 1.0 / norm;
  } else {
    throw NotNormalized("input norm deviates from 1 beyond the allowed slack");
  }
  return st;
}

Matrix bipartition_matrix(const PureState& state, const Bipartition& bp) {
  const int n = static_cast<int>(state.dims.size());
  for (int i : bp.side_a)
    if (i < 0 || i >= n) throw InvalidBipartition("bipartition does not match state dims");
  int da = 1, db = 1;
  for (int i : bp.side_a) da *= state.dims[i];
  for (int i : bp.side_b) db *= state.dims[i];
  if (da != bp.dim_a || db != bp.dim_b ||
      static_cast<int>(bp.side_a.size() + bp.side_b.size()) != n)
    throw InvalidBipartition("bipartition does not match state dims");

  const auto strides = strides_of(state.dims);
  Matrix c(bp.dim_a, bp.dim_b);
  std::vector<int> idx(n, 0);
  const int total = state.total_dim();
  for (int g = 0; g < total; ++g) {
    int rem = g;
    for (int i = 0; i < n; ++i) {
      idx[i] = rem / strides[i];
      rem %= strides[i];
    }
    int row = 0;
    for (int i : bp.side_a) row = row * state.dims[i] + idx[i];
    int col = 0;
    for (int i : bp.side_b) col = col * state.dims[i] + idx[i];
    c(row, col) = state.amplitudes(g);
  }
  return c;
}

SchmidtDecomposition schmidt_decompose(const PureState& state, const Bipartition& bp,
                                       double rank_tol) {
  const Matrix c = bipartition_matrix(state, bp);
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);

  SchmidtDecomposition sd;
  sd.bipartition = bp;
  sd.sigma = svd.singularValues();
  sd.left_basis = svd.matrixU();
  // Eigen factors C = U S V^adjoint; our convention is C = Y Sigma Z.
  sd.right_basis = svd.matrixV().adjoint();
  fix_column_phases(sd.left_basis, sd.right_basis,
                    static_cast<int>(sd.sigma.size()));

  sd.rank = 0;
  const double s0 = sd.sigma.size() > 0 ? sd.sigma(0) : 0.0;
  for (int i = 0; i < sd.sigma.size(); ++i)
    if (sd.sigma(i) > rank_tol * s0) ++sd.rank;
  return sd;
}

Matrix bipartition_density(const DensityMatrix& rho, const Bipartition& bp) {
  const int n = static_cast<int>(rho.dims.size());
  if (static_cast<int>(bp.side_a.size() + bp.side_b.size()) != n)
    throw InvalidBipartition("bipartition does not match density matrix dims");
  int da = 1, db = 1;
  for (int i : bp.side_a) da *= rho.dims[i];
  for (int i : bp.side_b) db *= rho.dims[i];
  if (da != bp.dim_a || db != bp.dim_b)
    throw InvalidBipartition("bipartition does not match density matrix dims");

  const auto strides = strides_of(rho.dims);
  // Global index of |a>|b>.
  std::vector<int> gmap(da * db, 0);
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b) {
      int g = 0, ra = a, rb = b;
      for (int i = static_cast<int>(bp.side_a.size()) - 1; i >= 0; --i) {
        const int s = bp.side_a[i];
        g += (ra % rho.dims[s]) * strides[s];
        ra /= rho.dims[s];
      }
      for (int i = static_cast<int>(bp.side_b.size()) - 1; i >= 0; --i) {
        const int s = bp.side_b[i];
        g += (rb % rho.dims[s]) * strides[s];
        rb /= rho.dims[s];
      }
      gmap[a * db + b] = g;
    }

  Matrix out(da * db, da * db);
  for (int i = 0; i < da * db; ++i)
    for (int j = 0; j < da * db; ++j) out(i, j) = rho.matrix(gmap[i], gmap[j]);
  return out;
}

DensityMatrix make_density(const Matrix& m, std::vector<int> dims) {
  check_dims(dims);
  int total = 1;
  for (int d : dims) total *= d;
  if (m.rows() != total || m.cols() != total)
    throw DimensionMismatch("matrix size does not match product of dims");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw NotPositive("density matrix is not Hermitian");
  if (std::abs(m.trace().real() - 1.0) > 1e-12 || std::abs(m.trace().imag()) > 1e-12)
    throw NotPositive("density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw NotPositive("density matrix has a negative eigenvalue");
  return DensityMatrix{std::move(dims), m};
}

DensityMatrix to_density(const PureState& state) {
  DensityMatrix rho;
  rho.dims = state.dims;
  rho.matrix = state.amplitudes * state.amplitudes.adjoint();
  return rho;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = static_cast<int>(rho.dims.size());
  std::vector<int> k = keep;
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  if (k.empty()) throw InvalidSubsystem("keep set is empty");
  for (int i : k)
    if (i < 0 || i >= n) throw InvalidSubsystem("subsystem index out of range");

  std::vector<int> traced;
  for (int i = 0; i < n; ++i)
    if (!std::binary_search(k.begin(), k.end(), i)) traced.push_back(i);

  std::vector<int> kept_dims;
  int dk = 1, dt = 1;
  for (int i : k) {
    kept_dims.push_back(rho.dims[i]);
    dk *= rho.dims[i];
  }
  for (int i : traced) dt *= rho.dims[i];

  const auto strides = strides_of(rho.dims);
  // Global index of the basis vector with kept multi-index a, traced multi-index t.
  auto global = [&](int a, int t) {
    int g = 0;
    for (int i = static_cast<int>(k.size()) - 1; i >= 0; --i) {
      g += (a % rho.dims[k[i]]) * strides[k[i]];
      a /= rho.dims[k[i]];
    }
    for (int i = static_cast<int>(traced.size()) - 1; i >= 0; --i) {
      g += (t % rho.dims[traced[i]]) * strides[traced[i]];
      t /= rho.dims[traced[i]];
    }
    return g;
  };

  Matrix out = Matrix::Zero(dk, dk);
  for (int a = 0; a < dk; ++a)
    for (int b = 0; b < dk; ++b) {
      Complex acc = 0.0;
      for (int t = 0; t < dt; ++t) acc += rho.matrix(global(a, t), global(b, t));
      out(a, b) = acc;
    }

  DensityMatrix r;
  r.dims = std::move(kept_dims);
  r.matrix = std::move(out);
  return r;
}

PureState purify(const DensityMatrix& rho) {
  const int n = static_cast<int>(rho.matrix.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw NotPositive("density matrix has a negative eigenvalue");

  // Descending eigenvalues; phase convention matches schmidt_decompose.
  Matrix vecs = es.eigenvectors().rowwise().reverse();
  RealVector vals = es.eigenvalues().reverse();
  Matrix dummy(0, 0);
  fix_column_phases(vecs, dummy, 0);

  PureState st;
  st.dims = rho.dims;
  st.dims.push_back(n);
  Vector amps = Vector::Zero(n * n);
  for (int kk = 0; kk < n; ++kk) {
    const double p = std::max(vals(kk), 0.0);
    if (p == 0.0) continue;
    const double s = std::sqrt(p);
    for (int j = 0; j < n; ++j) amps(j * n + kk) += s * vecs(j, kk);
  }
  st.amplitudes = amps;
  const double norm = st.amplitudes.norm();
  st.amplitudes /= norm;
  st.normalization = 1.0 / norm;
  return st;
}

PureState fig1_state(double x) {
  if (x < 0.0 || x > 1.0) throw DomainError("fig1_state requires x in [0, 1]");
  const double s1 = std::sqrt(1.0 - x / 4.0 - x * x / 4.0 - x * x * x / 4.0);
  const double s2 = 0.5 * std::sqrt(x);
  const double s3 = 0.5 * x;
  const double s4 = 0.5 * x * std::sqrt(x);
  Vector amps = Vector::Zero(16);
  amps(0) = s1;
  amps(5) = s2;
  amps(10) = s3;
  amps(15) = s4;
  return make_pure_state(amps, {4, 4});
}

PureState fig2_state(double eps, int d) {
  if (eps < 0.0 || eps > 1.0) throw DomainError("fig2_state requires eps in [0, 1]");
  if (d < 2) throw DomainError("fig2_state requires d >= 2");
  Vector amps = Vector::Zero(d * d);
  amps(0) = std::sqrt(1.0 - eps);
  amps(d + 1) = std::sqrt(eps);
  return make_pure_state(amps, {d, d});
}

PureState max_entangled(int d) {
  if (d < 2) throw DomainError("max_entangled requires d >= 2");
  Vector amps = Vector::Zero(d * d);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) amps(i * d + i) = s;
  return make_pure_state(amps, {d, d});
}

PureState random_pure(const std::vector<int>& dims, std::uint64_t seed) {
  check_dims(dims);
  int total = 1;
  for (int d : dims) total *= d;
  auto eng = rng::substream(seed, 0);
  Vector amps(total);
  for (int i = 0; i < total; ++i) amps(i) = rng::complex_normal(eng);
  return make_pure_state(amps, dims);
}

} // namespace entsym
