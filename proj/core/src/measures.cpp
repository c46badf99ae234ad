#include "entsym/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

#include "entsym/haar.hpp"
#include "entsym/rng.hpp"

namespace entsym {

namespace {

void require_unitary(const Matrix& u, double tol = 1e-9) {
  if (u.rows() != u.cols()) throw NotUnitary("operator is not square");
  const Matrix dev = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  if (dev.cwiseAbs().maxCoeff() > tol) throw NotUnitary("operator is not unitary");
}

// Rank-block of Sigma U~ Sigma with U~ = Y^dag U Y; its singular values are
// those of the full product, the padding rows and columns being zero.
Matrix schmidt_block(const Matrix& u, const SchmidtDecomposition& sd, bool conjugate) {
  const Matrix u_tilde = sd.left_basis.adjoint() * u * sd.left_basis;
  const int r = sd.rank;
  Matrix x(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const Complex e = conjugate ? std::conj(u_tilde(i, j)) : u_tilde(i, j);
      x(i, j) = sd.sigma(i) * e * sd.sigma(j);
    }
  return x;
}

double trace_norm(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues().sum();
}

// Evaluates fn(k) for k in [0, n), fanning out over `workers` threads; the
// returned values are ordered by k so reductions are worker-count invariant.
std::vector<double> sample_values(long n, int workers,
                                  const std::function<double(long)>& fn) {
  std::vector<double> vals(static_cast<std::size_t>(n));
  workers = static_cast<int>(std::max<long>(1, std::min<long>(workers, n)));
  if (workers == 1) {
    for (long k = 0; k < n; ++k) vals[static_cast<std::size_t>(k)] = fn(k);
    return vals;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const long lo = n * w / workers;
    const long hi = n * (w + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      for (long k = lo; k < hi; ++k) vals[static_cast<std::size_t>(k)] = fn(k);
    });
  }
  for (auto& t : pool) t.join();
  return vals;
}

MeasureEstimate estimate_from(const std::vector<double>& vals, std::uint64_t seed) {
  MeasureEstimate est;
  est.n_samples = static_cast<long>(vals.size());
  est.seed = seed;
  double sum = 0.0;
  for (double v : vals) sum += v;
  est.value = sum / static_cast<double>(vals.size());
  if (vals.size() > 1) {
    double ss = 0.0;
    for (double v : vals) ss += (v - est.value) * (v - est.value);
    const double var = ss / static_cast<double>(vals.size() - 1);
    est.std_error = std::sqrt(var / static_cast<double>(vals.size()));
  }
  return est;
}

Matrix unitary_from_params(const Eigen::VectorXd& t, int d) {
  Matrix h(d, d);
  int idx = 0;
  for (int i = 0; i < d; ++i) h(i, i) = t(idx++);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double re = t(idx++);
      const double im = t(idx++);
      h(i, j) = Complex(re, im);
      h(j, i) = Complex(re, -im);
    }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phases(d);
  for (int i = 0; i < d; ++i) phases(i) = std::polar(1.0, es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Generator parameters reproducing the anti-diagonal permutation,
// exp(i pi/2 (J - 1)) = J. Used as deterministic warm start: for pure
// states the anti-diagonal achieves the minimum fidelity exactly.
Eigen::VectorXd antidiagonal_params(int d) {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(d * d);
  constexpr double half_pi = std::numbers::pi / 2.0;
  int idx = 0;
  for (int i = 0; i < d; ++i) t(idx++) = (i == d - 1 - i) ? 0.0 : -half_pi;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      t(idx) = (j == d - 1 - i) ? half_pi : 0.0; // real part
      idx += 2;
    }
  return t;
}

double nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                   const Eigen::VectorXd& x0, int max_iters, double f_tol,
                   double init_step, bool& converged) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (int i = 1; i <= n; ++i) xs[i](i - 1) += init_step;
  for (int i = 0; i <= n; ++i) fs[i] = f(xs[i]);

  std::vector<int> order(n + 1);
  converged = false;
  for (int iter = 0; iter < max_iters; ++iter) {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];
    if (fs[worst] - fs[best] < f_tol) {
      converged = true;
      return fs[best];
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += xs[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd refl = centroid + (centroid - xs[worst]);
    const double f_refl = f(refl);
    if (f_refl < fs[best]) {
      const Eigen::VectorXd exp_pt = centroid + 2.0 * (centroid - xs[worst]);
      const double f_exp = f(exp_pt);
      if (f_exp < f_refl) {
        xs[worst] = exp_pt;
        fs[worst] = f_exp;
      } else {
        xs[worst] = refl;
        fs[worst] = f_refl;
      }
    } else if (f_refl < fs[second]) {
      xs[worst] = refl;
      fs[worst] = f_refl;
    } else {
      const Eigen::VectorXd contr = centroid + 0.5 * (xs[worst] - centroid);
      const double f_contr = f(contr);
      if (f_contr < fs[worst]) {
        xs[worst] = contr;
        fs[worst] = f_contr;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }
  return *std::min_element(fs.begin(), fs.end());
}

} // namespace

MaxFidelityResult max_fidelity_unitary(const Matrix& u, const SchmidtDecomposition& sd) {
  if (u.rows() != sd.dim_a() || u.cols() != sd.dim_a())
    throw DimensionMismatch("operator shape does not match side A");
  require_unitary(u);
  if (sd.dim_a() > sd.dim_b())
    throw WrongOrientation("side A must be the smaller side");

  const int r = sd.rank;
  const int db = sd.dim_b();
  const Matrix x = schmidt_block(u, sd, /*conjugate=*/true);
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);

  MaxFidelityResult result;
  result.value = svd.singularValues().sum();
  Matrix v_tilde = Matrix::Identity(db, db);
  v_tilde.topLeftCorner(r, r) = svd.matrixV() * svd.matrixU().adjoint();
  result.v_opt = sd.right_basis.transpose() * v_tilde * sd.right_basis.conjugate();
  return result;
}

double inner_max_mixed(const Matrix& u, const DensityMatrix& rho, const Bipartition& split) {
  const int da = split.dim_a;
  const int db = split.dim_b;
  if (u.rows() != da || u.cols() != da)
    throw DimensionMismatch("operator shape does not match side A");
  require_unitary(u);

  const Matrix perm = bipartition_density(rho, split);
  const Matrix u_dag = u.adjoint();
  // N = Tr_A[(U^dag x 1) rho]; |Tr(V N)| over unitary V peaks at Tr|N|.
  Matrix n = Matrix::Zero(db, db);
  for (int a = 0; a < da; ++a)
    for (int ap = 0; ap < da; ++ap) {
      const Complex w = u_dag(a, ap);
      if (w == Complex(0.0, 0.0)) continue;
      n += w * perm.block(ap * db, a * db, db, db);
    }
  return trace_norm(n);
}

double min_fidelity_pure(const SchmidtDecomposition& sd) {
  const int da = sd.dim_a();
  // Coefficients beyond the numerical rank count as exact zeros, so states
  // with rank <= da/2 return exactly 0.
  auto sig = [&](int i) {
    return (i >= 0 && i < std::min<int>(sd.rank, sd.sigma.size())) ? sd.sigma(i) : 0.0;
  };
  double m = 0.0;
  for (int i = 0; i < da; ++i) m += sig(i) * sig(da - 1 - i);
  return m;
}

MinFidelityResult min_fidelity_numeric(const DensityMatrix& rho, const Bipartition& split,
                                       const OptimizerConfig& cfg) {
  const int da = split.dim_a;
  const int np = da * da;
  auto objective = [&](const Eigen::VectorXd& t) {
    return inner_max_mixed(unitary_from_params(t, da), rho, split);
  };

  MinFidelityResult out;
  out.value = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < cfg.n_restarts; ++restart) {
    Eigen::VectorXd t0(np);
    if (restart == 0) {
      t0 = antidiagonal_params(da);
    } else {
      auto eng = rng::substream(cfg.seed, static_cast<std::uint64_t>(restart));
      for (int i = 0; i < np; ++i)
        t0(i) = (2.0 * rng::uniform01(eng) - 1.0) * std::numbers::pi;
    }
    bool conv = false;
    const double v = nelder_mead(objective, t0, cfg.max_iters, cfg.f_tol, 0.35, conv);
    out.value = std::min(out.value, v);
    out.converged = out.converged || conv;
  }
  return out;
}

MeasureEstimate symmetry_of_entanglement(const DensityMatrix& rho, const Bipartition& split,
                                         long n_samples, std::uint64_t seed, int workers) {
  const HaarStream stream{seed};
  const int da = split.dim_a;
  const auto vals = sample_values(n_samples, workers, [&](long k) {
    return inner_max_mixed(haar_unitary(da, stream, static_cast<std::uint64_t>(k)), rho, split);
  });
  return estimate_from(vals, seed);
}

MeasureEstimate symmetry_of_entanglement(const SchmidtDecomposition& sd, long n_samples,
                                         std::uint64_t seed, int workers) {
  const HaarStream stream{seed};
  const int da = sd.dim_a();
  const auto vals = sample_values(n_samples, workers, [&](long k) {
    const Matrix u = haar_unitary(da, stream, static_cast<std::uint64_t>(k));
    return trace_norm(schmidt_block(u, sd, /*conjugate=*/false));
  });
  return estimate_from(vals, seed);
}

double separable_baseline(int d) {
  return element_modulus_mean(d);
}

double normalized_symmetry(double e_value, int d) {
  const double b = separable_baseline(d);
  return (e_value - b) / (1.0 - b);
}

double entanglement_entropy(const SchmidtDecomposition& sd) {
  double s = 0.0;
  for (int i = 0; i < sd.sigma.size(); ++i) {
    const double p = sd.sigma(i) * sd.sigma(i);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

double negativity_pure(const SchmidtDecomposition& sd) {
  const double t = sd.sigma.sum();
  return t * t - 1.0;
}

double entropy_normalized(const SchmidtDecomposition& sd) {
  return entanglement_entropy(sd) / std::log(static_cast<double>(sd.dim_a()));
}

double negativity_normalized(const SchmidtDecomposition& sd) {
  return negativity_pure(sd) / static_cast<double>(sd.dim_a() - 1);
}

double perturbative_M(const Matrix& u, double eps) {
  if (u.rows() < 2 || u.cols() < 2)
    throw DimensionMismatch("perturbative_M needs at least a 2x2 block");
  if (eps < 0.0 || eps > 1.0) throw DomainError("eps must lie in [0, 1]");
  const Complex u11 = u(0, 0);
  const double a = std::abs(u11);
  if (a <= 1e-8) throw SingularExpansion("expansion is singular at U_11 = 0");
  const Complex w = u(0, 1) * u(1, 0) / u11;
  return a + eps * (std::abs(u(1, 1) - w) + (std::conj(u11) * w).real() / a);
}

bool convexity_check(const std::vector<DensityMatrix>& rhos, const std::vector<double>& weights,
                     ConvexMeasure measure, const Bipartition& split, const OptimizerConfig& cfg,
                     long n_samples) {
  if (rhos.empty() || rhos.size() != weights.size())
    throw DimensionMismatch("need one weight per density matrix");
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw DomainError("weights must be nonnegative");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9) throw DomainError("weights must sum to 1");

  Matrix mixture = Matrix::Zero(rhos[0].matrix.rows(), rhos[0].matrix.cols());
  for (std::size_t i = 0; i < rhos.size(); ++i) mixture += weights[i] * rhos[i].matrix;
  const DensityMatrix mix{rhos[0].dims, mixture};

  if (measure == ConvexMeasure::MinFidelity) {
    const double lhs = min_fidelity_numeric(mix, split, cfg).value;
    double rhs = 0.0;
    for (std::size_t i = 0; i < rhos.size(); ++i)
      rhs += weights[i] * min_fidelity_numeric(rhos[i], split, cfg).value;
    return lhs <= rhs + 1e-5;
  }

  const MeasureEstimate lhs = symmetry_of_entanglement(mix, split, n_samples, cfg.seed);
  double rhs = 0.0;
  double var = lhs.std_error * lhs.std_error;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    const MeasureEstimate e = symmetry_of_entanglement(rhos[i], split, n_samples, cfg.seed);
    rhs += weights[i] * e.value;
    var += weights[i] * weights[i] * e.std_error * e.std_error;
  }
  return lhs.value <= rhs + 3.0 * std::sqrt(var);
}

} // namespace entsym
