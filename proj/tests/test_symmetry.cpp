#include <doctest.h>

#include <cmath>
#include <numbers>

#include "entsym/haar.hpp"
#include "entsym/symmetry.hpp"
#include "test_util.hpp"

using namespace entsym;
using testutil::max_abs_diff;

namespace {

SchmidtDecomposition decompose(const PureState& st) {
  std::vector<int> side_a = {0};
  return schmidt_decompose(st, make_bipartition(st.dims, side_a));
}

PureState bell() { return max_entangled(2); }

PureState two_qubit_diag(double p0) {
  Vector amps = Vector::Zero(4);
  amps(0) = std::sqrt(p0);
  amps(3) = std::sqrt(1.0 - p0);
  return make_pure_state(amps, {2, 2});
}

} // namespace

TEST_CASE("entanglement predicates") {
  CHECK(is_fully_entangled(decompose(bell())));
  CHECK(small_side_is_a(decompose(bell())));

  Vector prod(4);
  prod << 1, 1, 0, 0;
  const PureState p = make_pure_state(prod / std::numbers::sqrt2, {2, 2});
  CHECK_FALSE(is_fully_entangled(decompose(p)));

  CHECK_FALSE(is_fully_entangled(decompose(fig2_state(0.1, 4))));

  CHECK(is_maximally_entangled(decompose(max_entangled(3))));
  CHECK_FALSE(is_maximally_entangled(decompose(fig1_state(0.5))));
  CHECK(is_maximally_entangled(decompose(fig1_state(1.0))));
}

TEST_CASE("related operator on the Bell state is the transpose") {
  const SchmidtDecomposition sd = decompose(bell());
  const HaarStream stream{5};
  for (int k = 0; k < 25; ++k) {
    const Matrix u = haar_unitary(2, stream, k);
    CHECK(max_abs_diff(related_operator(u, sd), u.transpose()) < 1e-12);
  }
}

TEST_CASE("related operator worked example and errors") {
  const SchmidtDecomposition sd = decompose(two_qubit_diag(0.9));
  const Matrix v = related_operator(testutil::pauli_x(), sd);
  Matrix expected(2, 2);
  expected << 0, 3, 1.0 / 3.0, 0;
  CHECK(max_abs_diff(v, expected) < 1e-12);

  CHECK_THROWS_AS(related_operator(testutil::pauli_x(), decompose(fig2_state(0.1, 4))),
                  NotFullyEntangled);

  // Side A larger than side B: construction refused.
  const PureState wide = random_pure({3, 2}, 4);
  const SchmidtDecomposition sdw = schmidt_decompose(wide, make_bipartition({3, 2}, {0}));
  const Matrix u3 = haar_unitary(3, HaarStream{9}, 0);
  CHECK_THROWS_AS(related_operator(u3, sdw), WrongOrientation);

  CHECK_THROWS_AS(related_operator(u3, sd), DimensionMismatch);
}

TEST_CASE("verify_related examples") {
  const PureState b = bell();
  const Bipartition bp = make_bipartition({2, 2}, {0});
  CHECK(verify_related(testutil::pauli_x(), testutil::pauli_x(), b, bp).state_residual <
        1e-14);
  // Y^T = -Y, so the two actions are anti-parallel.
  CHECK(verify_related(testutil::pauli_y(), testutil::pauli_y(), b, bp).state_residual ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("related operators reproduce local actions across dimensions") {
  int checked = 0;
  for (std::uint64_t seed = 100; checked < 200; ++seed) {
    const int da = 2 + static_cast<int>(seed % 3);
    const int db = da + static_cast<int>((seed / 3) % (6 - da));
    const PureState st = random_pure({da, db}, seed);
    const Bipartition bp = make_bipartition({da, db}, {0});
    const SchmidtDecomposition sd = schmidt_decompose(st, bp);
    if (!is_fully_entangled(sd)) continue;
    const Matrix u = haar_unitary(da, HaarStream{seed}, 1);
    const Matrix v = related_operator(u, sd);
    const VerifyResult res = verify_related(u, v, st, bp);
    CHECK(res.state_residual < 1e-9);
    CHECK(res.matrix_residual < 1e-9);
    ++checked;
  }
}

TEST_CASE("unitary related operators certify maximal entanglement") {
  // Maximally entangled: every generalized Pauli maps to a unitary V.
  for (int d : {2, 3}) {
    const SchmidtDecomposition sd = decompose(max_entangled(d));
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const Matrix v = related_operator(generalized_pauli(d, a, b), sd);
        CHECK(max_abs_diff(v.adjoint() * v, Matrix::Identity(d, d)) < 1e-9);
      }
  }

  // Full-rank but not maximally entangled: some generator must fail.
  for (int d : {2, 3}) {
    auto eng = rng::substream(21, d);
    Eigen::VectorXd sigma(d);
    for (int i = 0; i < d; ++i)
      sigma(i) = 1.0 / std::sqrt(static_cast<double>(d)) + 0.08 * (i % 2 ? 1.0 : -1.0);
    sigma /= sigma.norm();
    const Matrix y = haar_unitary(d, HaarStream{55}, d);
    const Matrix z = haar_unitary(d, HaarStream{56}, d);
    const PureState st = testutil::state_with_schmidt(sigma, d, d, y, z);
    const SchmidtDecomposition sd = decompose(st);
    REQUIRE(is_fully_entangled(sd));
    double worst = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const Matrix v = related_operator(generalized_pauli(d, a, b), sd);
        worst = std::max(worst,
                         max_abs_diff(v.adjoint() * v, Matrix::Identity(d, d)));
      }
    CHECK(worst > 1e-6);
  }
}

TEST_CASE("kraus map constructor validates shapes") {
  CHECK_THROWS_AS(make_kraus({}), DimensionMismatch);
  CHECK_THROWS_AS(make_kraus({Matrix::Identity(2, 2), Matrix::Identity(3, 3)}),
                  DimensionMismatch);
  const KrausMap m = make_kraus({Matrix::Identity(2, 2)});
  CHECK(m.in_dim == 2);
  CHECK(m.out_dim == 2);
}

TEST_CASE("related kraus maps") {
  const SchmidtDecomposition bell_sd = decompose(bell());
  const KrausMap ident = make_kraus({Matrix::Identity(2, 2)});
  CHECK(max_abs_diff(related_kraus(ident, bell_sd).ops[0], Matrix::Identity(2, 2)) < 1e-12);

  const double s = 1.0 / std::numbers::sqrt2;
  const KrausMap dephasing = make_kraus({s * Matrix::Identity(2, 2), s * testutil::pauli_z()});
  const KrausMap rel = related_kraus(dephasing, bell_sd);
  CHECK(max_abs_diff(rel.ops[0], dephasing.ops[0]) < 1e-12);
  CHECK(max_abs_diff(rel.ops[1], dephasing.ops[1]) < 1e-12);

  // Amplitude damping on a skewed state: J = Sigma K^T Sigma^{-1} entrywise.
  const SchmidtDecomposition sd = decompose(two_qubit_diag(0.9));
  const KrausMap ad = make_kraus(testutil::amplitude_damping(0.36));
  const KrausMap rel_ad = related_kraus(ad, sd);
  Matrix sig(2, 2), sig_inv(2, 2);
  sig << std::sqrt(0.9), 0, 0, std::sqrt(0.1);
  sig_inv << 1.0 / std::sqrt(0.9), 0, 0, 1.0 / std::sqrt(0.1);
  for (std::size_t l = 0; l < ad.ops.size(); ++l) {
    const Matrix expected = sig * ad.ops[l].transpose() * sig_inv;
    CHECK(max_abs_diff(rel_ad.ops[l], expected) < 1e-12);
  }

  CHECK_THROWS_AS(related_kraus(ad, decompose(fig2_state(0.2, 4))), NotFullyEntangled);
}

TEST_CASE("choi matrix patterns") {
  const KrausMap ident = make_kraus({Matrix::Identity(2, 2)});
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = expected(0, 3) = expected(3, 0) = expected(3, 3) = 1.0;
  CHECK(max_abs_diff(choi_matrix(ident), expected) < 1e-14);
  CHECK(std::abs(choi_matrix(ident).trace().real() - 2.0) < 1e-14);

  // Fully depolarizing channel: four normalized Paulis.
  const KrausMap depol = make_kraus({0.5 * Matrix::Identity(2, 2), 0.5 * testutil::pauli_x(),
                                     0.5 * testutil::pauli_y(), 0.5 * testutil::pauli_z()});
  CHECK(max_abs_diff(choi_matrix(depol), 0.5 * Matrix::Identity(4, 4)) < 1e-14);

  const KrausMap just_z = make_kraus({testutil::pauli_z()});
  Matrix zc = Matrix::Zero(4, 4);
  zc(0, 0) = zc(3, 3) = 1.0;
  zc(0, 3) = zc(3, 0) = -1.0;
  CHECK(max_abs_diff(choi_matrix(just_z), zc) < 1e-14);

  KrausMap rect;
  rect.in_dim = 2;
  rect.out_dim = 3;
  rect.ops = {Matrix::Zero(3, 2)};
  CHECK_THROWS_AS(choi_matrix(rect), NonSquare);
}

TEST_CASE("cp tp unital predicates") {
  const KrausMap ad = make_kraus(testutil::amplitude_damping(0.36));
  CHECK(is_cp(ad));
  CHECK(is_tp(ad));
  CHECK_FALSE(is_unital(ad));
  Matrix kk = Matrix::Zero(2, 2);
  for (const auto& k : ad.ops) kk += k * k.adjoint();
  Matrix expected(2, 2);
  expected << 1.36, 0, 0, 0.64;
  CHECK(max_abs_diff(kk, expected) < 1e-12);

  const KrausMap ident = make_kraus({Matrix::Identity(2, 2)});
  CHECK(is_cp(ident));
  CHECK(is_tp(ident));
  CHECK(is_unital(ident));

  const KrausMap rel = related_kraus(ad, decompose(bell()));
  CHECK(is_cp(rel));
  CHECK_FALSE(is_tp(rel));
}

TEST_CASE("analyze_related_map") {
  // Unital CPTP map on a maximally entangled state: related map stays TP.
  auto eng = rng::substream(6, 0);
  const double s = 1.0 / std::numbers::sqrt2;
  const Matrix w1 = haar_unitary(2, HaarStream{61}, 0);
  const Matrix w2 = haar_unitary(2, HaarStream{62}, 0);
  const KrausMap mixture = make_kraus({s * w1, s * w2});
  REQUIRE(is_unital(mixture));
  REQUIRE(is_tp(mixture));

  const SchmidtDecomposition bell_sd = decompose(bell());
  const SymmetryReport unital_max = analyze_related_map(mixture, bell_sd);
  CHECK(unital_max.residual < 1e-10);
  CHECK(unital_max.related_is_cp);
  CHECK(unital_max.related_is_tp);

  const KrausMap ad = make_kraus(testutil::amplitude_damping(0.36));
  const SymmetryReport ad_max = analyze_related_map(ad, bell_sd);
  CHECK(ad_max.residual < 1e-10);
  CHECK(ad_max.related_is_cp);
  CHECK_FALSE(ad_max.related_is_tp);
  CHECK(ad_max.choi_min_eigenvalue >= -1e-9);

  // TP of the related map needs maximal entanglement AND unitality.
  const SchmidtDecomposition skew_sd = decompose(two_qubit_diag(0.9));
  CHECK_FALSE(analyze_related_map(mixture, skew_sd).related_is_tp);
  CHECK_FALSE(analyze_related_map(ad, skew_sd).related_is_tp);

  // Random CPTP maps on full-rank states stay completely positive.
  for (int trial = 0; trial < 50; ++trial) {
    const KrausMap map = testutil::random_cptp(2, 1 + trial % 4, eng);
    const SymmetryReport rep = analyze_related_map(map, decompose(fig2_state(0.3, 2)));
    CHECK(rep.related_is_cp);
    CHECK(rep.choi_min_eigenvalue >= -1e-9);
    CHECK(rep.residual < 1e-10);
  }
}

TEST_CASE("maximally mixed state is invariant under local unitaries") {
  const Matrix rho = Matrix::Identity(4, 4) / 4.0;
  for (int k = 0; k < 10; ++k) {
    const Matrix u = haar_unitary(2, HaarStream{71}, k);
    const Matrix ua = testutil::kron(u, Matrix::Identity(2, 2));
    CHECK(max_abs_diff(ua * rho * ua.adjoint(), rho) < 1e-14);
  }
}

TEST_CASE("generalized pauli algebra") {
  CHECK(max_abs_diff(generalized_pauli(2, 1, 0), testutil::pauli_x()) < 1e-15);
  CHECK(max_abs_diff(generalized_pauli(2, 0, 1), testutil::pauli_z()) < 1e-15);
  for (int d : {2, 3, 4}) {
    const Matrix x = generalized_pauli(d, 1, 0);
    const Matrix z = generalized_pauli(d, 0, 1);
    CHECK(max_abs_diff(x.adjoint() * x, Matrix::Identity(d, d)) < 1e-14);
    CHECK(max_abs_diff(z.adjoint() * z, Matrix::Identity(d, d)) < 1e-14);
    // Weyl relation Z X = w X Z.
    const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / d);
    CHECK(max_abs_diff(z * x, w * (x * z)) < 1e-14);
  }
}
