#include <doctest.h>

#include <cmath>
#include <numbers>

#include "entsym/io.hpp"
#include "subprocess.hpp"
#include "test_util.hpp"

using namespace entsym;
using testutil::run_cli;

namespace {

const std::filesystem::path& work_dir() {
  static const auto dir = testutil::fresh_dir("cli_tests");
  return dir;
}

std::string write_state(const PureState& st, const std::string& name) {
  const auto path = work_dir() / name;
  io::save_state(path.string(), st);
  return name;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

// Value of `key: <num>` in the CLI's report output.
double report_value(const std::string& out, const std::string& key) {
  const auto pos = out.find(key + ": ");
  REQUIRE(pos != std::string::npos);
  return std::stod(out.substr(pos + key.size() + 2));
}

std::vector<std::vector<std::string>> parse_csv(const std::string& body) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream ss(body);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

} // namespace

TEST_CASE("cli schmidt reports coefficients and flags") {
  const std::string bell = write_state(max_entangled(2), "bell.json");
  const auto res = run_cli("schmidt " + bell, work_dir());
  CHECK(res.code == 0);
  CHECK(contains(res.out, "0.70710678118654"));
  CHECK(contains(res.out, "rank: 2"));
  CHECK(contains(res.out, "fully_entangled: true"));
  CHECK(contains(res.out, "maximally_entangled: true"));

  Vector prod(4);
  prod << 1, 0, 0, 0;
  const std::string sep = write_state(make_pure_state(prod, {2, 2}), "sep.json");
  const auto res2 = run_cli("schmidt " + sep, work_dir());
  CHECK(res2.code == 0);
  CHECK(contains(res2.out, "rank: 1"));
  CHECK(contains(res2.out, "fully_entangled: false"));
  CHECK(contains(res2.out, "maximally_entangled: false"));

  // GHZ against a 4-dimensional complement.
  Vector ghz = Vector::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::numbers::sqrt2;
  const std::string g = write_state(make_pure_state(ghz, {2, 2, 2}), "ghz.json");
  const auto res3 = run_cli("schmidt " + g + " --partition=1", work_dir());
  CHECK(res3.code == 0);
  CHECK(contains(res3.out, "rank: 2"));
  CHECK(contains(res3.out, "fully_entangled: true"));
}

TEST_CASE("cli schmidt error paths") {
  const auto res = run_cli("schmidt no_such_file.json", work_dir());
  CHECK(res.code == 6);

  std::ofstream(work_dir() / "garbage.json") << "{";
  const auto res2 = run_cli("schmidt garbage.json", work_dir());
  CHECK(res2.code == 2);

  const std::string bell = write_state(max_entangled(2), "bell.json");
  const auto res3 = run_cli("schmidt " + bell + " --partition=7", work_dir());
  CHECK(res3.code == 3);
  CHECK(!res3.err.empty());
}

TEST_CASE("cli related reproduces the transpose rule") {
  const std::string bell = write_state(max_entangled(2), "bell.json");
  io::save_operator((work_dir() / "x.json").string(), testutil::pauli_x());

  const auto res = run_cli("related " + bell + " x.json --out v.json --verify", work_dir());
  CHECK(res.code == 0);
  const Matrix v = io::load_operator((work_dir() / "v.json").string());
  CHECK(testutil::max_abs_diff(v, testutil::pauli_x()) < 1e-12);
  CHECK(report_value(res.out, "residual") < 1e-12);

  // Skewed diagonal state: V = Sigma X^T Sigma^{-1}.
  Vector amps = Vector::Zero(4);
  amps(0) = std::sqrt(0.9);
  amps(3) = std::sqrt(0.1);
  const std::string skew = write_state(make_pure_state(amps, {2, 2}), "skew.json");
  const auto res2 = run_cli("related " + skew + " x.json --out v2.json", work_dir());
  CHECK(res2.code == 0);
  const Matrix v2 = io::load_operator((work_dir() / "v2.json").string());
  Matrix expected(2, 2);
  expected << 0, 3, 1.0 / 3.0, 0;
  CHECK(testutil::max_abs_diff(v2, expected) < 1e-12);
}

TEST_CASE("cli related rejects rank-deficient and misoriented states") {
  io::save_operator((work_dir() / "x.json").string(), testutil::pauli_x());
  io::save_operator((work_dir() / "x4.json").string(),
                    testutil::kron(testutil::pauli_x(), Matrix::Identity(2, 2)));

  const std::string thin = write_state(fig2_state(0.1, 4), "thin.json");
  const auto res = run_cli("related " + thin + " x4.json", work_dir());
  CHECK(res.code == 4);
  CHECK(contains(res.err, "not fully entangled"));
  CHECK(!std::filesystem::exists(work_dir() / "v_thin.json"));

  const std::string wide = write_state(random_pure({3, 2}, 10), "wide.json");
  io::save_operator((work_dir() / "u3.json").string(), generalized_pauli(3, 1, 0));
  const auto res2 = run_cli("related " + wide + " u3.json", work_dir());
  CHECK(res2.code == 5);
}

TEST_CASE("cli channel analysis") {
  const std::string bell = write_state(max_entangled(2), "bell.json");
  io::save_kraus((work_dir() / "ad.json").string(),
                 make_kraus(testutil::amplitude_damping(0.36)));
  const auto res = run_cli("channel " + bell + " ad.json", work_dir());
  CHECK(res.code == 0);
  // The transpose swaps the TP and unitality conditions, so the related
  // map of a TP non-unital channel is unital but not TP.
  CHECK(contains(res.out, "cp: true"));
  CHECK(contains(res.out, "tp: false"));
  CHECK(contains(res.out, "unital: true"));

  const double s = 1.0 / std::numbers::sqrt2;
  io::save_kraus((work_dir() / "deph.json").string(),
                 make_kraus({s * Matrix::Identity(2, 2), s * testutil::pauli_z()}));
  const auto res2 = run_cli("channel " + bell + " deph.json --json", work_dir());
  CHECK(res2.code == 0);
  CHECK(contains(res2.out, "\"related_is_tp\": true"));
  CHECK(contains(res2.out, "\"related_is_cp\": true"));

  const std::string thin = write_state(fig2_state(0.1, 4), "thin.json");
  io::save_kraus((work_dir() / "ad4.json").string(),
                 make_kraus({testutil::kron(testutil::amplitude_damping(0.36)[0],
                                            Matrix::Identity(2, 2)),
                             testutil::kron(testutil::amplitude_damping(0.36)[1],
                                            Matrix::Identity(2, 2))}));
  const auto res3 = run_cli("channel " + thin + " ad4.json", work_dir());
  CHECK(res3.code == 4);
}

TEST_CASE("cli measure on pure and density inputs") {
  const std::string bell = write_state(max_entangled(2), "bell.json");
  const auto res = run_cli("measure " + bell + " --samples 2000", work_dir());
  CHECK(res.code == 0);
  CHECK(report_value(res.out, "m") == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(report_value(res.out, "es") == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(report_value(res.out, "entropy") == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  CHECK(report_value(res.out, "negativity") == doctest::Approx(1.0).epsilon(1e-10));

  Vector sep = Vector::Zero(4);
  sep(0) = 1.0;
  const std::string s = write_state(make_pure_state(sep, {2, 2}), "sep.json");
  const auto res2 = run_cli("measure " + s + " --measure es --samples 20000", work_dir());
  CHECK(res2.code == 0);
  CHECK(report_value(res2.out, "es") == doctest::Approx(2.0 / 3.0).epsilon(0.02));

  io::save_density((work_dir() / "mixed.json").string(),
                   make_density(Matrix::Identity(4, 4) / 4.0, {2, 2}));
  const auto res3 = run_cli(
      "measure mixed.json --measure m --samples 1000 --restarts 6 --max-iters 200",
      work_dir());
  CHECK(res3.code == 0);

  const auto res4 = run_cli("measure mixed.json --measure entropy", work_dir());
  CHECK(res4.code == 2);

  const auto res5 = run_cli("measure " + s + " --measure bogus", work_dir());
  CHECK(res5.code == 2);
}

TEST_CASE("cli fig1 endpoints and format") {
  const auto res = run_cli("fig1 --points 5 --samples 400 --seed 3 --out f1.csv", work_dir());
  CHECK(res.code == 0);
  const std::string body = testutil::slurp_file((work_dir() / "f1.csv").string());
  CHECK(contains(body, "x,es_norm,es_stderr,min_fidelity,negativity_norm,entropy_norm"));
  CHECK(contains(body, "# entsym fig1"));
  CHECK(contains(body, "seed=3"));

  const auto rows = parse_csv(body);
  REQUIRE(rows.size() == 6); // header + 5 points
  // x = 0: closed-form measures exactly 0.
  CHECK(std::stod(rows[1][3]) == doctest::Approx(0.0));
  CHECK(std::stod(rows[1][4]) == doctest::Approx(0.0));
  CHECK(std::stod(rows[1][5]) == doctest::Approx(0.0));
  // x = 1: everything 1, E_S exactly (zero variance).
  CHECK(std::stod(rows[5][1]) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::stod(rows[5][3]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::stod(rows[5][4]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::stod(rows[5][5]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cli fig2 caption properties at small scale") {
  const auto res =
      run_cli("fig2 --dims 2,4 --points 5 --samples 3000 --seed 9 --out f2.csv", work_dir());
  CHECK(res.code == 0);
  const auto rows = parse_csv(testutil::slurp_file((work_dir() / "f2.csv").string()));
  REQUIRE(rows.size() == 11); // header + 2 dims x 5 points

  auto row = [&](int d, double eps) -> const std::vector<std::string>& {
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (std::stoi(rows[i][0]) == d && std::stod(rows[i][1]) == doctest::Approx(eps))
        return rows[i];
    REQUIRE(false);
    return rows[0];
  };
  const double norm0 = std::stod(row(2, 0.0)[3]);
  const double normh = std::stod(row(2, 0.5)[3]);
  const double stderr0 = std::stod(row(2, 0.0)[4]) / (1.0 - 2.0 / 3.0);
  CHECK(std::abs(norm0) < 3.0 * stderr0);
  CHECK(normh == doctest::Approx(1.0).epsilon(1e-10));
  // Exact symmetry by construction: same samples, mirrored coefficients.
  CHECK(std::stod(row(2, 0.25)[3]) == doctest::Approx(std::stod(row(2, 0.75)[3])).epsilon(1e-9));
  // Higher dimension, lower normalized measure.
  CHECK(std::stod(row(2, 0.5)[3]) > std::stod(row(4, 0.5)[3]));
}

TEST_CASE("cli csv output is byte-identical across worker counts") {
  const std::string args = "fig2 --dims 2 --points 3 --samples 2000 --seed 11";
  CHECK(run_cli(args + " --workers 1 --out w1.csv", work_dir()).code == 0);
  CHECK(run_cli(args + " --workers 2 --out w2.csv", work_dir()).code == 0);
  CHECK(run_cli(args + " --workers 8 --out w8.csv", work_dir()).code == 0);
  const std::string w1 = testutil::slurp_file((work_dir() / "w1.csv").string());
  CHECK(w1 == testutil::slurp_file((work_dir() / "w2.csv").string()));
  CHECK(w1 == testutil::slurp_file((work_dir() / "w8.csv").string()));
  CHECK(!w1.empty());

  // Same invocation twice: identical bytes.
  CHECK(run_cli(args + " --workers 2 --out w2b.csv", work_dir()).code == 0);
  CHECK(testutil::slurp_file((work_dir() / "w2.csv").string()) ==
        testutil::slurp_file((work_dir() / "w2b.csv").string()));
}

TEST_CASE("cli haarcheck") {
  const auto res = run_cli("haarcheck --d 2 --samples 20000 --seed 5", work_dir());
  CHECK(res.code == 0);
  CHECK(contains(res.out, "analytic_mean: 0.666666666666666"));
  CHECK(contains(res.out, ": pass"));
  CHECK(std::abs(report_value(res.out, "z_score")) < 3.0);

  const auto res2 = run_cli("haarcheck --d 2 --samples 100 --seed 5", work_dir());
  CHECK(res2.code == 0);
  CHECK(contains(res2.err, "below the recommended minimum"));
}
