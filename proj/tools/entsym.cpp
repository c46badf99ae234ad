#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entsym/haar.hpp"
#include "entsym/io.hpp"
#include "entsym/measures.hpp"
#include "entsym/state.hpp"
#include "entsym/symmetry.hpp"

using namespace entsym;

namespace {

// Fixed exit-code map, part of the interface:
// 0 ok, 2 parse, 3 partition, 4 not fully entangled, 5 orientation, 6 io.
int exit_code_for(const Error& e) {
  if (dynamic_cast<const InvalidBipartition*>(&e)) return 3;
  if (dynamic_cast<const InvalidSubsystem*>(&e)) return 3;
  if (dynamic_cast<const NotFullyEntangled*>(&e)) return 4;
  if (dynamic_cast<const WrongOrientation*>(&e)) return 5;
  if (dynamic_cast<const IoError*>(&e)) return 6;
  return 2;
}

std::string fmt(double v) { return io::format_double(v); }

std::string fmt_complex(const Complex& v) {
  std::string s = fmt(v.real());
  s += (v.imag() < 0.0 || std::signbit(v.imag())) ? "" : "+";
  s += fmt(v.imag());
  s += "i";
  return s;
}

void print_matrix(std::ostream& os, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      os << (c ? "  " : "") << fmt_complex(m(r, c));
    os << "\n";
  }
}

std::vector<int> parse_partition(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw InvalidBipartition("cannot parse partition index: " + tok);
    }
  }
  if (out.empty()) throw InvalidBipartition("empty partition spec");
  return out;
}

PureState load_pure(const std::string& path) {
  auto file = io::load_state_file(path);
  if (auto* p = std::get_if<PureState>(&file)) return *p;
  throw ParseError(path + ": this command requires a pure state file");
}

// Writes through a temporary so a failed run never leaves partial output.
void atomic_write(const std::string& path, const std::string& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write " + tmp);
    out << body;
    if (!out) throw IoError("write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp + " to " + path);
}

std::string csv_header(const std::string& command, std::uint64_t seed, long samples) {
  std::ostringstream os;
  os << "# entsym " << command << " " << ENTSYM_VERSION << "\n";
  os << "# seed=" << seed << " samples=" << samples << "\n";
  return os.str();
}

struct CommonOpts {
  std::string partition = "0";
  std::uint64_t seed = 1;
  long samples = 0;
  int workers = 1;
  double rank_tol = 1e-10;
};

int run_schmidt(const std::string& state_file, const CommonOpts& opt) {
  const PureState st = load_pure(state_file);
  const Bipartition bp = make_bipartition(st.dims, parse_partition(opt.partition));
  const SchmidtDecomposition sd = schmidt_decompose(st, bp, opt.rank_tol);

  std::cout << "sigma:";
  for (int i = 0; i < sd.sigma.size(); ++i)
    std::cout << (i ? ", " : " ") << fmt(sd.sigma(i));
  std::cout << "\nrank: " << sd.rank << "\n";
  std::cout << "fully_entangled: " << (is_fully_entangled(sd) ? "true" : "false") << "\n";
  std::cout << "maximally_entangled: " << (is_maximally_entangled(sd) ? "true" : "false")
            << "\n";
  return 0;
}

int run_related(const std::string& state_file, const std::string& op_file,
                const CommonOpts& opt, const std::string& out_path, bool verify) {
  const PureState st = load_pure(state_file);
  const Matrix u = io::load_operator(op_file);
  const Bipartition bp = make_bipartition(st.dims, parse_partition(opt.partition));
  const SchmidtDecomposition sd = schmidt_decompose(st, bp, opt.rank_tol);
  const Matrix v = related_operator(u, sd);

  print_matrix(std::cout, v);
  if (!out_path.empty()) {
    std::ostringstream body;
    body << "{\n  \"rows\": " << v.rows() << ",\n  \"cols\": " << v.cols()
         << ",\n  \"matrix\": [\n";
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      body << "    [";
      for (Eigen::Index c = 0; c < v.cols(); ++c) {
        if (c) body << ", ";
        body << '[' << fmt(v(r, c).real()) << ", " << fmt(v(r, c).imag()) << ']';
      }
      body << ']' << (r + 1 < v.rows() ? ",\n" : "\n");
    }
    body << "  ]\n}\n";
    atomic_write(out_path, body.str());
  }
  if (verify) {
    const VerifyResult res = verify_related(u, v, st, bp);
    std::cout << "residual: " << fmt(res.state_residual) << "\n";
    std::cout << "matrix_residual: " << fmt(res.matrix_residual) << "\n";
  }
  return 0;
}

int run_channel(const std::string& state_file, const std::string& kraus_file,
                const CommonOpts& opt, bool as_json) {
  const PureState st = load_pure(state_file);
  const KrausMap map = io::load_kraus(kraus_file);
  const Bipartition bp = make_bipartition(st.dims, parse_partition(opt.partition));
  const SchmidtDecomposition sd = schmidt_decompose(st, bp, opt.rank_tol);
  const KrausMap rel = related_kraus(map, sd);
  const SymmetryReport report = analyze_related_map(map, sd);

  if (as_json) {
    std::cout << "{\n  \"residual\": " << fmt(report.residual)
              << ",\n  \"related_is_cp\": " << (report.related_is_cp ? "true" : "false")
              << ",\n  \"related_is_tp\": " << (report.related_is_tp ? "true" : "false")
              << ",\n  \"related_is_unital\": " << (report.related_is_unital ? "true" : "false")
              << ",\n  \"choi_min_eigenvalue\": " << fmt(report.choi_min_eigenvalue)
              << "\n}\n";
    return 0;
  }
  for (std::size_t l = 0; l < rel.ops.size(); ++l) {
    std::cout << "related_kraus[" << l << "]:\n";
    print_matrix(std::cout, rel.ops[l]);
  }
  std::cout << "residual: " << fmt(report.residual) << "\n";
  std::cout << "cp: " << (report.related_is_cp ? "true" : "false") << "\n";
  std::cout << "tp: " << (report.related_is_tp ? "true" : "false") << "\n";
  std::cout << "unital: " << (report.related_is_unital ? "true" : "false") << "\n";
  std::cout << "choi_min_eigenvalue: " << fmt(report.choi_min_eigenvalue) << "\n";
  return 0;
}

int run_measure(const std::string& state_file, const CommonOpts& opt,
                const std::string& which, int restarts, int max_iters) {
  const auto file = io::load_state_file(state_file);
  const bool want_all = which == "all";
  const bool is_pure = std::holds_alternative<PureState>(file);

  OptimizerConfig ocfg;
  ocfg.n_restarts = restarts;
  ocfg.max_iters = max_iters;
  ocfg.seed = opt.seed;

  std::vector<int> part = parse_partition(opt.partition);

  if (is_pure) {
    const PureState st = std::get<PureState>(file);
    const Bipartition bp = make_bipartition(st.dims, part);
    const SchmidtDecomposition sd = schmidt_decompose(st, bp, opt.rank_tol);
    const int da = std::min(sd.dim_a(), sd.dim_b());
    if (want_all || which == "m")
      std::cout << "m: " << fmt(min_fidelity_pure(sd)) << "\n";
    if (want_all || which == "es") {
      const MeasureEstimate es =
          symmetry_of_entanglement(sd, opt.samples, opt.seed, opt.workers);
      std::cout << "es: " << fmt(es.value) << " (std_error " << fmt(es.std_error)
                << ", normalized " << fmt(normalized_symmetry(es.value, da)) << ")\n";
    }
    if (want_all || which == "entropy")
      std::cout << "entropy: " << fmt(entanglement_entropy(sd)) << " (normalized "
                << fmt(entropy_normalized(sd)) << ")\n";
    if (want_all || which == "negativity")
      std::cout << "negativity: " << fmt(negativity_pure(sd)) << " (normalized "
                << fmt(negativity_normalized(sd)) << ")\n";
    return 0;
  }

  const DensityMatrix rho = std::get<DensityMatrix>(file);
  const Bipartition bp = make_bipartition(rho.dims, part);
  if (which == "entropy" || which == "negativity")
    throw ParseError("entropy and negativity are defined for pure state files");
  if (want_all || which == "m") {
    const MinFidelityResult m = min_fidelity_numeric(rho, bp, ocfg);
    if (!m.converged)
      std::cerr << "warning: optimizer did not converge; value is best-so-far\n";
    std::cout << "m: " << fmt(m.value) << "\n";
  }
  if (want_all || which == "es") {
    const MeasureEstimate es =
        symmetry_of_entanglement(rho, bp, opt.samples, opt.seed, opt.workers);
    std::cout << "es: " << fmt(es.value) << " (std_error " << fmt(es.std_error)
              << ", normalized " << fmt(normalized_symmetry(es.value, bp.dim_a)) << ")\n";
  }
  return 0;
}

int run_fig1(const CommonOpts& opt, int points, const std::string& out_path) {
  if (points < 2) throw DomainError("fig1 needs at least 2 grid points");
  std::ostringstream csv;
  csv << csv_header("fig1", opt.seed, opt.samples);
  csv << "x,es_norm,es_stderr,min_fidelity,negativity_norm,entropy_norm\n";

  const Bipartition bp = make_bipartition({4, 4}, {0});
  const double baseline = separable_baseline(4);
  for (int i = 0; i < points; ++i) {
    const double x = static_cast<double>(i) / (points - 1);
    const PureState st = fig1_state(x);
    const SchmidtDecomposition sd = schmidt_decompose(st, bp, opt.rank_tol);
    // Same seed at every grid point: common random numbers keep the
    // sampled curve as monotone as the true one.
    const MeasureEstimate es =
        symmetry_of_entanglement(sd, opt.samples, opt.seed, opt.workers);
    csv << fmt(x) << ',' << fmt(normalized_symmetry(es.value, 4)) << ','
        << fmt(es.std_error / (1.0 - baseline)) << ',' << fmt(min_fidelity_pure(sd))
        << ',' << fmt(negativity_normalized(sd)) << ',' << fmt(entropy_normalized(sd))
        << "\n";
  }
  atomic_write(out_path, csv.str());
  return 0;
}

int run_fig2(const CommonOpts& opt, const std::string& dims_spec, int points,
             const std::string& out_path) {
  if (points < 2) throw DomainError("fig2 needs at least 2 grid points");
  const std::vector<int> dims = parse_partition(dims_spec);
  for (int d : dims)
    if (d < 2) throw DomainError("fig2 dims must be >= 2");

  std::ostringstream csv;
  csv << csv_header("fig2", opt.seed, opt.samples);
  csv << "d,eps,es,es_norm,es_stderr\n";
  for (int d : dims) {
    const Bipartition bp = make_bipartition({d, d}, {0});
    for (int i = 0; i < points; ++i) {
      const double eps = static_cast<double>(i) / (points - 1);
      const SchmidtDecomposition sd = schmidt_decompose(fig2_state(eps, d), bp, opt.rank_tol);
      const MeasureEstimate es =
          symmetry_of_entanglement(sd, opt.samples, opt.seed, opt.workers);
      csv << d << ',' << fmt(eps) << ',' << fmt(es.value) << ','
          << fmt(normalized_symmetry(es.value, d)) << ',' << fmt(es.std_error) << "\n";
    }
  }
  atomic_write(out_path, csv.str());
  return 0;
}

int run_haarcheck(const CommonOpts& opt, int d) {
  if (opt.samples < 10000)
    std::cerr << "warning: sample count " << opt.samples
              << " is below the recommended minimum of 10000\n";
  const HaarStream stream{opt.seed};
  double sum = 0.0, sumsq = 0.0;
  for (long k = 0; k < opt.samples; ++k) {
    const double r = std::abs(haar_unitary(d, stream, static_cast<std::uint64_t>(k))(0, 0));
    sum += r;
    sumsq += r * r;
  }
  const double n = static_cast<double>(opt.samples);
  const double mean = sum / n;
  const double var = (sumsq - n * mean * mean) / (n - 1.0);
  const double stderr_mean = std::sqrt(var / n);
  const double analytic = element_modulus_mean(d);
  const DensityCheck chi = element_density_check(d, static_cast<int>(opt.samples), stream);

  std::cout << "empirical_mean: " << fmt(mean) << "\n";
  std::cout << "analytic_mean: " << fmt(analytic) << "\n";
  std::cout << "z_score: " << fmt((mean - analytic) / stderr_mean) << "\n";
  std::cout << "chi_square: " << fmt(chi.statistic) << " (threshold "
            << fmt(chi.threshold) << "): " << (chi.pass ? "pass" : "fail") << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operational symmetries of entangled states: related operators, "
               "channel analysis, and entanglement quantifiers"};
  app.require_subcommand(1);

  CommonOpts opt;
  std::string state_file, op_file, kraus_file, out_path, measure_kind = "all";
  std::string dims_spec = "2,4,8";
  int points = 0, d = 2, restarts = 16, max_iters = 400;
  bool verify = false, as_json = false;

  auto add_common = [&](CLI::App* cmd, long default_samples) {
    cmd->add_option("--partition", opt.partition, "Comma-separated side-A subsystem indices");
    cmd->add_option("--seed", opt.seed, "Random seed");
    cmd->add_option("--samples", opt.samples, "Monte Carlo sample count")
        ->default_val(default_samples);
    cmd->add_option("--workers", opt.workers, "Worker threads for sampling")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--rank-tol", opt.rank_tol, "Schmidt rank tolerance");
  };

  CLI::App* schmidt = app.add_subcommand("schmidt", "Schmidt coefficients and entanglement flags");
  schmidt->add_option("state", state_file, "State file")->required();
  add_common(schmidt, 0);

  CLI::App* related = app.add_subcommand("related", "Related operator on side B");
  related->add_option("state", state_file, "State file")->required();
  related->add_option("operator", op_file, "Operator file (acts on side A)")->required();
  related->add_option("--out", out_path, "Write V as a JSON operator file");
  related->add_flag("--verify", verify, "Print the action residual");
  add_common(related, 0);

  CLI::App* channel = app.add_subcommand("channel", "Related Kraus map and CP/TP analysis");
  channel->add_option("state", state_file, "State file")->required();
  channel->add_option("kraus", kraus_file, "Kraus map file")->required();
  channel->add_flag("--json", as_json, "Emit the report as JSON");
  add_common(channel, 0);

  CLI::App* measure = app.add_subcommand("measure", "Entanglement quantifiers");
  measure->add_option("state", state_file, "State or density matrix file")->required();
  measure->add_option("--measure", measure_kind, "m|es|entropy|negativity|all")
      ->check(CLI::IsMember({"m", "es", "entropy", "negativity", "all"}));
  measure->add_option("--restarts", restarts, "Optimizer restarts (mixed-state m)");
  measure->add_option("--max-iters", max_iters, "Optimizer iterations per restart");
  add_common(measure, 100000);

  CLI::App* fig1 = app.add_subcommand("fig1", "Four measures on the two-ququart family");
  fig1->add_option("--points", points, "Grid points on [0, 1]")->default_val(101);
  fig1->add_option("--out", out_path, "Output CSV path")->default_val("fig1.csv");
  add_common(fig1, 20000);

  CLI::App* fig2 = app.add_subcommand("fig2", "Normalized E_S of the two-level family vs dimension");
  fig2->add_option("--dims", dims_spec, "Comma-separated qudit dimensions");
  fig2->add_option("--points", points, "Grid points on [0, 1]")->default_val(21);
  fig2->add_option("--out", out_path, "Output CSV path")->default_val("fig2.csv");
  add_common(fig2, 20000);

  CLI::App* haarcheck = app.add_subcommand("haarcheck", "Haar sampler diagnostics");
  haarcheck->add_option("--d", d, "Unitary dimension")->check(CLI::Range(2, 64));
  add_common(haarcheck, 100000);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*schmidt) return run_schmidt(state_file, opt);
    if (*related) return run_related(state_file, op_file, opt, out_path, verify);
    if (*channel) return run_channel(state_file, kraus_file, opt, as_json);
    if (*measure) return run_measure(state_file, opt, measure_kind, restarts, max_iters);
    if (*fig1) return run_fig1(opt, points, out_path);
    if (*fig2) return run_fig2(opt, dims_spec, points, out_path);
    if (*haarcheck) return run_haarcheck(opt, d);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
