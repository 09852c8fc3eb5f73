// Command-line surface: bounds tables, Figure-4 style data, 1D synthesis,
// d-dimensional realization checks, box sampling with Monte Carlo
// verification, and the 1D Yamada bound. All outputs are delimited text with
// '#'-prefixed header lines that echo the resolved configuration, so a rerun
// with identical arguments produces byte-identical files.
//
// Exit codes: 0 success/pass, 1 usage, 2 infeasible/fail, 3 I/O.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "latpp/block_factor.hpp"
#include "latpp/bounds.hpp"
#include "latpp/errors.hpp"
#include "latpp/estimate.hpp"
#include "latpp/lattice.hpp"
#include "latpp/product_process.hpp"
#include "latpp/synthesis.hpp"
#include "latpp/text_format.hpp"
#include "latpp/version.hpp"

namespace {

using namespace latpp;

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

void print_header(std::ostream& os, const std::string& command, const ConfigEcho& config) {
  os << "# latpp " << kVersion << '\n';
  os << "# command: " << command << '\n';
  os << "#";
  for (const auto& [key, value] : config) os << ' ' << key << '=' << value;
  os << '\n';
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open output file: " + path);
  return os;
}

BlockFactorProcess1D read_process_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open process file: " + path);
  return process_from_text(is);
}

std::vector<std::int64_t> parse_box_sides(const std::string& text) {
  std::vector<std::int64_t> sides;
  std::string token;
  std::istringstream is(text);
  while (std::getline(is, token, 'x')) {
    try {
      sides.push_back(std::stoll(token));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad --box value: " + text);
    }
  }
  if (sides.empty()) throw std::invalid_argument("bad --box value: " + text);
  return sides;
}

int run_bounds(double alpha, int dim) {
  const BoundsReport r = bounds_report(alpha, dim);
  print_header(std::cout, "bounds", {{"alpha", fmt12(alpha)}, {"dim", std::to_string(dim)}});
  std::cout << "R_F " << fmt12(r.r_f) << '\n';
  std::cout << "r_A " << fmt12(r.r_a) << '\n';
  if (r.r_c) std::cout << "r_C " << fmt12(*r.r_c) << '\n';
  std::cout << "lower_1d " << fmt12(r.lower_1d) << '\n';
  if (r.ratio_c) std::cout << "ratio_C " << fmt12(*r.ratio_c) << '\n';
  std::cout << "ratio_A " << fmt12(r.ratio_a) << '\n';
  if (alpha == 0.0 && dim == 1) {
    const ReferenceConstants c = reference_constants();
    std::cout << "ref_lower_rho_bar_alpha0 " << fmt12(c.lower_1d_alpha0) << '\n';
    std::cout << "ref_upper_rho_bar_alpha0 " << fmt12(c.upper_1d_alpha0) << '\n';
  }
  return 0;
}

int run_figure4(const std::vector<int>& dims, double step, const std::string& out) {
  const auto alphas = alpha_grid(step);
  const auto rows = figure4_table(dims, alphas);

  std::string dims_echo;
  for (std::size_t i = 0; i < dims.size(); ++i)
    dims_echo += (i ? "," : "") + std::to_string(dims[i]);

  auto os = open_output(out);
  print_header(os, "figure4",
               {{"dims", dims_echo}, {"alpha_step", fmt12(step)}, {"out", out}});
  write_figure4(os, rows);

  std::cout << "rows " << rows.size() << '\n';
  std::cout << "ratio_A self-check " << fmt12(1.0 / std::numbers::e) << " (1/e)\n";
  return 0;
}

int run_synth(double alpha, int window, bool has_gamma, double gamma, double tol,
              std::uint64_t seed, const std::string& out) {
  SynthesisOptions opt;
  opt.alpha_target = alpha;
  opt.window = window;
  opt.mode = has_gamma ? SynthesisMode::kHitDensity : SynthesisMode::kMaximizeDensity;
  opt.gamma_target = gamma;
  opt.tol = tol;
  opt.seed = seed;

  ConfigEcho echo{{"alpha", fmt12(alpha)},
                  {"window", std::to_string(window)},
                  {"mode", has_gamma ? "hit_density" : "maximize_density"}};
  if (has_gamma) echo.emplace_back("gamma", fmt12(gamma));
  echo.emplace_back("tol", fmt12(tol));
  echo.emplace_back("seed", std::to_string(seed));
  echo.emplace_back("out", out);

  SynthesisResult result = [&] {
    try {
      return synthesize(opt);
    } catch (const InfeasibleAtWindow& e) {
      std::cerr << "infeasible: " << e.what() << '\n';
      std::cerr << "best residual " << fmt12(e.report().best_residual) << " after "
                << e.report().starts << " starts\n";
      std::exit(2);
    }
  }();

  auto os = open_output(out);
  print_header(os, "synth", echo);
  write_process(os, result.process);

  print_header(std::cout, "synth", echo);
  std::cout << "gamma " << fmt12(result.profile.density) << '\n';
  std::cout << "alpha_hat "
            << (result.profile.alpha_hat ? fmt12(*result.profile.alpha_hat) : "absent")
            << '\n';
  for (std::size_t k = 0; k < result.profile.lag_values.size(); ++k)
    std::cout << "lag" << (k + 1) << ' ' << fmt12(result.profile.lag_values[k]) << '\n';
  std::cout << "tail " << fmt12(result.profile.tail_value) << '\n';
  std::cout << "residual " << fmt12(result.report.best_residual) << '\n';
  std::cout << "starts " << result.report.starts << '\n';
  std::cout << "iterations " << result.report.iterations << '\n';
  std::cout << "winning_start " << result.report.winning_start << '\n';
  return 0;
}

int run_realize_verify(const std::string& proc_path, int dim, int radius) {
  const BlockFactorProcess1D proc1d = read_process_file(proc_path);
  ProductProcessND proc = [&] {
    try {
      return realize(proc1d, dim);
    } catch (const std::invalid_argument& e) {
      std::cerr << "rejected: " << e.what() << '\n';
      std::exit(2);
    }
  }();
  const VerifyReport report = verify_against_target(proc, radius);

  print_header(std::cout, "realize-verify",
               {{"proc", proc_path},
                {"dim", std::to_string(dim)},
                {"radius", std::to_string(radius)}});
  std::cout << "target alpha=" << fmt12(report.target.alpha)
            << " rho=" << fmt12(report.target.rho) << " dim=" << report.target.dim << '\n';
  std::cout << "norm2,representative,class_size,value,target,deviation\n";
  for (const DeviationRow& row : report.rows) {
    std::cout << row.norm2 << ',';
    for (int m = 0; m < row.representative.dim(); ++m)
      std::cout << (m ? ";" : "") << row.representative.coords[static_cast<std::size_t>(m)];
    std::cout << ',' << row.class_size << ',' << fmt12(row.value) << ','
              << fmt12(row.target) << ',' << fmt12(row.deviation) << '\n';
  }
  std::cout << "max_deviation " << fmt12(report.max_deviation) << '\n';
  return 0;
}

void write_consistency(std::ostream& os, const std::string& label,
                       const ConsistencyReport& report) {
  os << "# " << label << ": " << (report.pass ? "PASS" : "FAIL")
     << " z_max=" << fmt12(report.z_max) << " classes=" << report.classes_tested << '\n';
  if (!report.rows.empty()) {
    const ConsistencyRow& worst = report.rows.front();
    os << "# worst: norm2=" << worst.norm2 << " z=" << fmt12(worst.z)
       << (worst.zero_variance && !worst.exact_match ? " zero-variance-mismatch" : "")
       << '\n';
  }
  os << "# note: " << report.note << '\n';
}

int run_simulate(const std::string& proc_path, int dim, const std::string& box_str,
                 int replicas, int radius, std::uint64_t seed, bool has_thin, double thin,
                 const std::string& out) {
  const std::vector<std::int64_t> sides = parse_box_sides(box_str);
  if (static_cast<int>(sides.size()) != dim)
    throw std::invalid_argument("--box must list one side per dimension");
  const BoxRegion box(sides);

  const BlockFactorProcess1D proc1d = read_process_file(proc_path);
  ProductProcessND proc = [&] {
    try {
      return realize(proc1d, dim);
    } catch (const std::invalid_argument& e) {
      std::cerr << "rejected: " << e.what() << '\n';
      std::exit(2);
    }
  }();

  ConfigEcho echo{{"proc", proc_path},     {"dim", std::to_string(dim)},
                  {"box", box_str},        {"replicas", std::to_string(replicas)},
                  {"radius", std::to_string(radius)}, {"seed", std::to_string(seed)}};
  if (has_thin) echo.emplace_back("thin", fmt12(thin));
  echo.emplace_back("out", out);

  const CorrelationEstimate est = estimate(proc, box, radius, replicas, seed);
  bool pass = true;
  bool degenerate = false;
  std::string verdict;
  ConsistencyReport consistency;
  try {
    consistency = consistency_test(est, proc.target());
    pass = consistency.pass;
    verdict = pass ? "PASS" : "FAIL";
  } catch (const std::invalid_argument& e) {
    degenerate = true;
    pass = false;
    verdict = std::string("DEGENERATE (") + e.what() + ")";
  }

  auto os = open_output(out);
  print_header(os, "simulate", echo);
  os << "# target: alpha=" << fmt12(proc.target().alpha)
     << " rho=" << fmt12(proc.target().rho) << " dim=" << dim << '\n';
  write_estimate(os, est);
  if (degenerate)
    os << "# consistency: " << verdict << '\n';
  else
    write_consistency(os, "consistency", consistency);

  print_header(std::cout, "simulate", echo);
  std::cout << "consistency " << (pass ? "PASS" : "FAIL") << '\n';

  bool thin_pass = true;
  if (has_thin) {
    const ThinningReport tr = thinning_check(proc, thin, box, radius, replicas, seed);
    thin_pass = tr.pass;
    os << "# thinned: t=" << fmt12(thin)
       << " target_rho=" << fmt12(tr.est.target.rho) << '\n';
    write_estimate(os, tr.est);
    if (tr.consistency)
      write_consistency(os, "thinned consistency", *tr.consistency);
    else
      os << "# thinned consistency: " << (tr.pass ? "PASS (all classes exact)" : "FAIL")
         << " degenerate=" << (tr.degenerate ? 1 : 0) << '\n';
    std::cout << "thinned " << (thin_pass ? "PASS" : "FAIL") << '\n';
  }

  return (pass && thin_pass) ? 0 : 2;
}

int run_yamada(double alpha, int n_max, double step) {
  const YamadaBound bound = yamada_upper_1d(alpha, n_max, step);
  const double rf = rf_upper(alpha, 1);
  print_header(std::cout, "yamada",
               {{"alpha", fmt12(alpha)},
                {"nmax", std::to_string(n_max)},
                {"step", fmt12(step)}});
  std::cout << "R_Y " << fmt12(bound.r_y) << '\n';
  std::cout << "R_F_1d " << fmt12(rf) << '\n';
  std::cout << "R_F_minus_R_Y " << fmt12(rf - bound.r_y) << '\n';
  std::cout << "yamada_only_cap " << fmt12(bound.yamada_only) << '\n';
  switch (bound.witness.kind) {
    case YamadaWitness::Kind::kNone:
      std::cout << "witness none\n";
      break;
    case YamadaWitness::Kind::kPsd:
      std::cout << "witness psd rho=" << fmt12(bound.witness.rho) << '\n';
      break;
    case YamadaWitness::Kind::kYamada:
      std::cout << "witness interval n=" << bound.witness.interval
                << " rho=" << fmt12(bound.witness.rho) << '\n';
      break;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"translation-invariant lattice point processes: bounds, construction, verification"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  double alpha = 0.0;
  int dim = 1;
  auto* cmd_bounds = app.add_subcommand("bounds", "closed-form density bounds for (alpha, d)");
  cmd_bounds->add_option("--alpha", alpha, "radial value at the nearest neighbors")
      ->required()
      ->check(CLI::NonNegativeNumber);
  cmd_bounds->add_option("--dim", dim, "lattice dimension")->check(CLI::PositiveNumber);

  std::vector<int> f4_dims{2, 3, 4, 5, 6};
  double f4_step = 0.01;
  std::string f4_out;
  auto* cmd_figure4 =
      app.add_subcommand("figure4", "lower-bound ratio table over an alpha grid");
  cmd_figure4->add_option("--dims", f4_dims, "dimensions (comma separated)")
      ->delimiter(',');
  cmd_figure4->add_option("--alpha-step", f4_step, "alpha grid step in (0, 0.5]")
      ->check(CLI::Range(1e-9, 0.5));
  cmd_figure4->add_option("--out", f4_out, "output file")->required();

  double s_alpha = 0.0, s_gamma = 0.0, s_tol = 1e-6;
  int s_window = 2;
  std::uint64_t s_seed = 1;
  std::string s_out;
  auto* cmd_synth = app.add_subcommand("synth", "search for a 1D process with the target profile");
  cmd_synth->add_option("--alpha", s_alpha, "target alpha")->required()->check(CLI::NonNegativeNumber);
  cmd_synth->add_option("--window", s_window, "block-factor window")->required()->check(CLI::PositiveNumber);
  auto* gamma_opt = cmd_synth->add_option("--gamma", s_gamma, "density target (omit to maximize density)")
                        ->check(CLI::Range(1e-12, 1.0 - 1e-12));
  cmd_synth->add_option("--tol", s_tol, "residual tolerance")->check(CLI::PositiveNumber);
  cmd_synth->add_option("--seed", s_seed, "search seed");
  cmd_synth->add_option("--out", s_out, "process record output file")->required();

  std::string v_proc;
  int v_dim = 2, v_radius = 3;
  auto* cmd_verify = app.add_subcommand("realize-verify", "exact pair expectations vs the target profile");
  cmd_verify->add_option("--proc", v_proc, "process record file")->required();
  cmd_verify->add_option("--dim", v_dim, "product dimension (>= 2)")->required()->check(CLI::Range(2, 16));
  cmd_verify->add_option("--radius", v_radius, "sup-norm verification radius")->check(CLI::Range(2, 32));

  std::string m_proc, m_box, m_out;
  int m_dim = 2, m_replicas = 200, m_radius = 3;
  std::uint64_t m_seed = 1;
  double m_thin = 1.0;
  auto* cmd_simulate = app.add_subcommand("simulate", "sample boxes and test the estimated correlations");
  cmd_simulate->add_option("--proc", m_proc, "process record file")->required();
  cmd_simulate->add_option("--dim", m_dim, "product dimension (>= 2)")->required()->check(CLI::Range(2, 16));
  cmd_simulate->add_option("--box", m_box, "box sides, e.g. 64x64")->required();
  cmd_simulate->add_option("--replicas", m_replicas, "independent replicas (>= 2)")->check(CLI::Range(2, 1000000));
  cmd_simulate->add_option("--radius", m_radius, "displacement radius")->check(CLI::Range(1, 32));
  cmd_simulate->add_option("--seed", m_seed, "sampling seed");
  auto* thin_opt = cmd_simulate->add_option("--thin", m_thin, "also check sitewise thinning with this keep probability")
                       ->check(CLI::Range(0.0, 1.0));
  cmd_simulate->add_option("--out", m_out, "estimate output file")->required();

  double y_alpha = 0.0, y_step = 1e-4;
  int y_nmax = 256;
  auto* cmd_yamada = app.add_subcommand("yamada", "1D density bound from the interval count-variance condition");
  cmd_yamada->add_option("--alpha", y_alpha, "target alpha")->required()->check(CLI::NonNegativeNumber);
  cmd_yamada->add_option("--nmax", y_nmax, "largest interval length")->check(CLI::Range(2, 1000000));
  cmd_yamada->add_option("--step", y_step, "density grid step")->check(CLI::Range(1e-9, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(cmd_bounds)) return run_bounds(alpha, dim);
    if (app.got_subcommand(cmd_figure4)) return run_figure4(f4_dims, f4_step, f4_out);
    if (app.got_subcommand(cmd_synth))
      return run_synth(s_alpha, s_window, gamma_opt->count() > 0, s_gamma, s_tol, s_seed, s_out);
    if (app.got_subcommand(cmd_verify)) return run_realize_verify(v_proc, v_dim, v_radius);
    if (app.got_subcommand(cmd_simulate))
      return run_simulate(m_proc, m_dim, m_box, m_replicas, m_radius, m_seed,
                          thin_opt->count() > 0, m_thin, m_out);
    if (app.got_subcommand(cmd_yamada)) return run_yamada(y_alpha, y_nmax, y_step);
  } catch (const latpp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
