// conecert: certify, check, and simulate gain bounds for switched linear
// systems whose switching is constrained by an automaton.

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "conecert/errors.hpp"
#include "conecert/l1cert.hpp"
#include "conecert/l2cert.hpp"
#include "conecert/models.hpp"
#include "conecert/simulate.hpp"
#include "conecert/system_io.hpp"
#include "conecert/tolerances.hpp"

namespace {

using namespace conecert;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInputError = 3;
constexpr int kExitNumericalError = 4;

int thread_count_from_env() {
  if (const char* env = std::getenv("CONECERT_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

void print_report(const ValidationReport& report) {
  for (const std::string& w : report.warnings) std::cout << "warning: " << w << "\n";
  for (const std::string& e : report.errors) std::cout << "error: " << e << "\n";
}

SystemDescription load_system_checked(const std::string& path, bool print_warnings = true) {
  SystemDescription s = read_system(path);
  const ValidationReport report = validate_system(s);
  if (print_warnings) {
    for (const std::string& w : report.warnings) std::cout << "warning: " << w << "\n";
  }
  if (!report.ok()) {
    throw InputError(path + ": " + report.errors.front());
  }
  return s;
}

int cmd_validate(const std::string& path) {
  SystemDescription s = read_system(path);
  const ValidationReport report = validate_system(s);
  print_report(report);
  if (report.ok()) {
    std::cout << "ok: " << path << " (" << s.graph.nodes.size() << " nodes, "
              << s.graph.edges.size() << " edges, " << s.mode_count() << " modes)\n";
    return kExitOk;
  }
  return kExitInputError;
}

int cmd_certify(const std::string& path, const std::string& kind, double margin,
                double gamma_tol, std::optional<double> gamma_max, const std::string& out) {
  SystemDescription s = load_system_checked(path);
  if (kind == "l1") {
    const auto cert = certify_l1(s, margin);
    if (!cert) {
      std::cout << "infeasible\n";
      return kExitInfeasible;
    }
    std::cout << "gamma = " << std::setprecision(10) << cert->gamma << "\n";
    if (!out.empty()) write_certificate(*cert, s.graph, out);
    return kExitOk;
  }
  if (kind == "l2") {
    const auto cert = certify_l2(s, gamma_tol, gamma_max);
    if (!cert) {
      std::cout << "infeasible (no certificate found up to the gamma bracket cap)\n";
      return kExitInfeasible;
    }
    std::cout << "gamma = " << std::setprecision(10) << cert->gamma
              << " (bounds ||z||_2^2 / ||w||_2^2)\n";
    if (!out.empty()) write_certificate(*cert, s.graph, out);
    return kExitOk;
  }
  if (kind == "stability") {
    const auto cert = certify_l1_stability(s, margin);
    if (!cert) {
      std::cout << "infeasible\n";
      return kExitInfeasible;
    }
    std::cout << "stable\n";
    if (!out.empty()) write_certificate(*cert, s.graph, out);
    return kExitOk;
  }
  throw InputError("unknown certification kind '" + kind + "' (expected l1, l2, or stability)");
}

void print_check_report(const CheckReport& report, const SwitchingGraph& g) {
  std::cout << std::setprecision(6);
  for (const EdgeResidual& e : report.edges) {
    const Edge& edge = g.edges.at(e.edge_index);
    std::cout << "edge #" << e.edge_index << " " << g.nodes.at(edge.from) << " -m"
              << edge.label + 1 << "-> " << g.nodes.at(edge.to)
              << ": worst residual = " << e.worst_residual << "\n";
  }
  for (const std::string& f : report.failures) std::cout << "fail: " << f << "\n";
  std::cout << (report.pass ? "check passed" : "check FAILED") << "\n";
}

int cmd_check(const std::string& system_path, const std::string& cert_path,
              std::optional<double> tol) {
  SystemDescription s = load_system_checked(system_path);
  const CertificateKind kind = read_certificate_kind(cert_path);
  CheckReport report;
  if (kind == CertificateKind::L1) {
    const L1Certificate cert = read_l1_certificate(cert_path, s.graph);
    report = check_l1_certificate(s, cert, tol.value_or(cert.margin / 2));
  } else if (kind == CertificateKind::L2) {
    const L2Certificate cert = read_l2_certificate(cert_path, s.graph);
    report = check_l2_certificate(s, cert, tol.value_or(cert.margin / 2));
  } else {
    const StabilityCertificate cert = read_stability_certificate(cert_path, s.graph);
    report = check_stability_certificate(s, cert, tol.value_or(cert.margin / 2));
  }
  print_check_report(report, s.graph);
  return report.pass ? kExitOk : kExitInfeasible;
}

int cmd_simulate(const std::string& system_path, int steps, std::uint64_t seed,
                 const std::string& start_name, const std::string& input_kind,
                 const std::string& cert_path, const std::string& out) {
  SystemDescription s = load_system_checked(system_path);

  int start = 0;
  if (!start_name.empty()) {
    start = s.graph.node_index(start_name);
    if (start < 0) throw InputError("unknown start node '" + start_name + "'");
  }

  const Walk walk = sample_walk(s.graph, start, steps, seed);

  std::vector<Vector> inputs(steps, Vector(s.dims.q, 0.0));
  if (input_kind == "impulse") {
    inputs[0][0] = 1.0;
  } else if (input_kind == "random") {
    std::mt19937_64 rng(seed + 1);  // separate stream from the walk
    const double lo = s.kind == SystemKind::Pss ? 0.0 : -1.0;
    std::uniform_real_distribution<double> dist(lo, 1.0);
    for (Vector& wt : inputs)
      for (double& v : wt) v = dist(rng);
  } else {
    throw InputError("--input must be impulse or random");
  }

  const Trajectory traj = simulate(s, walk, inputs, Vector(s.dims.n, 0.0));

  std::optional<L1Certificate> l1;
  std::optional<L2Certificate> l2;
  GainKind gain_kind = s.kind == SystemKind::Pss ? GainKind::L1 : GainKind::L2;
  if (!cert_path.empty()) {
    const CertificateKind kind = read_certificate_kind(cert_path);
    if (kind == CertificateKind::L1) {
      l1 = read_l1_certificate(cert_path, s.graph);
      gain_kind = GainKind::L1;
    } else if (kind == CertificateKind::L2) {
      l2 = read_l2_certificate(cert_path, s.graph);
      gain_kind = GainKind::L2;
    } else {
      throw InputError("simulate --cert expects an l1 or l2 certificate");
    }
  }

  std::cout << std::setprecision(10);
  std::cout << "walk: " << s.graph.nodes.at(walk.start);
  for (const WalkStep& step : walk.steps) {
    std::cout << " -m" << step.label + 1 << "-> " << s.graph.nodes.at(step.to);
  }
  std::cout << "\n";
  std::cout << "final state max |x| = " << max_abs(traj.x.back()) << "\n";

  const double gain = empirical_gain(traj, gain_kind);
  std::cout << "empirical " << (gain_kind == GainKind::L1 ? "l1 gain" : "l2 gain (squared ratio)")
            << " = " << gain << "\n";

  std::vector<double> lyapunov;
  bool pass = true;
  if (l1 || l2) {
    const DecreaseReport report = l1 ? lyapunov_decrease_check(s, *l1, traj)
                                     : lyapunov_decrease_check(s, *l2, traj);
    std::cout << "lyapunov decrease: min slack = " << report.min_slack
              << (report.pass ? " (all steps strict)" : " (VIOLATED)") << "\n";
    const double gamma = l1 ? l1->gamma : l2->gamma;
    std::cout << "certified gamma = " << gamma << (gain <= gamma ? " >= " : " <  ")
              << "empirical gain\n";
    pass = report.pass && gain <= gamma;

    lyapunov.reserve(traj.x.size());
    int node = walk.start;
    for (std::size_t t = 0; t < traj.x.size(); ++t) {
      lyapunov.push_back(l1 ? dot(l1->p[node], traj.x[t])
                            : dot(traj.x[t], l2->p[node] * traj.x[t]));
      if (t < traj.walk.steps.size()) node = traj.walk.steps[t].to;
    }
  }

  if (!out.empty()) {
    write_trace_csv(out, s, traj, lyapunov.empty() ? nullptr : &lyapunov);
    std::cout << "trace written to " << out << "\n";
  }
  return pass ? kExitOk : kExitInfeasible;
}

int cmd_oracle(const std::string& system_path, int horizon, const std::string& kind,
               int threads) {
  SystemDescription s = load_system_checked(system_path);
  std::cout << std::setprecision(10);
  if (kind == "l1") {
    const L1OracleResult result = worst_case_l1_lower_bound(s, horizon, threads);
    std::cout << "l1 lower bound = " << result.bound << "\n";
    if (result.bound > 0.0) {
      std::cout << "witness: start " << s.graph.nodes.at(result.walk.start) << ", modes";
      for (const WalkStep& step : result.walk.steps) std::cout << " m" << step.label + 1;
      std::cout << ", impulse at t=" << result.injection_time << " on channel "
                << result.channel + 1 << "\n";
    }
    return kExitOk;
  }
  if (kind == "l2") {
    const L2OracleResult result = worst_case_l2_lower_bound(s, horizon, threads);
    std::cout << "l2 lower bound = " << result.bound
              << " (unsquared; compare bound^2 against a certified gamma)\n";
    if (result.bound > 0.0) {
      std::cout << "witness: start " << s.graph.nodes.at(result.walk.start) << ", modes";
      for (const WalkStep& step : result.walk.steps) std::cout << " m" << step.label + 1;
      std::cout << "\n";
    }
    return kExitOk;
  }
  throw InputError("--kind must be l1 or l2");
}

int cmd_example(const std::string& name, double kb, double kc, const std::string& b_shape,
                const std::string& out) {
  if (name != "virus") throw InputError("unknown example '" + name + "' (available: virus)");
  BShape shape = BShape::Column;
  if (b_shape == "diag") {
    shape = BShape::Diag;
  } else if (b_shape != "column") {
    throw InputError("--b-shape must be column or diag");
  }
  const SystemDescription s = build_virus_example(kb, kc, shape);
  if (out.empty()) {
    std::cout << system_to_json(s);
  } else {
    write_system(s, out);
    std::cout << "wrote " << out << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gain certificates for switched linear systems under automaton-constrained switching"};
  app.require_subcommand(1);
  // Lets global options like --threads appear after the subcommand name.
  app.fallthrough();

  int threads = thread_count_from_env();
  app.add_option("--threads", threads, "worker threads for oracle walk evaluation")
      ->check(CLI::PositiveNumber);

  std::string path;
  std::string cert_path;
  std::string kind;
  std::string out;
  double margin = tol::kL1DefaultMargin;
  double gamma_tol = tol::kL2DefaultGammaTol;
  std::optional<double> gamma_max;
  std::optional<double> check_tol;
  int steps = 50;
  std::uint64_t seed = 0;
  std::string start_name;
  std::string input_kind = "impulse";
  int horizon = 0;
  double kb = 1.0;
  double kc = 0.6;
  std::string b_shape = "column";
  std::string example_name;

  CLI::App* validate = app.add_subcommand("validate", "validate a system file");
  validate->add_option("system", path, "system JSON file")->required();

  CLI::App* certify = app.add_subcommand("certify", "compute a gain or stability certificate");
  certify->add_option("kind", kind, "l1, l2, or stability")->required();
  certify->add_option("system", path, "system JSON file")->required();
  certify->add_option("--margin", margin, "strictness margin for the l1/stability inequalities");
  certify->add_option("--tol", gamma_tol, "relative gamma bracket width for l2 bisection");
  certify->add_option("--gamma-max", gamma_max, "upper cap for the l2 gamma search");
  certify->add_option("--out", out, "write the certificate JSON here");

  CLI::App* check = app.add_subcommand("check", "re-verify a certificate against a system");
  check->add_option("system", path, "system JSON file")->required();
  check->add_option("certificate", cert_path, "certificate JSON file")->required();
  check->add_option("--tol", check_tol, "strictness tolerance (default: certificate margin / 2)");

  CLI::App* simulate = app.add_subcommand("simulate", "roll out a random admissible trajectory");
  simulate->add_option("system", path, "system JSON file")->required();
  simulate->add_option("--steps", steps, "walk length")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "PRNG seed for walk and inputs");
  simulate->add_option("--start", start_name, "start node name (default: first node)");
  simulate->add_option("--input", input_kind, "impulse or random");
  simulate->add_option("--cert", cert_path, "certificate to verify along the trajectory");
  simulate->add_option("--out", out, "write a CSV trace here");

  CLI::App* oracle = app.add_subcommand("oracle", "finite-horizon brute-force gain lower bound");
  oracle->add_option("system", path, "system JSON file")->required();
  oracle->add_option("--horizon", horizon, "walk length to enumerate")->required()
      ->check(CLI::NonNegativeNumber);
  oracle->add_option("--kind", kind, "l1 or l2")->required();

  CLI::App* example = app.add_subcommand("example", "emit a bundled example system");
  example->add_option("name", example_name, "example name (virus)")->required();
  example->add_option("--kb", kb, "country B quarantine rate under full measures");
  example->add_option("--kc", kc, "country C quarantine rate under measures m2/m3");
  example->add_option("--b-shape", b_shape, "disturbance shape: column (default) or diag");
  example->add_option("--out", out, "write the system JSON here (default: stdout)");

  try {
    app.parse(argc, argv);
    if (validate->parsed()) return cmd_validate(path);
    if (certify->parsed()) return cmd_certify(path, kind, margin, gamma_tol, gamma_max, out);
    if (check->parsed()) return cmd_check(path, cert_path, check_tol);
    if (simulate->parsed()) {
      return cmd_simulate(path, steps, seed, start_name, input_kind, cert_path, out);
    }
    if (oracle->parsed()) return cmd_oracle(path, horizon, kind, threads);
    if (example->parsed()) return cmd_example(example_name, kb, kc, b_shape, out);
    return kExitInputError;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  } catch (const conecert::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const conecert::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalError;
  }
}
