#include "langest/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "langest/asymptotics.hpp"
#include "langest/baselines.hpp"
#include "langest/errors.hpp"
#include "langest/estimator.hpp"
#include "langest/harness.hpp"
#include "langest/io.hpp"
#include "langest/solver.hpp"
#include "langest/toml_lite.hpp"

namespace langest {

namespace {

struct ModelFlags {
  std::string kind = "brownian";
  std::optional<double> hurst;
  std::optional<double> kappa;
  std::vector<std::string> components;
  std::string model_json;

  void attach(CLI::App* app) {
    app->add_option("--model", kind, "noise kind: brownian, fbm, mixed, lamperti_fbm, lamperti_bifbm")
        ->capture_default_str();
    app->add_option("--hurst", hurst, "Hurst index H");
    app->add_option("--kappa", kappa, "bifractional index K");
    app->add_option("--component", components,
                    "mixed component kind[:H], repeatable (e.g. fbm:0.3)");
    app->add_option("--model-json", model_json,
                    "model descriptor as JSON text, or @file; overrides the other model flags");
  }

  NoiseModel build() const {
    if (!model_json.empty()) {
      const std::string text =
          model_json.front() == '@' ? read_text_file(model_json.substr(1)) : model_json;
      return model_from_json(nlohmann::json::parse(text));
    }
    nlohmann::json j{{"kind", kind}};
    if (hurst) j["hurst"] = *hurst;
    if (kappa) j["kappa"] = *kappa;
    if (!components.empty()) {
      auto arr = nlohmann::json::array();
      for (const auto& c : components) arr.push_back(component(c));
      j["components"] = std::move(arr);
    }
    return model_from_json(j);
  }

  static nlohmann::json component(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.empty() || parts.size() > 3) throw DomainError("bad component '" + spec + "'");
    nlohmann::json j{{"kind", parts[0]}};
    try {
      if (parts.size() > 1) j["hurst"] = std::stod(parts[1]);
      if (parts.size() > 2) j["kappa"] = std::stod(parts[2]);
    } catch (const std::logic_error&) {
      throw DomainError("bad component '" + spec + "'");
    }
    return j;
  }
};

// Writes to a file, or to `out` when the path is "-".
template <class Fn>
void with_output(const std::string& path, std::ostream& out, Fn&& write) {
  if (path == "-") {
    write(out);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DegenerateInput("cannot write '" + path + "'");
  write(f);
  if (!f) throw DegenerateInput("failed writing '" + path + "'");
}

struct SimulateArgs {
  ModelFlags model;
  std::optional<double> theta;
  double t_max = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string out = "-";
  std::string kind = "x";
  std::string route = "auto";
  double xi = 0.0;
};

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  const NoiseModel model = a.model.build();
  const Grid grid = Grid::over(a.t_max, a.dt);
  const Seed seed{a.seed, a.stream};
  PathSample path;
  if (a.kind == "g") {
    path = sample_noise_increments(model, grid, seed);
  } else {
    if (!a.theta) throw DomainError("--theta is required for kind " + a.kind);
    const KernelContext ctx(model, *a.theta);
    if (a.kind == "u") {
      path = sample_U_stationary(ctx, grid, seed);
    } else if (a.kind == "x") {
      PathRoute route = path_route_from_string(a.route);
      if (route == PathRoute::automatic)
        route = model.flavor() == Flavor::increment ? PathRoute::solver : PathRoute::direct;
      path = route == PathRoute::solver
                 ? solve_zero_start(sample_noise_increments(model, grid, seed), *a.theta)
                 : sample_X_direct(ctx, grid, seed);
      path = shift_initial(path, *a.theta, a.xi);
    } else {
      throw DomainError("--kind must be x, u or g");
    }
  }
  with_output(a.out, out, [&](std::ostream& o) { write_path_csv(o, path); });
  return 0;
}

struct EstimateArgs {
  ModelFlags model;
  std::string input;
  std::string method = "ae";
  bool discrete = false;
  double alpha = 0.05;
  std::optional<double> theta_ref;
};

int run_estimate(const EstimateArgs& a, std::ostream& out) {
  const NoiseModel model = a.model.build();
  const Series s = a.input == "-" ? read_series_csv(std::cin) : read_series_csv_file(a.input);
  if (s.t.size() < 2) throw DegenerateInput("estimation needs at least two rows");
  const double dt = s.spacing();
  EstimateOptions opts;
  opts.alpha = a.alpha;

  PathSample path{Grid(dt, s.t.size() - 1), s.x, model, std::nullopt, Seed{}, PathKind::zero_start};
  EstimateResult res;
  if (a.method == "ae") {
    if (a.discrete) {
      res = ae_discrete(std::span<const double>(s.x).subspan(1), dt, model, opts);
    } else {
      res = ae_continuous(path, model, opts);
    }
  } else if (a.method == "lse" || a.method == "mle") {
    const auto ae = ae_continuous(path, model, {a.alpha, false});
    res.method = a.method;
    res.mean_square = ae.mean_square;
    res.horizon = ae.horizon;
    res.alpha = a.alpha;
    if (a.method == "lse") {
      const double ref = a.theta_ref.value_or(ae.theta_hat);
      res.theta_hat = lse_ito(path, model, ref);
      res.notes.push_back("theta_ref=" + format_double(ref) +
                          (a.theta_ref ? " (given)" : " (plug-in from the AE)"));
    } else {
      res.theta_hat = mle_brownian(path, model);
    }
  } else {
    throw DomainError("--method must be ae, lse or mle");
  }
  out << estimate_to_json(res).dump(2) << '\n';
  return 0;
}

struct AsymptoticsArgs {
  ModelFlags model;
  double theta = 1.0;
  double t_max = 0.0;
  int r_samples = 11;
  bool moments = false;
  int moment_order = 64;
};

int run_asymptotics(const AsymptoticsArgs& a, std::ostream& out) {
  const KernelContext ctx(a.model.build(), a.theta);
  const auto rep = asymptotics_report(ctx, a.t_max, a.moments, a.moment_order);
  std::vector<std::pair<double, double>> samples;
  if (a.r_samples < 0) throw DomainError("--r-samples must be nonnegative");
  for (int i = 0; i < a.r_samples; ++i) {
    const double t = a.r_samples == 1 ? 0.0 : a.t_max * i / (a.r_samples - 1);
    samples.emplace_back(t, ctx.r(t));
  }
  out << asymptotics_to_json(rep, samples).dump(2) << '\n';
  return 0;
}

struct McArgs {
  std::string config;
  std::string out = "-";
  unsigned threads = 1;
  bool wall_time = false;
};

int run_mc(const McArgs& a, std::ostream& out, std::ostream& err) {
  const std::string text = read_text_file(a.config);
  const bool json = a.config.size() >= 5 && a.config.substr(a.config.size() - 5) == ".json";
  const auto cfg = config_from_json(json ? nlohmann::json::parse(text) : parse_toml(text));
  const auto report = run_experiment(cfg, {a.threads});
  with_output(a.out, out,
              [&](std::ostream& o) { o << report_to_json(report, a.wall_time).dump(2) << '\n'; });
  err << "wall time: " << format_double(report.wall_time.value_or(0.0)) << " s\n";
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and estimation for Langevin equations driven by Gaussian noise"};
  app.name("langest");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "simulate a path and write CSV `t,x`");
  sim.model.attach(simulate);
  simulate->add_option("--theta", sim.theta, "mean-reversion parameter");
  simulate->add_option("--t-max", sim.t_max, "horizon T")->required();
  simulate->add_option("--dt", sim.dt, "grid step")->required();
  simulate->add_option("--seed", sim.seed, "random seed")->capture_default_str();
  simulate->add_option("--stream", sim.stream, "random stream id")->capture_default_str();
  simulate->add_option("--out", sim.out, "output CSV, - for stdout")->capture_default_str();
  simulate->add_option("--kind", sim.kind, "x (zero start), u (stationary) or g (noise)")
      ->capture_default_str();
  simulate->add_option("--route", sim.route, "auto, solver or direct")->capture_default_str();
  simulate->add_option("--xi", sim.xi, "initial value of x")->capture_default_str();

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "estimate theta from a CSV path, print JSON");
  est.model.attach(estimate);
  estimate->add_option("--input", est.input, "CSV `t,x`, - for stdin")->required();
  estimate->add_option("--method", est.method, "ae, lse or mle")->capture_default_str();
  estimate->add_flag("--discrete", est.discrete, "discrete-observation estimator");
  estimate->add_option("--alpha", est.alpha, "confidence level 1 - alpha")->capture_default_str();
  estimate->add_option("--theta-ref", est.theta_ref, "theta used for E[X_T^2] by lse");

  AsymptoticsArgs asy;
  auto* asymptotics = app.add_subcommand("asymptotics", "variance map and normal-approximation quantities, JSON");
  asy.model.attach(asymptotics);
  asymptotics->add_option("--theta", asy.theta, "mean-reversion parameter")->required();
  asymptotics->add_option("--t-max", asy.t_max, "horizon T")->required();
  asymptotics->add_option("--r-samples", asy.r_samples, "number of r samples on [0, T]")
      ->capture_default_str();
  asymptotics->add_flag("--moments", asy.moments, "also compute E[Q^2], E[Q^4]");
  asymptotics->add_option("--moment-order", asy.moment_order, "Gauss-Legendre order for E[Q^4]")
      ->capture_default_str();

  McArgs mc;
  auto* mcc = app.add_subcommand("mc", "run a Monte Carlo experiment, print JSON report");
  mcc->add_option("--config", mc.config, "experiment config (TOML, or JSON by .json extension)")
      ->required();
  mcc->add_option("--out", mc.out, "report file, - for stdout")->capture_default_str();
  mcc->add_option("--threads", mc.threads, "worker threads")->capture_default_str();
  mcc->add_flag("--wall-time", mc.wall_time, "include wall_time in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "langest: " << e.what() << "\n";
    err << "run 'langest --help' for usage\n";
    return 2;
  }

  try {
    if (*simulate) return run_simulate(sim, out);
    if (*estimate) return run_estimate(est, out);
    if (*asymptotics) return run_asymptotics(asy, out);
    if (*mcc) return run_mc(mc, out, err);
  } catch (const EstimateOutOfRange& e) {
    err << "langest: " << e.what() << " (attainable range (" << format_double(e.psi_at_hi())
        << ", " << format_double(e.psi_at_lo()) << "))\n";
    return 4;
  } catch (const NumericsError& e) {
    err << "langest: numerics: " << e.what() << "\n";
    return 3;
  } catch (const SimulationError& e) {
    err << "langest: simulation: " << e.what() << "\n";
    return 3;
  } catch (const ExperimentError& e) {
    err << "langest: experiment: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "langest: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "langest: invalid JSON: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace langest
