#include "langest/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "langest/asymptotics.hpp"
#include "langest/baselines.hpp"
#include "langest/errors.hpp"
#include "langest/estimator.hpp"
#include "langest/numerics.hpp"
#include "langest/solver.hpp"

namespace langest {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Outcome {
  double estimate = kNaN;
  double standardized = kNaN;
  double secondary = kNaN;
  double mean_square = kNaN;
  double secondary_mean_square = kNaN;
  bool covered = false;
  std::optional<std::string> error;
};

// Everything that is shared read-only across replications.
class Replicator {
 public:
  explicit Replicator(const ExperimentConfig& config)
      : config_(config), grid_(Grid::over(config.horizon, config.dt)) {
    const bool increment = config.model.flavor() == Flavor::increment;
    PathRoute route = config.route;
    if (route == PathRoute::automatic) route = increment ? PathRoute::solver : PathRoute::direct;
    if (config.kind == ExperimentKind::bias) {
      const KernelContext ctx(config.model, config.theta_true);
      stationary_.emplace(stationary_covariance(ctx, grid_));
    } else if (route == PathRoute::solver) {
      if (!increment)
        throw DomainError("the solver route needs an increment-flavor model, got " +
                          config.model.describe());
      noise_.emplace(config.model, grid_);
    } else {
      const KernelContext ctx(config.model, config.theta_true);
      zero_start_.emplace(zero_start_covariance(ctx, grid_));
    }
    if (config.standardize_with == Standardization::true_theta)
      true_scale_ = master_scale(KernelContext(config.model, config.theta_true), grid_.horizon());
    if (config.kind == ExperimentKind::discrete_vs_continuous) {
      const double ratio = *config.discrete_delta / config.dt;
      stride_ = static_cast<std::size_t>(std::llround(ratio));
      if (stride_ < 1 || std::abs(ratio - static_cast<double>(stride_)) > 1e-9 * ratio)
        throw DomainError("discrete_delta must be a positive multiple of dt");
    }
  }

  Outcome run(std::size_t index) const {
    Outcome out;
    const Seed seed{config_.master_seed, index};
    const double theta = config_.theta_true;
    EstimateOptions opts;
    opts.alpha = config_.alpha;

    PathSample x;
    std::optional<PathSample> u;
    if (stationary_) {
      Philox rng(seed.seed, seed.stream);
      const Eigen::VectorXd z = stationary_->sample(rng);
      u = PathSample{grid_, std::vector<double>(z.data(), z.data() + z.size()), config_.model,
                     theta, seed, PathKind::stationary};
      x = *u;
      x.kind = PathKind::zero_start;
      for (std::size_t k = 0; k < x.values.size(); ++k)
        x.values[k] -= std::exp(-theta * grid_.at(k)) * u->values[0];
    } else if (noise_) {
      x = solve_zero_start(noise_->sample(seed), theta);
    } else {
      Philox rng(seed.seed, seed.stream);
      const Eigen::VectorXd z = zero_start_->sample(rng);
      x = PathSample{grid_, std::vector<double>(grid_.n + 1, 0.0), config_.model, theta, seed,
                     PathKind::zero_start};
      for (std::size_t k = 0; k < grid_.n; ++k) x.values[k + 1] = z[static_cast<Eigen::Index>(k)];
    }
    if (config_.kind == ExperimentKind::initial_condition)
      x = shift_initial(x, theta, config_.xi.value_or(0.0));

    const auto ae = ae_continuous(x, config_.model, opts);
    out.mean_square = ae.mean_square;
    out.standardized = true_scale_ ? (ae.theta_hat - theta) * *true_scale_
                                   : (ae.theta_hat - theta) / *ae.std_error;
    out.covered = ae.ci->first <= theta && theta <= ae.ci->second;
    out.estimate = ae.theta_hat;

    switch (config_.kind) {
      case ExperimentKind::consistency:
      case ExperimentKind::normality:
      case ExperimentKind::initial_condition:
        break;
      case ExperimentKind::bias: {
        const auto s = sae(*u, config_.model, {config_.alpha, false});
        out.secondary = s.theta_hat;
        out.secondary_mean_square = s.mean_square;
        break;
      }
      case ExperimentKind::lse_decay:
        out.secondary = ae.theta_hat;
        out.estimate = lse_ito(x, config_.model, theta);
        break;
      case ExperimentKind::mle:
        out.secondary = ae.theta_hat;
        out.estimate = mle_brownian(x, config_.model);
        break;
      case ExperimentKind::discrete_vs_continuous: {
        std::vector<double> obs;
        for (std::size_t k = stride_; k < x.values.size(); k += stride_) obs.push_back(x.values[k]);
        const auto d = ae_discrete(obs, *config_.discrete_delta, config_.model, {config_.alpha, false});
        out.secondary = ae.theta_hat;
        out.estimate = d.theta_hat;
        break;
      }
    }
    return out;
  }

 private:
  const ExperimentConfig& config_;
  Grid grid_;
  std::optional<NoiseSampler> noise_;
  std::optional<GaussianVectorSampler> zero_start_;
  std::optional<GaussianVectorSampler> stationary_;
  std::optional<double> true_scale_;
  std::size_t stride_ = 1;
};

std::vector<double> finite_values(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v)
    if (std::isfinite(x)) out.push_back(x);
  return out;
}

nlohmann::json nullable_array(const std::vector<double>& v) {
  auto arr = nlohmann::json::array();
  for (double x : v) {
    if (std::isfinite(x))
      arr.push_back(x);
    else
      arr.push_back(nullptr);
  }
  return arr;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::consistency:
      return "consistency";
    case ExperimentKind::normality:
      return "normality";
    case ExperimentKind::bias:
      return "bias";
    case ExperimentKind::lse_decay:
      return "lse_decay";
    case ExperimentKind::discrete_vs_continuous:
      return "discrete_vs_continuous";
    case ExperimentKind::initial_condition:
      return "initial_condition";
    case ExperimentKind::mle:
      return "mle";
  }
  return "unknown";
}

std::string to_string(Standardization s) {
  return s == Standardization::plug_in ? "plug_in" : "true_theta";
}

std::string to_string(PathRoute route) {
  switch (route) {
    case PathRoute::automatic:
      return "auto";
    case PathRoute::solver:
      return "solver";
    case PathRoute::direct:
      return "direct";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (auto k : {ExperimentKind::consistency, ExperimentKind::normality, ExperimentKind::bias,
                 ExperimentKind::lse_decay, ExperimentKind::discrete_vs_continuous,
                 ExperimentKind::initial_condition, ExperimentKind::mle}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown experiment kind '" + name + "'");
}

Standardization standardization_from_string(const std::string& name) {
  if (name == "plug_in") return Standardization::plug_in;
  if (name == "true_theta") return Standardization::true_theta;
  throw DomainError("standardize_with must be plug_in or true_theta, got '" + name + "'");
}

PathRoute path_route_from_string(const std::string& name) {
  if (name == "auto") return PathRoute::automatic;
  if (name == "solver") return PathRoute::solver;
  if (name == "direct") return PathRoute::direct;
  throw DomainError("route must be auto, solver or direct, got '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (!(theta_true > 0.0)) throw DomainError("theta_true must be positive");
  if (!(dt > 0.0) || !(horizon > 0.0)) throw DomainError("T and dt must be positive");
  if (!(dt < horizon)) throw DomainError("dt must be smaller than T");
  if (replications < 1) throw DomainError("replications must be at least 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  if (kind == ExperimentKind::discrete_vs_continuous && !(discrete_delta && *discrete_delta > 0.0))
    throw DomainError("discrete_vs_continuous needs a positive discrete_delta");
  if (kind == ExperimentKind::initial_condition && !xi)
    throw DomainError("initial_condition needs xi");
  if (kind == ExperimentKind::mle && model.kind() != NoiseKind::brownian)
    throw UnsupportedModel("the mle experiment needs brownian noise");
}

McReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const Replicator rep(config);
  const std::size_t n = config.replications;
  std::vector<Outcome> outcomes(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    try {
      outcomes[i] = rep.run(i);
    } catch (const Error& e) {
      outcomes[i] = Outcome{};
      outcomes[i].error = e.what();
    }
  });

  McReport report;
  report.config = config;
  const bool has_secondary = config.kind != ExperimentKind::consistency &&
                             config.kind != ExperimentKind::normality &&
                             config.kind != ExperimentKind::initial_condition;
  std::size_t covered = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& o = outcomes[i];
    report.estimates.push_back(o.estimate);
    report.standardized.push_back(o.standardized);
    report.mean_squares.push_back(o.mean_square);
    if (has_secondary) report.secondary.push_back(o.secondary);
    if (config.kind == ExperimentKind::bias)
      report.secondary_mean_squares.push_back(o.secondary_mean_square);
    if (o.error) report.failures.push_back({i, Seed{config.master_seed, i}, *o.error});
    if (o.covered) ++covered;
  }
  if (static_cast<double>(report.failures.size()) > 0.01 * static_cast<double>(n)) {
    std::ostringstream os;
    os << report.failures.size() << " of " << n << " replications failed; first: replication "
       << report.failures.front().index << ": " << report.failures.front().message;
    throw ExperimentError(os.str());
  }

  const auto est = finite_values(report.estimates);
  if (!est.empty()) {
    report.mean = numerics::pairwise_sum(est) / static_cast<double>(est.size());
    std::vector<double> dev(est.size());
    for (std::size_t i = 0; i < est.size(); ++i) dev[i] = (est[i] - report.mean) * (est[i] - report.mean);
    report.sd = est.size() > 1
                    ? std::sqrt(numerics::pairwise_sum(dev) / static_cast<double>(est.size() - 1))
                    : 0.0;
    report.bias = report.mean - config.theta_true;
  }
  const auto z = finite_values(report.standardized);
  report.ks_distance = z.empty() ? 1.0 : ks_distance(z);
  report.coverage = static_cast<double>(covered) / static_cast<double>(n);
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

double ks_distance(std::span<const double> sample) {
  if (sample.empty()) throw DomainError("ks_distance needs a nonempty sample");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = numerics::normal_cdf(s[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f),
                  std::abs(static_cast<double>(i) / n - f)});
  }
  return d;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!first) first = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j{
      {"kind", to_string(c.kind)},
      {"model", c.model},
      {"theta_true", c.theta_true},
      {"T", c.horizon},
      {"dt", c.dt},
      {"replications", c.replications},
      {"master_seed", c.master_seed},
      {"standardize_with", to_string(c.standardize_with)},
      {"route", to_string(c.route)},
      {"alpha", c.alpha},
  };
  j["discrete_delta"] = c.discrete_delta ? nlohmann::json(*c.discrete_delta) : nlohmann::json();
  j["xi"] = c.xi ? nlohmann::json(*c.xi) : nlohmann::json();
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& root) {
  const nlohmann::json& j = root.contains("experiment") ? root.at("experiment") : root;
  if (!j.is_object()) throw DomainError("experiment configuration must be a table");
  static const std::vector<std::string> known{
      "kind",  "model",          "theta_true", "T",  "dt", "replications", "master_seed",
      "route", "standardize_with", "alpha",    "xi", "discrete_delta"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw DomainError("unknown experiment key '" + key + "'");
  }
  const auto number = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_number()) throw DomainError(std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
  };
  const auto required = [&](const char* key) {
    auto v = number(key);
    if (!v) throw DomainError(std::string("experiment configuration needs '") + key + "'");
    return *v;
  };
  const auto text = [&](const char* key, const char* fallback) {
    if (!j.contains(key)) return std::string(fallback);
    if (!j.at(key).is_string()) throw DomainError(std::string("'") + key + "' must be a string");
    return j.at(key).get<std::string>();
  };
  const auto count = [&](const char* key) -> std::uint64_t {
    if (!j.contains(key)) throw DomainError(std::string("experiment configuration needs '") + key + "'");
    const auto& v = j.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
    throw DomainError(std::string("'") + key + "' must be a nonnegative integer");
  };

  ExperimentConfig c;
  c.kind = experiment_kind_from_string(text("kind", "consistency"));
  if (!j.contains("model")) throw DomainError("experiment configuration needs a 'model' table");
  c.model = model_from_json(j.at("model"));
  c.theta_true = required("theta_true");
  c.horizon = required("T");
  c.dt = required("dt");
  c.replications = count("replications");
  c.master_seed = count("master_seed");
  c.route = path_route_from_string(text("route", "auto"));
  c.standardize_with = standardization_from_string(text("standardize_with", "plug_in"));
  if (auto a = number("alpha")) c.alpha = *a;
  c.xi = number("xi");
  c.discrete_delta = number("discrete_delta");
  c.validate();
  return c;
}

nlohmann::json report_to_json(const McReport& r, bool include_wall_time) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = config_to_json(r.config);
  j["estimates"] = nullable_array(r.estimates);
  j["standardized"] = nullable_array(r.standardized);
  j["secondary"] = nullable_array(r.secondary);
  j["mean_squares"] = nullable_array(r.mean_squares);
  j["secondary_mean_squares"] = nullable_array(r.secondary_mean_squares);
  j["ks_distance"] = r.ks_distance;
  j["mean"] = r.mean;
  j["sd"] = r.sd;
  j["bias"] = r.bias;
  j["coverage"] = r.coverage;
  auto failures = nlohmann::json::array();
  for (const auto& f : r.failures)
    failures.push_back({{"index", f.index}, {"seed", f.seed.seed}, {"stream", f.seed.stream},
                        {"message", f.message}});
  j["failures"] = std::move(failures);
  if (include_wall_time && r.wall_time) j["wall_time"] = *r.wall_time;
  return j;
}

}  // namespace langest
