#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "langest/noise_model.hpp"
#include "langest/sampler.hpp"

namespace langest {

enum class ExperimentKind {
  consistency,
  normality,
  bias,
  lse_decay,
  discrete_vs_continuous,
  initial_condition,
  mle,
};

enum class Standardization { plug_in, true_theta };

/// How the zero-start path is produced: from a noise path through the solver,
/// or directly from its covariance. automatic picks the solver for
/// increment-flavor models and the direct route otherwise.
enum class PathRoute { automatic, solver, direct };

std::string to_string(ExperimentKind kind);
std::string to_string(Standardization s);
std::string to_string(PathRoute route);
ExperimentKind experiment_kind_from_string(const std::string& name);
Standardization standardization_from_string(const std::string& name);
PathRoute path_route_from_string(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::consistency;
  NoiseModel model;
  double theta_true = 1.0;
  double horizon = 10.0;
  double dt = 0.01;
  std::size_t replications = 100;
  std::uint64_t master_seed = 0;
  std::optional<double> discrete_delta;  // discrete_vs_continuous
  std::optional<double> xi;              // initial_condition
  Standardization standardize_with = Standardization::plug_in;
  PathRoute route = PathRoute::automatic;
  double alpha = 0.05;

  /// Throws DomainError on an inconsistent configuration.
  void validate() const;
};

struct ReplicationFailure {
  std::size_t index = 0;
  Seed seed;
  std::string message;
};

/// Per-replication results are indexed by replication; failed replications
/// hold NaN (null in JSON).
struct McReport {
  ExperimentConfig config;
  /// Primary estimator of the experiment (AE, LSE, MLE or discrete AE).
  std::vector<double> estimates;
  /// (theta_hat - theta) |psi'| / sqrt(w(T)) for the continuous AE of the same path.
  std::vector<double> standardized;
  /// Companion estimate on the same path: SAE (bias), continuous AE
  /// (lse_decay, mle, discrete_vs_continuous). Empty otherwise.
  std::vector<double> secondary;
  /// Mean square of the observed path (= psi of the AE).
  std::vector<double> mean_squares;
  /// Mean square of the stationary path (bias experiment only).
  std::vector<double> secondary_mean_squares;
  std::vector<ReplicationFailure> failures;
  double ks_distance = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  double bias = 0.0;
  /// Fraction of replications whose plug-in interval covers theta_true.
  double coverage = 0.0;
  std::optional<double> wall_time;  // seconds
};

struct RunOptions {
  unsigned threads = 1;
};

/// Runs config.replications independent replications; replication i uses the
/// stream (master_seed, i). The report is identical for any thread count.
/// Throws ExperimentError when more than 1% of the replications fail.
McReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Kolmogorov-Smirnov distance between the empirical CDF of sample and Phi.
double ks_distance(std::span<const double> sample);

/// Calls body(i) for i in [0, count) on up to threads workers. Work is
/// assigned by index, so results written per index do not depend on the
/// schedule. The first exception thrown by body is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json config_to_json(const ExperimentConfig& config);
/// Accepts either {"experiment": {...}} or the experiment table itself.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const McReport& report, bool include_wall_time = false);

}  // namespace langest
