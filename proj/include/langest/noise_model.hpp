#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace langest {

enum class NoiseKind { brownian, fbm, mixed, lamperti_fbm, lamperti_bifbm };

/// "increment" models are described by their variance function v; "stationary"
/// models carry a closed-form stationary autocovariance instead.
enum class Flavor { increment, stationary };

/// Declarative description of the driving noise G.
///
/// Increment-flavor kinds (brownian, fbm, mixed) expose the variance function
/// v(t) = Var(G_t). The lamperti kinds are stationary solutions obtained from
/// self-similar processes by the inverse Lamperti transform and carry no v.
class NoiseModel {
 public:
  /// Brownian motion.
  NoiseModel() = default;

  static NoiseModel brownian();
  static NoiseModel fbm(double hurst);
  /// Sum of independent increment-flavor noises.
  static NoiseModel mixed(std::vector<NoiseModel> components);
  static NoiseModel lamperti_fbm(double hurst);
  static NoiseModel lamperti_bifbm(double hurst, double kappa);

  NoiseKind kind() const noexcept { return kind_; }
  double hurst() const noexcept { return hurst_; }
  double kappa() const noexcept { return kappa_; }
  const std::vector<NoiseModel>& components() const noexcept { return components_; }

  Flavor flavor() const noexcept;
  /// H for fbm (1/2 for brownian), min over components for mixed, H*K for
  /// lamperti models.
  double holder_index() const noexcept;
  /// Self-similarity index H' of the underlying process of a lamperti model.
  double self_similarity() const;

  std::string describe() const;

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;

 private:
  NoiseKind kind_ = NoiseKind::brownian;
  double hurst_ = 0.5;
  double kappa_ = 1.0;
  std::vector<NoiseModel> components_;
};

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

/// v(t); t must be nonnegative.
double eval_v(const NoiseModel& model, double t);

/// g(t,s) = [v(|t|) + v(|s|) - v(|t-s|)] / 2, the covariance of the two-sided
/// extension of G.
double eval_g(const NoiseModel& model, double t, double s);

/// v(t + h) + v(|t - h|) - 2 v(t) for t, h >= 0, free of the cancellation of
/// the naive form when h << t.
double v_second_difference(const NoiseModel& model, double t, double h);

/// Variance function as a callable; throws FlavorError for stationary models.
std::function<double(double)> variance_function(const NoiseModel& model);

struct ValidationCheck {
  std::string name;
  bool applicable = true;
  bool passed = true;
  std::optional<double> witness;  // grid point where the check failed
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool ok() const;
  const ValidationCheck* find(const std::string& name) const;
};

/// The grid used by the v checks: 200 log-spaced points on [1e-4, 1e2]
/// merged with the integers 1..100.
const std::vector<double>& validation_grid();

/// v(0) = 0 and strict increase along the validation grid.
ValidationCheck check_monotone(const std::function<double(double)>& v);

/// v(t) <= C t^2 on the grid points t >= 1, with C = 2 (v(1) + 1).
ValidationCheck check_quadratic_growth(const std::function<double(double)>& v);

/// v(t) <= C t^(2H - eps) on the grid points t <= 1, with C = 2 (v(1) + 1).
ValidationCheck check_holder(const std::function<double(double)>& v, double holder,
                             double eps = 0.01);

/// Runs every applicable check. Failures are reported, never thrown.
ValidationReport validate_variance_function(const std::function<double(double)>& v,
                                            double holder);
ValidationReport validate_model(const NoiseModel& model);

void to_json(nlohmann::json& j, const NoiseModel& model);
void from_json(const nlohmann::json& j, NoiseModel& model);
NoiseModel model_from_json(const nlohmann::json& j);

}  // namespace langest
