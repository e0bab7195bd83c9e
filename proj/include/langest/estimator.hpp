#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "langest/kernel.hpp"
#include "langest/sampler.hpp"

namespace langest {

struct EstimateResult {
  std::string method;  // "ae", "ae_discrete", "sae", "lse", "mle"
  double theta_hat = 0.0;
  double mean_square = 0.0;
  double horizon = 0.0;
  // Inference at theta_hat; absent when not requested or not applicable.
  std::optional<double> std_error;
  std::optional<std::pair<double, double>> ci;
  double alpha = 0.05;
  std::optional<double> be_rate;
  std::optional<bool> mesh_ok;
  std::vector<std::string> notes;
};

struct EstimateOptions {
  double alpha = 0.05;
  /// Compute std_error, ci and be_rate (costs one pass of r quadrature).
  bool inference = true;
};

/// psi^{-1} of the trapezoidal mean square (1/T) int_0^T x_t^2 dt.
EstimateResult ae_continuous(const PathSample& path, const NoiseModel& model,
                             const EstimateOptions& options = {});

/// psi^{-1}((1/N) sum_{k=1}^N x_{k delta}^2): observations are x at delta, 2 delta, ..., N delta.
EstimateResult ae_discrete(std::span<const double> observations, double delta,
                           const NoiseModel& model, const EstimateOptions& options = {});

/// The estimator applied to a stationary path.
EstimateResult sae(const PathSample& path, const NoiseModel& model,
                   const EstimateOptions& options = {});

/// Trapezoidal (1/T) int_0^T x_t^2 dt.
double mean_square(const PathSample& path);

struct MeshCheck {
  bool ok = false;
  double margin = 0.0;  // log(N delta_N^beta)
  double beta = 0.0;
};

/// N delta_N^beta <= 1 with beta = (2H + 1/2)/(H + 1/2) - delta.
MeshCheck check_mesh(double hurst, double delta, double n, double mesh);

/// E[psi(theta_T)] - psi(theta)
///   = (1/T)[psi (1 - e^{-2 theta T})/(2 theta) - 2 int_0^T e^{-theta t} r(t) dt].
double bias_expansion(const KernelContext& ctx, double horizon);

/// theta_hat -/+ z_{1-alpha/2} sqrt(w(T)) / |psi'(theta_hat)|, everything at theta_hat.
std::pair<double, double> confidence_interval(double theta_hat, const NoiseModel& model,
                                              double horizon, double alpha);

/// |psi'(theta)| / sqrt(w_theta(T)): the scale that makes (theta_hat - theta) standard normal.
double master_scale(const KernelContext& ctx, double horizon);

}  // namespace langest
