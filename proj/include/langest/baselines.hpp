#pragma once

#include "langest/noise_model.hpp"
#include "langest/sampler.hpp"

namespace langest {

/// Least-squares type estimator through the Ito-type identity
///   int_0^T X dX = X_T^2 / 2 - E[X_T^2] / 2,
/// theta = -(X_T^2 / 2 - gamma_{theta_ref}(T, T) / 2) / int_0^T X^2 dt.
/// Under ergodicity this tends to 0, not to theta.
double lse_ito(const PathSample& path, const NoiseModel& model, double theta_ref);

/// Brownian-noise maximum likelihood estimator
///   -sum_k X_{t_k} (X_{t_{k+1}} - X_{t_k}) / int_0^T X^2 dt.
double mle_brownian(const PathSample& path, const NoiseModel& model);

}  // namespace langest
