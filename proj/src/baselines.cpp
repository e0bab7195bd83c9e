#include "langest/baselines.hpp"

#include <cmath>

#include "langest/errors.hpp"
#include "langest/kernel.hpp"
#include "langest/numerics.hpp"

namespace langest {

namespace {

double integral_of_square(const PathSample& path) {
  if (path.values.size() < 2) throw DegenerateInput("path needs at least two points");
  std::vector<double> sq(path.values.size());
  for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = path.values[k] * path.values[k];
  const double s = numerics::trapezoid(sq, path.grid.dt);
  if (s == 0.0) throw DegenerateInput("path is identically zero");
  return s;
}

}  // namespace

double lse_ito(const PathSample& path, const NoiseModel& model, double theta_ref) {
  const double denom = integral_of_square(path);
  const double horizon = path.grid.dt * static_cast<double>(path.values.size() - 1);
  const KernelContext ctx(model, theta_ref);
  const double var_end = gamma_cov(ctx, horizon, horizon);
  const double x_end = path.values.back();
  return -(0.5 * x_end * x_end - 0.5 * var_end) / denom;
}

double mle_brownian(const PathSample& path, const NoiseModel& model) {
  if (model.kind() != NoiseKind::brownian)
    throw UnsupportedModel("the maximum likelihood estimator is implemented for brownian noise only");
  const double denom = integral_of_square(path);
  std::vector<double> terms(path.values.size() - 1);
  for (std::size_t k = 0; k + 1 < path.values.size(); ++k)
    terms[k] = path.values[k] * (path.values[k + 1] - path.values[k]);
  return -numerics::pairwise_sum(terms) / denom;
}

}  // namespace langest
