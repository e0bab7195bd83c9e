#include "langest/sampler.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "langest/errors.hpp"

namespace langest {

namespace {

std::size_t next_power_of_two(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

void require_cholesky_size(std::size_t points, const char* what) {
  if (points > kMaxCholeskyPoints) {
    std::ostringstream os;
    os << what << ": " << points << " points exceed the Cholesky limit of " << kMaxCholeskyPoints;
    throw SimulationError(os.str());
  }
}

Eigen::MatrixXd toeplitz(const std::vector<double>& c, std::size_t n) {
  Eigen::MatrixXd m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) m(j, k) = c[j > k ? j - k : k - j];
  return m;
}

}  // namespace

Grid::Grid(double dt_, std::size_t n_) : dt(dt_), n(n_) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("grid step dt must be positive");
  if (n < 1) throw DomainError("grid needs n >= 1");
}

Grid Grid::over(double horizon, double dt) {
  if (!(dt > 0.0) || !(horizon > 0.0)) throw DomainError("grid needs positive horizon and dt");
  const double steps = std::round(horizon / dt);
  if (steps < 1.0) throw DomainError("grid horizon is shorter than one step");
  return Grid(dt, static_cast<std::size_t>(steps));
}

const char* to_string(PathKind kind) {
  switch (kind) {
    case PathKind::noise:
      return "g";
    case PathKind::zero_start:
      return "x";
    case PathKind::stationary:
      return "u";
  }
  return "?";
}

std::vector<double> increment_autocovariance(const NoiseModel& model, double dt,
                                             std::size_t count) {
  std::vector<double> c(count);
  for (std::size_t k = 0; k < count; ++k)
    c[k] = 0.5 * v_second_difference(model, static_cast<double>(k) * dt, dt);
  return c;
}

GaussianVectorSampler::GaussianVectorSampler(const Eigen::MatrixXd& covariance) {
  const auto n = covariance.rows();
  if (n == 0 || covariance.cols() != n)
    throw SimulationError("covariance matrix must be square and nonempty");
  const double scale = covariance.trace() / static_cast<double>(n);
  for (double level : {0.0, 1e-12, 1e-10}) {
    Eigen::MatrixXd c = covariance;
    if (level > 0.0) c.diagonal().array() += level * scale;
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().allFinite()) {
      factor_ = llt.matrixL();
      jitter_ = level * scale;
      return;
    }
  }
  throw SimulationError("covariance matrix is not positive definite even with jitter");
}

Eigen::VectorXd GaussianVectorSampler::sample(Philox& rng) const {
  Eigen::VectorXd z(factor_.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.next_normal();
  return factor_.triangularView<Eigen::Lower>() * z;
}

NoiseSampler::NoiseSampler(NoiseModel model, Grid grid, NoiseRoute route)
    : model_(std::move(model)), grid_(grid), route_(route) {
  if (model_.flavor() != Flavor::increment)
    throw FlavorError("noise paths need an increment-flavor model, got " + model_.describe());
  if (grid_.n > kMaxCirculantPoints) throw SimulationError("grid exceeds the circulant size limit");

  if (route_ == NoiseRoute::automatic && model_.kind() == NoiseKind::brownian) {
    iid_ = true;
    route_ = NoiseRoute::circulant;
    return;
  }
  if (route_ == NoiseRoute::cholesky) {
    require_cholesky_size(grid_.n, "noise sampler");
    cholesky_.emplace(toeplitz(increment_autocovariance(model_, grid_.dt, grid_.n), grid_.n));
    return;
  }

  const std::size_t m = next_power_of_two(2 * grid_.n);
  const auto c = increment_autocovariance(model_, grid_.dt, m / 2 + 1);
  std::vector<std::complex<double>> row(m), lambda;
  for (std::size_t k = 0; k < m; ++k) row[k] = c[k <= m / 2 ? k : m - k];
  Eigen::FFT<double> fft;
  fft.fwd(lambda, row);

  double max_eig = 0.0;
  double min_eig = 0.0;
  for (const auto& l : lambda) {
    max_eig = std::max(max_eig, l.real());
    min_eig = std::min(min_eig, l.real());
  }
  if (min_eig < -1e-10 * max_eig) {
    if (route_ == NoiseRoute::circulant || grid_.n > kMaxCholeskyPoints) {
      std::ostringstream os;
      os << "circulant embedding has a negative eigenvalue " << min_eig << " for "
         << model_.describe();
      throw SimulationError(os.str());
    }
    route_ = NoiseRoute::cholesky;
    cholesky_.emplace(toeplitz(increment_autocovariance(model_, grid_.dt, grid_.n), grid_.n));
    return;
  }
  route_ = NoiseRoute::circulant;
  spectrum_sqrt_.resize(m);
  for (std::size_t k = 0; k < m; ++k)
    spectrum_sqrt_[k] = std::sqrt(std::max(lambda[k].real(), 0.0) / static_cast<double>(m));
}

std::vector<double> NoiseSampler::sample_increments(Philox& rng) const {
  const std::size_t n = grid_.n;
  std::vector<double> out(n);
  if (iid_) {
    const double sd = std::sqrt(grid_.dt);
    for (auto& x : out) x = sd * rng.next_normal();
    return out;
  }
  if (cholesky_) {
    const Eigen::VectorXd z = cholesky_->sample(rng);
    for (std::size_t k = 0; k < n; ++k) out[k] = z[static_cast<Eigen::Index>(k)];
    return out;
  }
  const std::size_t m = spectrum_sqrt_.size();
  std::vector<std::complex<double>> w(m), z;
  for (std::size_t k = 0; k < m; ++k) {
    const double a = rng.next_normal();
    const double b = rng.next_normal();
    w[k] = spectrum_sqrt_[k] * std::complex<double>(a, b);
  }
  Eigen::FFT<double> fft;
  fft.fwd(z, w);
  for (std::size_t k = 0; k < n; ++k) out[k] = z[k].real();
  return out;
}

PathSample NoiseSampler::sample(Seed seed) const {
  Philox rng(seed.seed, seed.stream);
  const auto inc = sample_increments(rng);
  PathSample p{grid_, std::vector<double>(grid_.n + 1, 0.0), model_, std::nullopt, seed,
               PathKind::noise};
  double acc = 0.0;
  for (std::size_t k = 0; k < grid_.n; ++k) {
    acc += inc[k];
    p.values[k + 1] = acc;
  }
  return p;
}

PathSample sample_noise_increments(const NoiseModel& model, const Grid& grid, Seed seed,
                                   NoiseRoute route) {
  return NoiseSampler(model, grid, route).sample(seed);
}

std::vector<double> stationary_autocovariance(const KernelContext& ctx, const Grid& grid) {
  std::vector<double> r(grid.n + 1);
  for (std::size_t k = 0; k <= grid.n; ++k) r[k] = k == 0 ? ctx.psi() : ctx.r(grid.at(k));
  return r;
}

Eigen::MatrixXd stationary_covariance(const KernelContext& ctx, const Grid& grid) {
  require_cholesky_size(grid.n + 1, "stationary covariance");
  return toeplitz(stationary_autocovariance(ctx, grid), grid.n + 1);
}

Eigen::MatrixXd zero_start_covariance(const KernelContext& ctx, const Grid& grid) {
  require_cholesky_size(grid.n, "zero-start covariance");
  const auto r = stationary_autocovariance(ctx, grid);
  const double theta = ctx.theta();
  std::vector<double> decay(grid.n + 1);
  for (std::size_t k = 0; k <= grid.n; ++k) decay[k] = std::exp(-theta * grid.at(k));
  const std::size_t n = grid.n;
  Eigen::MatrixXd m(n, n);
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t k = 1; k <= n; ++k) {
      m(j - 1, k - 1) = r[j > k ? j - k : k - j] + decay[j] * decay[k] * r[0] -
                        decay[j] * r[k] - decay[k] * r[j];
    }
  }
  return m;
}

PathSample sample_X_direct(const KernelContext& ctx, const Grid& grid, Seed seed) {
  const GaussianVectorSampler sampler(zero_start_covariance(ctx, grid));
  Philox rng(seed.seed, seed.stream);
  const Eigen::VectorXd z = sampler.sample(rng);
  PathSample p{grid, std::vector<double>(grid.n + 1, 0.0), ctx.model(), ctx.theta(), seed,
               PathKind::zero_start};
  for (std::size_t k = 0; k < grid.n; ++k) p.values[k + 1] = z[static_cast<Eigen::Index>(k)];
  return p;
}

PathSample sample_U_stationary(const KernelContext& ctx, const Grid& grid, Seed seed) {
  const GaussianVectorSampler sampler(stationary_covariance(ctx, grid));
  Philox rng(seed.seed, seed.stream);
  const Eigen::VectorXd z = sampler.sample(rng);
  PathSample p{grid, std::vector<double>(z.data(), z.data() + z.size()), ctx.model(),
               ctx.theta(), seed, PathKind::stationary};
  return p;
}

}  // namespace langest
