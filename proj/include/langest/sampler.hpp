#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "langest/kernel.hpp"
#include "langest/noise_model.hpp"
#include "langest/rng.hpp"

namespace langest {

/// Uniform grid t_k = k dt, k = 0..n.
struct Grid {
  double dt = 1.0;
  std::size_t n = 1;

  Grid() = default;
  Grid(double dt, std::size_t n);
  /// Grid with n = round(horizon / dt).
  static Grid over(double horizon, double dt);

  double horizon() const noexcept { return dt * static_cast<double>(n); }
  double at(std::size_t k) const noexcept { return dt * static_cast<double>(k); }
};

enum class PathKind { noise, zero_start, stationary };

const char* to_string(PathKind kind);

/// (seed, stream) pair addressing an independent random stream.
struct Seed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct PathSample {
  Grid grid;
  std::vector<double> values;  // n + 1 entries
  NoiseModel model;
  std::optional<double> theta;
  Seed seed;
  PathKind kind = PathKind::noise;
};

enum class NoiseRoute { automatic, circulant, cholesky };

/// Autocovariance of the increments G_{(k+1)dt} - G_{k dt} at lags 0..count-1.
std::vector<double> increment_autocovariance(const NoiseModel& model, double dt,
                                             std::size_t count);

/// Draws from N(0, C) for a fixed covariance C, factorized once.
///
/// The factorization retries with diagonal jitter 1e-12 and 1e-10 times
/// trace/n before giving up with SimulationError.
class GaussianVectorSampler {
 public:
  explicit GaussianVectorSampler(const Eigen::MatrixXd& covariance);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(factor_.rows()); }
  double jitter() const noexcept { return jitter_; }
  Eigen::VectorXd sample(Philox& rng) const;

 private:
  Eigen::MatrixXd factor_;  // lower triangular
  double jitter_ = 0.0;
};

/// Reusable noise generator for one (model, grid): the circulant spectrum or
/// the Cholesky factor is computed once and shared by every draw.
class NoiseSampler {
 public:
  NoiseSampler(NoiseModel model, Grid grid, NoiseRoute route = NoiseRoute::automatic);

  /// Route actually in use (never automatic).
  NoiseRoute route() const noexcept { return route_; }
  PathSample sample(Seed seed) const;
  /// Increments only, n values.
  std::vector<double> sample_increments(Philox& rng) const;

 private:
  NoiseModel model_;
  Grid grid_;
  NoiseRoute route_;
  std::vector<double> spectrum_sqrt_;  // sqrt(lambda_k / M), circulant route
  std::optional<GaussianVectorSampler> cholesky_;
  bool iid_ = false;  // brownian: independent increments
};

/// Noise path G on the grid (values[0] = 0). The automatic route uses
/// circulant embedding of the increment sequence and falls back to Cholesky
/// (n <= 4096) when the embedding has a materially negative eigenvalue.
PathSample sample_noise_increments(const NoiseModel& model, const Grid& grid, Seed seed,
                                   NoiseRoute route = NoiseRoute::automatic);

/// Zero-start solution X sampled directly from its covariance gamma. n <= 4096.
PathSample sample_X_direct(const KernelContext& ctx, const Grid& grid, Seed seed);

/// Stationary solution U sampled from r(|t_j - t_k|). n <= 4096.
PathSample sample_U_stationary(const KernelContext& ctx, const Grid& grid, Seed seed);

/// r(k dt) for k = 0..n.
std::vector<double> stationary_autocovariance(const KernelContext& ctx, const Grid& grid);

/// Covariance matrix of (X_{t_1}, ..., X_{t_n}) built from r on the grid lattice.
Eigen::MatrixXd zero_start_covariance(const KernelContext& ctx, const Grid& grid);
/// Covariance matrix of (U_{t_0}, ..., U_{t_n}).
Eigen::MatrixXd stationary_covariance(const KernelContext& ctx, const Grid& grid);

inline constexpr std::size_t kMaxCholeskyPoints = 4096;
inline constexpr std::size_t kMaxCirculantPoints = std::size_t{1} << 22;

}  // namespace langest
