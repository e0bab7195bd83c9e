#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "langest/errors.hpp"
#include "langest/kernel.hpp"
#include "langest/numerics.hpp"
#include "support.hpp"

using namespace langest;
using testsupport::rel_err;

namespace {

std::vector<NoiseModel> all_models() {
  return {NoiseModel::brownian(),
          NoiseModel::fbm(0.3),
          NoiseModel::fbm(0.5),
          NoiseModel::fbm(0.7),
          NoiseModel::fbm(0.9),
          NoiseModel::mixed({NoiseModel::brownian(), NoiseModel::fbm(0.7)}),
          NoiseModel::lamperti_fbm(0.7),
          NoiseModel::lamperti_bifbm(0.6, 0.8)};
}

// The double integral of the r proposition with the signs as printed:
//   A - B,  A = int_0^inf e^{-x} g(t, -x/theta) dx,
//           B = int int e^{-x-y} g(t - x/theta, -y/theta) dx dy.
// Evaluated here for Brownian noise directly from g = min on each half line.
double printed_sign_form_brownian(double theta, double t) {
  const auto g = [](double a, double b) {
    return 0.5 * (std::abs(a) + std::abs(b) - std::abs(a - b));
  };
  const auto a = numerics::integrate_half_line(
      [&](double x) { return std::exp(-x) * g(t, -x / theta); });
  const auto inner = [&](double x) {
    const double u = t - x / theta;
    const double kink = theta * std::abs(u);
    const auto f = [&](double y) { return std::exp(-y) * g(u, -y / theta); };
    return numerics::integrate_interval(f, 0.0, kink).value +
           numerics::integrate_half_line([&](double y) { return f(kink + y); }).value;
  };
  const double b_low = numerics::integrate_interval(
      [&](double x) { return std::exp(-x) * inner(x); }, 0.0, theta * t).value;
  const double b_high = numerics::integrate_half_line(
      [&](double x) { return std::exp(-(theta * t + x)) * inner(theta * t + x); }).value;
  return a.value - (b_low + b_high);
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("psi examples") {
  CHECK(psi_of(NoiseModel::brownian(), 2.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(psi_of(NoiseModel::fbm(0.75), 1.0) == doctest::Approx(0.75 * std::tgamma(1.5)).epsilon(1e-14));
  CHECK(psi_of(NoiseModel::fbm(0.75), 1.0) == doctest::Approx(0.6646702).epsilon(1e-7));
  CHECK(psi_of(NoiseModel::lamperti_bifbm(0.6, 0.8), 1.0) == doctest::Approx(0.494301).epsilon(1e-6));
  CHECK(psi_of(NoiseModel::lamperti_fbm(0.7), 2.0) == doctest::Approx(std::pow(0.35, 1.4)).epsilon(1e-14));
  CHECK_THROWS_AS(psi_of(NoiseModel::brownian(), 0.0), DomainError);
}

TEST_CASE("psi quadrature matches the Gamma closed form") {
  for (double h : {0.1, 0.3, 0.5, 0.75, 0.95}) {
    for (double theta : {0.5, 1.0, 2.0, 10.0}) {
      const auto m = NoiseModel::fbm(h);
      const double closed = h * std::tgamma(2.0 * h) * std::pow(theta, -2.0 * h);
      CHECK(rel_err(psi_quadrature(m, theta), closed) <= 1e-10);
    }
  }
  const auto mixed = NoiseModel::mixed({NoiseModel::fbm(0.3), NoiseModel::fbm(0.8)});
  CHECK(rel_err(psi_quadrature(mixed, 1.7), psi_of(mixed, 1.7)) <= 1e-10);
  CHECK_THROWS_AS(psi_quadrature(NoiseModel::lamperti_fbm(0.5), 1.0), FlavorError);
}

TEST_CASE("psi derivative examples") {
  const auto b = psi_derivatives_of(NoiseModel::brownian(), 1.0);
  CHECK(b.first == doctest::Approx(-0.5));
  CHECK(b.second == doctest::Approx(1.0));
  const auto f = psi_derivatives_of(NoiseModel::fbm(0.75), 1.0);
  CHECK(f.first == doctest::Approx(-1.5 * 0.75 * std::tgamma(1.5)).epsilon(1e-13));
  CHECK(f.first == doctest::Approx(-0.9970053).epsilon(1e-7));
}

TEST_CASE("analytic derivatives agree with finite differences of quadrature psi") {
  for (const auto& m : all_models()) {
    for (double theta : {0.3, 1.0, 4.0}) {
      const auto exact = psi_derivatives_of(m, theta);
      const bool increment = m.flavor() == Flavor::increment;
      const auto fd = psi_derivatives_finite_difference(m, theta, increment);
      INFO(m.describe(), " theta=", theta);
      CHECK(rel_err(fd.first, exact.first) <= 1e-7);
      CHECK(rel_err(fd.second, exact.second) <= 1e-4);
      CHECK(exact.first < 0.0);
      CHECK(exact.second >= 0.0);
    }
  }
}

TEST_CASE("psi is strictly decreasing") {
  for (const auto& m : all_models()) {
    double prev = psi_of(m, 0.01);
    for (double theta = 0.02; theta < 50.0; theta *= 1.3) {
      const double p = psi_of(m, theta);
      CHECK(p < prev);
      CHECK(p > 0.0);
      prev = p;
    }
  }
}

TEST_CASE("psi_inverse") {
  CHECK(psi_inverse(NoiseModel::brownian(), 0.25) == doctest::Approx(2.0).epsilon(1e-12));
  for (const auto& m : all_models()) {
    for (double theta : {0.1, 1.0, 7.0}) {
      const double y = psi_of(m, theta);
      const double back = psi_inverse(m, y);
      CHECK(back == doctest::Approx(theta).epsilon(1e-9));
      CHECK(std::abs(psi_of(m, back) - y) <= 1e-10 * std::max(1.0, y));
    }
  }
  CHECK_THROWS_AS(psi_inverse(NoiseModel::brownian(), -0.1), EstimateOutOfRange);
  try {
    psi_inverse(NoiseModel::brownian(), 1e30);
    FAIL("expected EstimateOutOfRange");
  } catch (const EstimateOutOfRange& e) {
    CHECK(e.value() == 1e30);
    CHECK(e.psi_at_lo() < 1e30);
    CHECK(e.psi_at_hi() > 0.0);
  }
}

TEST_CASE("Brownian r and its quadrature oracles") {
  const KernelContext ctx(NoiseModel::brownian(), 1.0);
  CHECK(ctx.r(1.0) == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-15));
  CHECK(ctx.r(1.0) == doctest::Approx(0.1839397).epsilon(1e-6));
  for (double theta : {0.5, 2.0}) {
    for (double t : {0.0, 0.7, 3.0}) {
      const double exact = std::exp(-theta * t) / (2.0 * theta);
      CHECK(std::abs(r_stationary_quadrature(NoiseModel::brownian(), theta, t) - exact) <= 1e-12);
      CHECK(std::abs(r_double_quadrature(NoiseModel::brownian(), theta, t) - exact) <= 1e-10);
    }
  }
}

TEST_CASE("the printed sign form of the r proposition equals -r") {
  for (double theta : {0.5, 1.0, 2.0}) {
    for (double t : {0.0, 0.5, 2.0}) {
      const double r = std::exp(-theta * t) / (2.0 * theta);
      CHECK(printed_sign_form_brownian(theta, t) == doctest::Approx(-r).epsilon(1e-8));
    }
  }
}

TEST_CASE("one-dimensional reduction agrees with the double integral") {
  for (double h : {0.3, 0.7}) {
    const auto m = NoiseModel::fbm(h);
    for (double t : {0.0, 0.25, 1.0, 4.0}) {
      INFO("H=", h, " t=", t);
      CHECK(rel_err(r_double_quadrature(m, 1.3, t), r_stationary_quadrature(m, 1.3, t)) <= 1e-7);
    }
  }
}

TEST_CASE("r(0) = psi") {
  for (const auto& m : all_models()) {
    for (double theta : {0.5, 1.0, 3.0}) {
      const KernelContext ctx(m, theta);
      INFO(m.describe(), " theta=", theta);
      CHECK(rel_err(ctx.r(0.0), ctx.psi()) <= 1e-6);
    }
  }
  CHECK(rel_err(r_double_quadrature(NoiseModel::fbm(0.7), 1.0, 0.0),
                psi_quadrature(NoiseModel::fbm(0.7), 1.0)) <= 1e-6);
}

TEST_CASE("|r(t)| <= r(0) on [0, 50]") {
  for (const auto& m : all_models()) {
    const KernelContext ctx(m, 1.0);
    const double r0 = ctx.r(0.0);
    for (double t = 0.0; t <= 50.0; t += 0.37) CHECK(std::abs(ctx.r(t)) <= r0 * (1.0 + 1e-12));
  }
}

TEST_CASE("fractional OU r approaches its asymptote") {
  const KernelContext ctx(NoiseModel::fbm(0.7), 1.0);
  const double ratio = ctx.r(50.0) / (0.28 * std::pow(50.0, -0.6));
  CHECK(ratio >= 0.9);
  CHECK(ratio <= 1.1);
  CHECK(ctx.r(50.0) == doctest::Approx(0.0268).epsilon(0.1));
  // The gap to the asymptote keeps shrinking.
  const double at200 = ctx.r(200.0) / fou_r_asymptote(0.7, 1.0, 200.0);
  CHECK(std::abs(at200 - 1.0) < std::abs(ratio - 1.0));
  // H < 1/2: r eventually negative, like the asymptote.
  const KernelContext rough(NoiseModel::fbm(0.3), 2.0);
  CHECK(rough.r(20.0) < 0.0);
  CHECK(rel_err(rough.r(100.0), fou_r_asymptote(0.3, 2.0, 100.0)) < 0.02);
}

TEST_CASE("fou_r_asymptote examples") {
  CHECK(fou_r_asymptote(0.75, 1.0, 100.0) == doctest::Approx(0.0375));
  CHECK(fou_r_asymptote(0.25, 2.0, 10.0) == doctest::Approx(-9.8821e-4).epsilon(1e-4));
  CHECK(fou_r_asymptote(0.4, 1.0, 3.0) < 0.0);
  CHECK(fou_r_asymptote(0.6, 1.0, 3.0) > 0.0);
  CHECK_THROWS_AS(fou_r_asymptote(0.5, 1.0, 3.0), DomainError);
  CHECK_THROWS_AS(fou_r_asymptote(0.6, 1.0, 0.0), DomainError);
}

TEST_CASE("mixed r is the sum of the component r's") {
  const auto a = NoiseModel::fbm(0.3);
  const auto b = NoiseModel::fbm(0.7);
  const KernelContext mixed(NoiseModel::mixed({a, NoiseModel::brownian(), b}), 1.5);
  const KernelContext ca(a, 1.5), cb(b, 1.5), cw(NoiseModel::brownian(), 1.5);
  for (double t : {0.0, 0.1, 1.0, 5.0, 30.0}) {
    const double sum = ca.r(t) + cb.r(t) + cw.r(t);
    CHECK(rel_err(mixed.r(t), sum) <= 1e-6);
  }
}

TEST_CASE("gamma_cov examples and decay bound") {
  const KernelContext b(NoiseModel::brownian(), 1.0);
  for (double t : {0.1, 1.0, 4.0}) CHECK(b.gamma(t, t) == doctest::Approx(0.5 * (1.0 - std::exp(-2.0 * t))));
  for (const auto& m : all_models()) {
    const KernelContext ctx(m, 1.0);
    CHECK(std::abs(ctx.gamma(0.0, 2.5)) <= 1e-14);
    for (double t : {0.5, 3.0, 9.0}) {
      for (double s : {0.2, 3.0, 12.0}) {
        const double bound = 3.0 * ctx.r(0.0) * std::exp(-std::min(t, s));
        CHECK(std::abs(ctx.gamma(t, s) - ctx.r(std::abs(t - s))) <= bound);
        CHECK(ctx.gamma(t, s) == doctest::Approx(ctx.gamma(s, t)).epsilon(1e-14));
      }
    }
  }
  const KernelContext f(NoiseModel::fbm(0.7), 1.0);
  const double expected = f.r(0.0) * (1.0 + std::exp(-40.0)) - 2.0 * std::exp(-20.0) * f.r(20.0);
  CHECK(std::abs(gamma_cov(f, 20.0, 20.0) - expected) <= 1e-6);
}

TEST_CASE("zero-start covariance matrices are positive semidefinite") {
  for (const auto& m : all_models()) {
    const KernelContext ctx(m, 1.0);
    constexpr int n = 64;
    const double dt = 0.15;
    std::vector<double> r(n + 1);
    for (int k = 0; k <= n; ++k) r[k] = ctx.r(dt * k);
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double ei = std::exp(-dt * (i + 1)), ej = std::exp(-dt * (j + 1));
        g(i, j) = r[std::abs(i - j)] + ei * ej * r[0] - ei * r[j + 1] - ej * r[i + 1];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    INFO(m.describe());
    CHECK(es.eigenvalues().minCoeff() >= -1e-8 * ctx.psi());
  }
}

TEST_CASE("second-kind models decay exponentially") {
  for (const auto& m : {NoiseModel::lamperti_fbm(0.7), NoiseModel::lamperti_bifbm(0.6, 0.8)}) {
    const KernelContext ctx(m, 1.0);
    double prev = ctx.r(1.0);
    for (double t = 2.0; t <= 10.0; t += 1.0) {
      const double r = ctx.r(t);
      CHECK(r > 0.0);
      CHECK(r < prev);
      prev = r;
    }
    const double slope = (std::log(ctx.r(10.0)) - std::log(ctx.r(1.0))) / 9.0;
    CHECK(slope < 0.0);
  }
  // lamperti-fbm decays like exp(-theta t (1/H - 1)).
  const double slope = (std::log(lamperti_r(0.7, 1.0, 1.0, 40.0)) - std::log(lamperti_r(0.7, 1.0, 1.0, 30.0))) / 10.0;
  CHECK(slope == doctest::Approx(-(1.0 / 0.7 - 1.0)).epsilon(1e-3));
}

TEST_CASE("lamperti covariance identities") {
  CHECK(lamperti_r(0.7, 1.0, 2.0, 0.0) == doctest::Approx(std::pow(0.35, 1.4)).epsilon(1e-14));
  CHECK(lamperti_r(0.6, 0.8, 1.0, 0.0) == doctest::Approx(std::pow(0.48, 0.96)).epsilon(1e-14));
  // H = 1/2, K = 1 is the Ornstein-Uhlenbeck covariance.
  CHECK(lamperti_r(0.5, 1.0, 1.0, 2.0) == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-12));
  // The appendix formula's value at 0 ignores theta.
  CHECK(bifractional_appendix_formula(0.6, 0.8, 1.0, 0.0) ==
        doctest::Approx(bifractional_appendix_formula(0.6, 0.8, 5.0, 0.0)));
}

}  // TEST_SUITE
