#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "fiid/core_math.hpp"

using namespace fiid;

namespace {

/// Exact (E[sigma_o Sigma_n], Var Sigma_n) for the tree-indexed chain, by
/// enumerating all spin configurations of B_radius with their probabilities.
struct ChainMoments {
  double root_cov = 0.0;
  double var = 0.0;
};

ChainMoments enumerate_chain(int d, double theta, int radius, int n) {
  // Breadth-first parent array of the ball.
  std::vector<int> parent{-1};
  std::vector<int> depth{0};
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (depth[v] == radius)
      continue;
    const int kids = v == 0 ? d : d - 1;
    for (int c = 0; c < kids; ++c) {
      parent.push_back(static_cast<int>(v));
      depth.push_back(depth[v] + 1);
    }
  }
  const std::size_t count = parent.size();
  const double keep = 0.5 * (1.0 + theta);
  double mean = 0.0, second = 0.0, cross = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << count); ++mask) {
    auto spin = [&](std::size_t v) { return (mask >> v) & 1u ? 1 : -1; };
    double p = 0.5;
    for (std::size_t v = 1; v < count; ++v)
      p *= spin(v) == spin(static_cast<std::size_t>(parent[v])) ? keep : 1.0 - keep;
    double sigma = 0.0;
    for (std::size_t v = 0; v < count; ++v)
      if (depth[v] == n)
        sigma += spin(v);
    mean += p * sigma;
    second += p * sigma * sigma;
    cross += p * sigma * spin(0);
  }
  return {cross, second - mean * mean};
}

} // namespace

TEST_CASE("spectral radius examples") {
  CHECK(spectral_radius(3) == doctest::Approx(0.9428090).epsilon(1e-7));
  CHECK(spectral_radius(4) == doctest::Approx(0.8660254).epsilon(1e-7));
  CHECK(spectral_radius(2) == doctest::Approx(1.0));
  CHECK(DegreeParams::make(3).rho_d == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0));
  CHECK_THROWS_AS(DegreeParams::make(1), std::domain_error);
}

TEST_CASE("sign flip probability examples") {
  CHECK(sign_flip_probability(0.0) == doctest::Approx(0.5));
  CHECK(sign_flip_probability(1.0) == 0.0);
  CHECK(sign_flip_probability(-0.9428090) == doctest::Approx(0.8918265).epsilon(1e-7));
  // Rounding slop just outside [-1, 1] is clamped, real violations are not.
  CHECK(sign_flip_probability(1.0 + 1e-13) == 0.0);
  CHECK(sign_flip_probability(-1.0 - 1e-13) == doctest::Approx(1.0));
  CHECK_THROWS_AS(sign_flip_probability(1.1), std::domain_error);
  CHECK_THROWS_AS(sign_flip_probability(std::nan("")), std::domain_error);
}

TEST_CASE("sign flip probability matches bivariate normal sampling") {
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  const int pairs = 1'000'000;
  for (double rho : {-0.9, 0.0, 0.5}) {
    const double s = std::sqrt(1.0 - rho * rho);
    int disagree = 0;
    for (int i = 0; i < pairs; ++i) {
      const double z1 = normal(rng);
      const double z2 = rho * z1 + s * normal(rng);
      disagree += (z1 > 0) != (z2 > 0);
    }
    const double p_hat = static_cast<double>(disagree) / pairs;
    const double se = std::sqrt(p_hat * (1.0 - p_hat) / pairs);
    CAPTURE(rho);
    CHECK(std::abs(p_hat - sign_flip_probability(rho)) < 4.0 * se);
  }
}

TEST_CASE("sign correlation is the arcsine law") {
  for (double rho : {-1.0, -0.3, 0.0, 0.6, 1.0})
    CHECK(sign_correlation(rho) == doctest::Approx(1.0 - 2.0 * sign_flip_probability(rho)));
}

TEST_CASE("bisection bounds") {
  CHECK(bisection_bound(3, CutMode::min) == doctest::Approx(0.1622602).epsilon(1e-7));
  CHECK(bisection_bound(3, CutMode::max) == doctest::Approx(1.3377398).epsilon(1e-7));
  CHECK(std::abs(bisection_bound(4, CutMode::min) - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(bisection_bound(4, CutMode::max) - 5.0 / 3.0) < 1e-12);
  CHECK_THROWS_AS(bisection_bound(2, CutMode::min), std::domain_error);
}

TEST_CASE("bisection bounds sum to d/2") {
  for (int d = 3; d <= 40; ++d)
    CHECK(bisection_bound(d, CutMode::min) + bisection_bound(d, CutMode::max) ==
          doctest::Approx(d / 2.0).epsilon(1e-14));
}

TEST_CASE("sign flip symmetry") {
  for (int i = 0; i <= 200; ++i) {
    const double rho = -1.0 + i / 100.0;
    CHECK(sign_flip_probability(rho) + sign_flip_probability(-rho) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("sphere and ball sizes") {
  CHECK(sphere_size(3, 0) == 1);
  CHECK(sphere_size(3, 1) == 3);
  CHECK(sphere_size(3, 2) == 6);
  CHECK(sphere_size(4, 3) == 36);
  CHECK(ball_size(3, 2) == 10);
  CHECK(ball_size(4, 1) == 5);
  CHECK_THROWS_AS(sphere_size(3, -1), std::domain_error);
}

TEST_CASE("block factor correlation examples") {
  const double rho = spectral_radius(3);
  CHECK(block_factor_correlation(3, 2) == doctest::Approx(-2.0 * std::sqrt(2.0) / 5.0));
  CHECK(block_factor_correlation(3, 327) == doctest::Approx(-0.9408849).epsilon(1e-7));
  const double p = sign_flip_probability(block_factor_correlation(3, 327));
  CHECK(std::abs(p - 0.8900) < 1e-4);
  CHECK(p >= 0.89);
  CHECK(block_factor_correlation(3, 1'000'000) == doctest::Approx(-rho).epsilon(1e-5));
  CHECK(block_factor_correlation(3, 3, false) == doctest::Approx(rho * 0.75));
}

TEST_CASE("block factor correlation approaches the spectral radius from inside") {
  for (int d : {3, 4, 5, 7}) {
    const double rho = spectral_radius(d);
    double previous = 0.0;
    for (int n = 2; n <= 400; ++n) {
      const double c = std::abs(block_factor_correlation(d, n));
      CHECK(c > previous);
      CHECK(c < rho);
      previous = c;
    }
  }
}

TEST_CASE("Markov chain formulas against enumeration on small balls") {
  CHECK(mc_variance_ratio(3, 0.0, 4) == doctest::Approx(1.0));
  CHECK(mc_variance_ratio(3, 1.0, 1) == doctest::Approx(3.0));
  CHECK(mc_variance_ratio(3, 0.5, 2) == doctest::Approx(1.5));
  CHECK(mc_root_sphere_covariance(3, 0.5, 2) == doctest::Approx(1.5));
  CHECK(mc_root_sphere_covariance(3, 0.0, 3) == 0.0);
  CHECK(mc_root_sphere_covariance(3, 1.0, 1) == doctest::Approx(3.0));

  for (int d : {3, 4})
    for (double theta : {-0.7, 0.2, 0.5, 0.9})
      for (int n = 1; n <= (d == 3 ? 3 : 2); ++n) {
        const ChainMoments m = enumerate_chain(d, theta, n, n);
        const double size = static_cast<double>(sphere_size(d, n));
        CAPTURE(d);
        CAPTURE(theta);
        CAPTURE(n);
        // The enumeration sums up to 2^22 terms; its own rounding is ~1e-10.
        CHECK(mc_variance_ratio(d, theta, n) == doctest::Approx(m.var / size).epsilon(1e-9));
        CHECK(mc_root_sphere_covariance(d, theta, n) == doctest::Approx(m.root_cov).epsilon(1e-9));
      }
}

TEST_CASE("Markov chain variance ratio growth follows (d-1) theta^2") {
  // Supercritical: unbounded growth. Subcritical: Cauchy increments.
  const double super = 0.8, sub = 0.5;
  CHECK(mc_variance_ratio(3, super, 60) > 1e4);
  CHECK(mc_variance_ratio(3, super, 61) / mc_variance_ratio(3, super, 60) ==
        doctest::Approx(2.0 * super * super).epsilon(1e-3));
  CHECK(std::abs(mc_variance_ratio(3, sub, 60) - mc_variance_ratio(3, sub, 59)) < 1e-12);
  CHECK(mc_variance_ratio(4, 0.5, 80) < mc_variance_ratio(4, 0.5, 81) + 1e-9);
  CHECK(std::isfinite(mc_variance_ratio(4, 0.5, 200)));
}

TEST_CASE("decay bound examples") {
  CHECK(cghv_correlation(3, 0) == doctest::Approx(1.0));
  CHECK(cghv_correlation(3, 1) == doctest::Approx(0.9428090).epsilon(1e-7));
  CHECK(cghv_correlation(3, 2) == doctest::Approx(0.8333333).epsilon(1e-7));
  CHECK(cghv_correlation(3, 1) == doctest::Approx(spectral_radius(3)));
}

TEST_CASE("cut mode names round trip") {
  CHECK(parse_cut_mode(to_string(CutMode::min)) == CutMode::min);
  CHECK(parse_cut_mode(to_string(CutMode::max)) == CutMode::max);
  CHECK_THROWS_AS(parse_cut_mode("median"), std::domain_error);
}

TEST_CASE("Markov parameters validate theta") {
  CHECK(MarkovParams::make(3, 0.5).keep_probability() == doctest::Approx(0.75));
  CHECK_THROWS_AS(MarkovParams::make(3, 1.5), std::domain_error);
}
