#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "fiid/obstruction.hpp"
#include "fiid/stats.hpp"

using namespace fiid;

namespace {

/// Leave-one-out recomputation from scratch, O(n^2).
template <class Stat> Estimate naive_jackknife(const std::vector<double> &x, const std::vector<double> &y, Stat stat) {
  const std::size_t n = x.size();
  std::vector<double> loo;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> xs, ys;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) {
        xs.push_back(x[j]);
        ys.push_back(y[j]);
      }
    loo.push_back(stat(xs, ys));
  }
  double mean = 0;
  for (double v : loo)
    mean += v / static_cast<double>(n);
  double ss = 0;
  for (double v : loo)
    ss += (v - mean) * (v - mean);
  return {stat(x, y), std::sqrt((n - 1.0) / n * ss)};
}

double sample_var(const std::vector<double> &x, const std::vector<double> &) {
  double m = 0;
  for (double v : x)
    m += v / static_cast<double>(x.size());
  double ss = 0;
  for (double v : x)
    ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double sample_corr(const std::vector<double> &x, const std::vector<double> &y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / static_cast<double>(x.size());
    my += y[i] / static_cast<double>(y.size());
  }
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

ConfigurationSampler scaled(ConfigurationSampler inner, double factor) {
  return [inner = std::move(inner), factor](std::uint64_t seed, std::span<double> values) {
    inner(seed, values);
    for (double &v : values)
      v *= factor;
  };
}

const std::vector<int> kRadii{2, 3, 4, 5, 6};

} // namespace

TEST_CASE("jackknife matches naive leave-one-out") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::vector<double> x(150), y(150);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = 5.0 + normal(rng);
    y[i] = 0.4 * x[i] + normal(rng);
  }
  const Estimate v = jackknife_variance(x);
  const Estimate v_ref = naive_jackknife(x, x, sample_var);
  CHECK(v.value == doctest::Approx(v_ref.value).epsilon(1e-10));
  CHECK(v.se == doctest::Approx(v_ref.se).epsilon(1e-8));
  const Estimate c = jackknife_correlation(x, y);
  const Estimate c_ref = naive_jackknife(x, y, sample_corr);
  CHECK(c.value == doctest::Approx(c_ref.value).epsilon(1e-10));
  CHECK(c.se == doctest::Approx(c_ref.se).epsilon(1e-8));
}

TEST_CASE("statistics edge cases") {
  const std::vector<double> constant(10, 2.0), ramp{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(jackknife_correlation(constant, ramp).value == 0.0);
  CHECK(jackknife_correlation(constant, ramp).se == 0.0);
  CHECK(mean_estimate(ramp).value == doctest::Approx(5.5));
  CHECK(mean_estimate(ramp).se == doctest::Approx(std::sqrt(55.0 / 6.0 / 10.0)));
  CHECK_THROWS_AS(jackknife_variance(std::vector<double>{1.0, 2.0}), std::domain_error);
  CHECK_THROWS_AS(jackknife_correlation(ramp, std::span<const double>(constant).subspan(0, 3)), std::domain_error);
}

TEST_CASE("two-sample KS statistic") {
  const std::vector<double> a{1, 2, 3, 4}, b{5, 6, 7}, c{1, 2, 3, 4}, d{1.5, 2.5, 3.5, 4.5};
  CHECK(ks_statistic(a, b) == 1.0);
  CHECK(ks_statistic(a, c) == 0.0);
  CHECK(ks_statistic(a, d) == doctest::Approx(0.25));
  CHECK(ks_statistic(d, a) == doctest::Approx(0.25));
}

TEST_CASE("IID spins show no structure") {
  const TreeBall ball(3, 4);
  const std::vector<int> radii{1, 2, 3, 4};
  const auto report = sphere_sum_stats(iid_spin_sampler(ball), ball, radii, 20'000, 5);
  for (std::size_t j = 0; j < radii.size(); ++j) {
    CHECK(std::abs(report.var_ratio[j] - 1.0) < 4.0 * report.var_ratio_se[j]);
    CHECK(std::abs(report.root_corr[j]) < 4.0 * report.root_corr_se[j]);
  }
  CHECK(classify(report) == Classification::not_obstructed);
}

TEST_CASE("exact Markov chain statistics") {
  const auto [ratio, corr] = mc_exact_stats(3, 0.5, 2);
  CHECK(ratio == doctest::Approx(1.5));
  CHECK(corr == doctest::Approx(0.5));
  const auto [r0, c0] = mc_exact_stats(3, 0.0, 4);
  CHECK(r0 == doctest::Approx(1.0));
  CHECK(c0 == 0.0);
  const auto [r10, c10] = mc_exact_stats(3, 0.8, 30);
  const auto [r11, c11] = mc_exact_stats(3, 0.8, 31);
  CHECK(r11 / r10 == doctest::Approx(1.28).epsilon(1e-4));
  CHECK(c11 == doctest::Approx(c10).epsilon(1e-3)); // settles at a positive constant
  CHECK(c11 > 0.1);
}

TEST_CASE("Monte Carlo Markov chain statistics match the formulas") {
  const TreeBall ball(3, 3);
  const std::vector<int> radii{1, 2, 3};
  for (double theta : {0.3, 0.5, 0.8}) {
    const auto params = MarkovParams::make(3, theta);
    for (const auto &sampler : {mc_direct_sampler(ball, params), mc_cluster_sampler(ball, params)}) {
      const auto report = sphere_sum_stats(sampler, ball, radii, 100'000, 42);
      for (std::size_t j = 0; j < radii.size(); ++j) {
        const auto [ratio, corr] = mc_exact_stats(3, theta, radii[j]);
        CAPTURE(theta);
        CAPTURE(radii[j]);
        CHECK(std::abs(report.var_ratio[j] - ratio) < 4.0 * report.var_ratio_se[j]);
        CHECK(std::abs(report.root_corr[j] - corr) < 4.0 * report.root_corr_se[j]);
      }
    }
  }
}

TEST_CASE("fully persistent chain") {
  const TreeBall ball(3, 3);
  const std::vector<int> radii{1, 2, 3};
  const auto report = sphere_sum_stats(mc_direct_sampler(ball, MarkovParams::make(3, 1.0)), ball, radii, 10'000, 1);
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const double size = static_cast<double>(sphere_size(3, radii[j]));
    CHECK(std::abs(report.var_ratio[j] - size) < 4.0 * report.var_ratio_se[j]);
    CHECK(report.root_corr[j] == doctest::Approx(1.0));
  }
}

TEST_CASE("sphere statistics are independent of the thread count") {
  const TreeBall ball(3, 4);
  const std::vector<int> radii{2, 3, 4};
  const auto sampler = mc_direct_sampler(ball, MarkovParams::make(3, 0.6));
  const auto one = sphere_sum_stats(sampler, ball, radii, 5'000, 9, 1);
  const auto three = sphere_sum_stats(sampler, ball, radii, 5'000, 9, 3);
  CHECK(one.var_ratio == three.var_ratio);
  CHECK(one.var_ratio_se == three.var_ratio_se);
  CHECK(one.root_corr == three.root_corr);
  CHECK(one.root_corr_se == three.root_corr_se);
}

TEST_CASE("sphere statistics input checks") {
  const TreeBall ball(3, 2);
  const std::vector<int> too_far{3};
  const std::vector<int> ok{1};
  CHECK_THROWS_AS(sphere_sum_stats(iid_spin_sampler(ball), ball, too_far, 1000, 1), std::domain_error);
  CHECK_THROWS_AS(sphere_sum_stats(iid_spin_sampler(ball), ball, ok, 10, 1), std::domain_error);
  const ConfigurationSampler constant = [](std::uint64_t, std::span<double> v) {
    std::fill(v.begin(), v.end(), 1.0);
  };
  CHECK_THROWS_AS(sphere_sum_stats(constant, ball, ok, 1000, 1), std::domain_error);
}

TEST_CASE("classifier on exact trajectories") {
  const std::vector<int> radii{2, 3, 4, 5, 6, 7, 8};
  CHECK(classify(mc_exact_report(3, 0.8, radii)) == Classification::obstructed);
  CHECK(classify(mc_exact_report(3, 0.5, radii)) == Classification::not_obstructed);
  CHECK(classify(mc_exact_report(3, 0.0, radii)) == Classification::not_obstructed);
  const std::vector<int> two{2, 3};
  CHECK_THROWS_AS(classify(mc_exact_report(3, 0.8, two)), std::domain_error);
}

TEST_CASE("classifier on Monte Carlo trajectories") {
  const TreeBall ball(3, 6);
  for (auto [theta, expected] : {std::pair{0.8, Classification::obstructed},
                                 std::pair{0.5, Classification::not_obstructed}}) {
    const auto report =
        sphere_sum_stats(mc_direct_sampler(ball, MarkovParams::make(3, theta)), ball, kRadii, 20'000, 11);
    CAPTURE(theta);
    CHECK(classify(report) == expected);
  }
}

TEST_CASE("classification is invariant under rescaling") {
  const TreeBall ball(3, 6);
  for (double theta : {0.5, 0.8}) {
    const auto base = mc_direct_sampler(ball, MarkovParams::make(3, theta));
    const auto plain = sphere_sum_stats(base, ball, kRadii, 5'000, 3);
    for (double factor : {0.01, 3.7, 250.0}) {
      const auto scaled_report = sphere_sum_stats(scaled(base, factor), ball, kRadii, 5'000, 3);
      CHECK(classify(scaled_report) == classify(plain));
      for (std::size_t j = 0; j < kRadii.size(); ++j) {
        CHECK(scaled_report.root_corr[j] == doctest::Approx(plain.root_corr[j]).epsilon(1e-9));
        CHECK(scaled_report.var_ratio[j] == doctest::Approx(plain.var_ratio[j] * factor * factor).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("sign-rounded Gaussian factor respects the correlation decay bound") {
  // Correlation between the root and a fixed vertex at distance k, over draws.
  const TreeBall ball(3, 6);
  const auto spec = BlockFactorSpec::make(3, 3, WeightSign::alternating);
  const auto sampler = gauss_block_sampler(ball, spec, true);
  const std::size_t draws = 20'000;
  std::vector<std::vector<double>> at(5, std::vector<double>(draws));
  std::vector<double> values(ball.vertex_count());
  for (std::size_t r = 0; r < draws; ++r) {
    sampler(derive_substream(8, r), values);
    for (int k = 0; k <= 4; ++k)
      at[static_cast<std::size_t>(k)][r] = values[static_cast<std::size_t>(*ball.sphere(k).begin())];
  }
  for (int k = 1; k <= 4; ++k) {
    const Estimate corr = jackknife_correlation(at[0], at[static_cast<std::size_t>(k)]);
    CAPTURE(k);
    CHECK(std::abs(corr.value) <= cghv_correlation(3, k) + 4.0 * corr.se);
  }
  // Distance 1 is pinned by the arcsine law.
  const Estimate adjacent = jackknife_correlation(at[0], at[1]);
  CHECK(std::abs(adjacent.value - sign_correlation(spec.adjacent_correlation())) < 4.0 * adjacent.se);
}
