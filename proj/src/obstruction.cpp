#include "fiid/obstruction.hpp"

#include <algorithm>
#include <stdexcept>

#include "fiid/parallel.hpp"
#include "fiid/processes.hpp"
#include "fiid/seeding.hpp"
#include "fiid/stats.hpp"

namespace fiid {

const char *to_string(Classification c) {
  switch (c) {
  case Classification::obstructed:
    return "obstructed";
  case Classification::not_obstructed:
    return "not_obstructed";
  case Classification::inconclusive:
    break;
  }
  return "inconclusive";
}

ConfigurationSampler iid_spin_sampler(const TreeBall &ball) {
  (void)ball;
  return [](std::uint64_t seed, std::span<double> values) {
    Rng rng = make_rng(seed);
    for (double &v : values)
      v = uniform01(rng) < 0.5 ? 1.0 : -1.0;
  };
}

ConfigurationSampler mc_direct_sampler(const TreeBall &ball, const MarkovParams &params) {
  return [&ball, params](std::uint64_t seed, std::span<double> values) {
    const SpinField spins = sample_mc_direct(ball, params, seed);
    std::copy(spins.values.begin(), spins.values.end(), values.begin());
  };
}

ConfigurationSampler mc_cluster_sampler(const TreeBall &ball, const MarkovParams &params) {
  return [&ball, params](std::uint64_t seed, std::span<double> values) {
    const SpinField spins = sample_mc_cluster(ball, params, sample_uniform_labels(ball, seed));
    std::copy(spins.values.begin(), spins.values.end(), values.begin());
  };
}

ConfigurationSampler gauss_block_sampler(const TreeBall &ball, const BlockFactorSpec &spec,
                                         bool sign_rounded) {
  return [&ball, spec, sign_rounded](std::uint64_t seed, std::span<double> values) {
    const GaussField field = evaluate_on_tree(ball, spec, seed);
    for (std::size_t v = 0; v < values.size(); ++v) {
      const double x = field.values(static_cast<Eigen::Index>(v));
      values[v] = sign_rounded ? static_cast<double>((x > 0) - (x < 0)) : x;
    }
  };
}

ObstructionReport sphere_sum_stats(const ConfigurationSampler &sampler, const TreeBall &ball,
                                   std::span<const int> n_values, std::size_t replicas,
                                   std::uint64_t seed, unsigned threads) {
  if (replicas < 100)
    throw std::domain_error("sphere_sum_stats needs at least 100 replicas");
  for (int n : n_values)
    if (n < 0 || n > ball.radius())
      throw std::domain_error("sphere radius " + std::to_string(n) + " outside the tree ball");

  const std::size_t radii = n_values.size();
  // Column 0 holds sigma(o); column 1 + j holds Sigma_{n_values[j]}.
  std::vector<std::vector<double>> columns(radii + 1, std::vector<double>(replicas));
  if (threads == 0)
    threads = default_thread_count();
  const std::size_t chunks = std::min<std::size_t>(threads, replicas);
  const std::size_t block = (replicas + chunks - 1) / chunks;
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::vector<double> values(ball.vertex_count());
    for (std::size_t r = c * block; r < std::min(replicas, (c + 1) * block); ++r) {
      sampler(derive_substream(seed, r), values);
      columns[0][r] = values[0];
      for (std::size_t j = 0; j < radii; ++j) {
        double sum = 0;
        for (Vertex v : ball.sphere(n_values[j]))
          sum += values[static_cast<std::size_t>(v)];
        columns[1 + j][r] = sum;
      }
    }
  });

  if (!(jackknife_variance(columns[0]).value > 0))
    throw std::domain_error("degenerate sampler: the root value has zero variance");

  ObstructionReport report;
  report.d = ball.degree();
  report.n_values.assign(n_values.begin(), n_values.end());
  for (std::size_t j = 0; j < radii; ++j) {
    const double size = static_cast<double>(sphere_size(ball.degree(), n_values[j]));
    const Estimate var = jackknife_variance(columns[1 + j]);
    const Estimate corr = jackknife_correlation(columns[0], columns[1 + j]);
    report.var_ratio.push_back(var.value / size);
    report.var_ratio_se.push_back(var.se / size);
    report.root_corr.push_back(corr.value);
    report.root_corr_se.push_back(corr.se);
  }
  return report;
}

std::pair<double, double> mc_exact_stats(int d, double theta, int n) {
  const double ratio = mc_variance_ratio(d, theta, n);
  const double size = static_cast<double>(sphere_size(d, n));
  return {ratio, mc_root_sphere_covariance(d, theta, n) / std::sqrt(size * ratio)};
}

ObstructionReport mc_exact_report(int d, double theta, std::span<const int> n_values) {
  ObstructionReport report;
  report.d = d;
  report.theta = theta;
  report.process = "mc-exact";
  report.n_values.assign(n_values.begin(), n_values.end());
  for (int n : n_values) {
    const auto [ratio, corr] = mc_exact_stats(d, theta, n);
    report.var_ratio.push_back(ratio);
    report.var_ratio_se.push_back(0.0);
    report.root_corr.push_back(corr);
    report.root_corr_se.push_back(0.0);
  }
  return report;
}

namespace {

struct Slope {
  double value;
  double se;
};

/// Slope of log(var_ratio) against n. Weighted least squares with delta-method
/// variances when every point carries a standard error; otherwise ordinary
/// least squares with the residual variance.
Slope log_growth_slope(const ObstructionReport &report) {
  const std::size_t k = report.n_values.size();
  std::vector<double> x(k), y(k), w(k);
  bool weighted = true;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(report.var_ratio[i] > 0))
      throw std::domain_error("variance ratio must be positive to classify");
    x[i] = report.n_values[i];
    y[i] = std::log(report.var_ratio[i]);
    const double rel = report.var_ratio_se[i] / report.var_ratio[i];
    weighted = weighted && rel > 0;
    w[i] = rel > 0 ? 1.0 / (rel * rel) : 1.0;
  }
  if (!weighted)
    std::fill(w.begin(), w.end(), 1.0);

  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  if (weighted)
    return {slope, std::sqrt(1.0 / sxx)};
  double rss = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = y[i] - my - slope * (x[i] - mx);
    rss += r * r;
  }
  return {slope, std::sqrt(rss / static_cast<double>(k - 2) / sxx)};
}

} // namespace

Classification classify(const ObstructionReport &report, const ClassifierConfig &config) {
  const std::size_t k = report.n_values.size();
  if (k < 3)
    throw std::domain_error("classification needs at least 3 radii");
  if (report.var_ratio.size() != k || report.var_ratio_se.size() != k ||
      report.root_corr.size() != k || report.root_corr_se.size() != k)
    throw std::domain_error("report columns have inconsistent lengths");

  // Order radii so "largest" is well defined.
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return report.n_values[a] < report.n_values[b]; });
  const std::size_t last = order[k - 1];
  const std::size_t second = order[k - 2];

  const Slope slope = log_growth_slope(report);
  const bool growing = slope.value - config.z * slope.se > config.growth_threshold;
  const bool flat = slope.value + config.z * slope.se < config.growth_threshold;

  auto lower = [&](std::size_t i) { return std::abs(report.root_corr[i]) - 3 * report.root_corr_se[i]; };
  const bool correlated = std::min(lower(last), lower(second)) > config.corr_floor;
  const bool decorrelated =
      std::abs(report.root_corr[last]) + 3 * report.root_corr_se[last] < config.corr_floor;

  if (growing && correlated)
    return Classification::obstructed;
  if (flat || decorrelated)
    return Classification::not_obstructed;
  return Classification::inconclusive;
}

} // namespace fiid
