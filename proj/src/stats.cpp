#include "fiid/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fiid {
namespace {

/// Centered sums for O(1) leave-one-out recomputation.
struct Moments {
  double n = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;

  void add(double x, double y) {
    n += 1;
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  Moments without(double x, double y) const {
    return {n - 1, sx - x, sy - y, sxx - x * x, syy - y * y, sxy - x * y};
  }
  double var_x() const { return (sxx - sx * sx / n) / (n - 1); }
  double var_y() const { return (syy - sy * sy / n) / (n - 1); }
  double cov() const { return (sxy - sx * sy / n) / (n - 1); }
  double corr() const {
    const double vx = var_x(), vy = var_y();
    return vx > 0 && vy > 0 ? cov() / std::sqrt(vx * vy) : 0.0;
  }
};

double mean_of(std::span<const double> x) {
  double s = 0;
  for (double v : x)
    s += v;
  return s / static_cast<double>(x.size());
}

template <class Stat>
Estimate jackknife(std::span<const double> x, std::span<const double> y, Stat stat) {
  const std::size_t n = x.size();
  if (n < 3)
    throw std::domain_error("jackknife needs at least 3 samples");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  Moments all;
  for (std::size_t i = 0; i < n; ++i)
    all.add(x[i] - mx, y[i] - my);

  std::vector<double> leave_one_out(n);
  double mean_loo = 0;
  for (std::size_t i = 0; i < n; ++i) {
    leave_one_out[i] = stat(all.without(x[i] - mx, y[i] - my));
    mean_loo += leave_one_out[i];
  }
  mean_loo /= static_cast<double>(n);
  double ss = 0;
  for (double v : leave_one_out)
    ss += (v - mean_loo) * (v - mean_loo);
  const double nn = static_cast<double>(n);
  return {stat(all), std::sqrt((nn - 1) / nn * ss)};
}

} // namespace

Estimate mean_estimate(std::span<const double> x) {
  if (x.size() < 2)
    throw std::domain_error("mean estimate needs at least 2 samples");
  const double m = mean_of(x);
  double ss = 0;
  for (double v : x)
    ss += (v - m) * (v - m);
  const double n = static_cast<double>(x.size());
  return {m, std::sqrt(ss / (n - 1) / n)};
}

Estimate jackknife_variance(std::span<const double> x) {
  return jackknife(x, x, [](const Moments &m) { return m.var_x(); });
}

Estimate jackknife_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::domain_error("correlation needs paired samples");
  return jackknife(x, y, [](const Moments &m) { return m.corr(); });
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::size_t i = 0, j = 0;
  double worst = 0;
  while (i < sa.size() && j < sb.size()) {
    const double t = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == t)
      ++i;
    while (j < sb.size() && sb[j] == t)
      ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(sa.size());
    const double fb = static_cast<double>(j) / static_cast<double>(sb.size());
    worst = std::max(worst, std::abs(fa - fb));
  }
  return worst;
}

} // namespace fiid
