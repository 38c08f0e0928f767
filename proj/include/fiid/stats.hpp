#pragma once

#include <cstddef>
#include <span>

namespace fiid {

/// Point estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// Sample mean with standard error sd/sqrt(n).
Estimate mean_estimate(std::span<const double> x);

/// Sample variance (n-1 denominator) with jackknife standard error.
Estimate jackknife_variance(std::span<const double> x);

/// Pearson correlation with jackknife standard error. Returns {0, 0} when
/// either sample has zero variance.
Estimate jackknife_correlation(std::span<const double> x, std::span<const double> y);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

} // namespace fiid
