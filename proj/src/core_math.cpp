#include "fiid/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fiid {
namespace {

constexpr double kClampGuard = 1e-12;

void require_degree(int d, int minimum) {
  if (d < minimum)
    throw std::domain_error("degree d=" + std::to_string(d) + " must be >= " +
                            std::to_string(minimum));
}

void require_theta(double theta) {
  if (!(std::abs(theta) <= 1.0))
    throw std::domain_error("theta must lie in [-1, 1]");
}

double clamp_unit(double rho) {
  if (!(std::abs(rho) <= 1.0 + kClampGuard))
    throw std::domain_error("correlation must lie in [-1, 1]");
  return std::clamp(rho, -1.0, 1.0);
}

} // namespace

const char *to_string(CutMode mode) { return mode == CutMode::min ? "min" : "max"; }

CutMode parse_cut_mode(const char *text) {
  if (std::strcmp(text, "min") == 0)
    return CutMode::min;
  if (std::strcmp(text, "max") == 0)
    return CutMode::max;
  throw std::domain_error(std::string("unknown cut mode: ") + text);
}

DegreeParams DegreeParams::make(int d) { return {d, spectral_radius(d)}; }

MarkovParams MarkovParams::make(int d, double theta) {
  require_degree(d, 3);
  require_theta(theta);
  return {theta, d};
}

double spectral_radius(int d) {
  require_degree(d, 2);
  return 2.0 * std::sqrt(static_cast<double>(d - 1)) / d;
}

double sign_flip_probability(double rho) {
  return std::acos(clamp_unit(rho)) / std::numbers::pi;
}

double sign_correlation(double rho) {
  return 2.0 * std::asin(clamp_unit(rho)) / std::numbers::pi;
}

double bisection_bound(int d, CutMode mode) {
  require_degree(d, 3);
  const double rho = spectral_radius(d);
  const double arg = mode == CutMode::min ? rho : -rho;
  return d / (2.0 * std::numbers::pi) * std::acos(arg);
}

std::uint64_t sphere_size(int d, int n) {
  require_degree(d, 2);
  if (n < 0)
    throw std::domain_error("sphere radius must be non-negative");
  if (n == 0)
    return 1;
  std::uint64_t size = static_cast<std::uint64_t>(d);
  for (int k = 1; k < n; ++k)
    size *= static_cast<std::uint64_t>(d - 1);
  return size;
}

std::uint64_t ball_size(int d, int r) {
  std::uint64_t total = 0;
  for (int k = 0; k <= r; ++k)
    total += sphere_size(d, k);
  return total;
}

double block_factor_correlation(int d, int n, bool alternating) {
  require_degree(d, 3);
  if (n < 2)
    throw std::domain_error("block factor radius n must be >= 2");
  const double value =
      -spectral_radius(d) / (1.0 + (d - 1.0) / (d * (n - 1.0)));
  return alternating ? value : -value;
}

double mc_variance_ratio(int d, double theta, int n) {
  require_degree(d, 3);
  require_theta(theta);
  if (n < 1)
    throw std::domain_error("sphere radius n must be >= 1");
  const double t2 = theta * theta;
  double ratio = 1.0;
  double branch = 1.0; // (d-1)^(k-1)
  double power = t2;   // theta^(2k)
  for (int k = 1; k <= n - 1; ++k) {
    ratio += (d - 2) * branch * power;
    branch *= d - 1;
    power *= t2;
  }
  // branch = (d-1)^(n-1), power = theta^(2n)
  return ratio + branch * (d - 1) * power;
}

double mc_root_sphere_covariance(int d, double theta, int n) {
  require_degree(d, 3);
  require_theta(theta);
  if (n < 0)
    throw std::domain_error("sphere radius n must be >= 0");
  return static_cast<double>(sphere_size(d, n)) * std::pow(theta, n);
}

double cghv_correlation(int d, int n) {
  require_degree(d, 3);
  if (n < 0)
    throw std::domain_error("distance must be non-negative");
  return (n * (d - 2.0) / d + 1.0) * std::pow(d - 1.0, -0.5 * n);
}

} // namespace fiid
