#include "phimix/class_l.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phimix {

double selfdecomp_factor(const MixingLaw& mixing, double c, double s) {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("selfdecomp_factor: c must lie in (0, 1)");
  return mixing.laplace(s) / mixing.laplace(c * s);
}

std::vector<double> default_c_grid() { return {0.3, 0.5, 0.7}; }

std::vector<double> default_s_grid() { return linear_grid(0.0, 10.0, 101); }

ClassLReport classl_factor_check(const MixingLaw& mixing, std::span<const double> c_grid,
                                 std::span<const double> s_grid, int max_order, double tol) {
  if (c_grid.empty()) throw std::invalid_argument("classl_factor_check: empty c grid");
  ClassLReport report;
  for (double c : c_grid) {
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("classl_factor_check: c must lie in (0, 1)");
    FactorCheck check{c, check_complete_monotonicity(
                             [&](double s) { return selfdecomp_factor(mixing, c, s); }, s_grid,
                             max_order, tol)};
    report.pass = report.pass && check.monotonicity.pass;
    report.checks.push_back(std::move(check));
  }
  return report;
}

namespace {

// Locates a real zero of f on the sorted points, if there is one: either a
// vanishing value or a sign change of the real part across an interval on
// which f is real.
std::optional<double> find_real_zero(const CfFunction& f, const std::vector<double>& points, double tol) {
  std::vector<std::complex<double>> values(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    values[i] = f(points[i]);
    if (std::abs(values[i]) <= tol) return points[i];
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto a = values[i - 1];
    const auto b = values[i];
    const bool real = std::abs(a.imag()) <= tol && std::abs(b.imag()) <= tol;
    if (!real || (a.real() > 0.0) == (b.real() > 0.0)) continue;
    double lo = points[i - 1];
    double hi = points[i];
    const bool lo_positive = a.real() > 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((f(mid).real() > 0.0) == lo_positive) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
  return std::nullopt;
}

}  // namespace

SelfDecompReport selfdecomp_cf_check(const CfFunction& f, std::span<const double> c_grid,
                                     std::span<const double> t_grid, double tol) {
  if (c_grid.empty() || t_grid.empty()) throw std::invalid_argument("selfdecomp_cf_check: empty grid");
  std::vector<double> diffs;
  diffs.reserve(t_grid.size() * t_grid.size());
  for (double a : t_grid) {
    for (double b : t_grid) diffs.push_back(a - b);
  }
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());

  const auto zero = find_real_zero(f, diffs, 1e-12);

  SelfDecompReport report;
  for (double c : c_grid) {
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("selfdecomp_cf_check: c must lie in (0, 1)");
    CfFactorCheck check;
    check.c = c;
    if (zero) {
      check.zero_at = zero;
      report.pass = false;
      report.checks.push_back(check);
      continue;
    }
    const CfFunction g = [&f, c](double t) { return f(t) / f(c * t); };
    for (double t : diffs) check.max_modulus = std::max(check.max_modulus, std::abs(g(t)));
    check.psd = psd_toeplitz_check(g, t_grid, tol);
    check.pass = check.psd.pass && check.max_modulus <= 1.0 + tol;
    report.pass = report.pass && check.pass;
    report.checks.push_back(check);
  }
  return report;
}

CfFunction construct_classl_mixture(const MixingLaw& mixing, const StableExponent& exponent) {
  const auto c_grid = default_c_grid();
  const auto s_grid = default_s_grid();
  if (!classl_factor_check(mixing, c_grid, s_grid).pass) {
    throw std::invalid_argument("construct_classl_mixture: " + mixing.describe() +
                                " fails the self-decomposability witness");
  }
  return [mixing, exponent](double t) { return mixture_cf(mixing, exponent, t); };
}

ModeReport kde_mode_count(std::span<const double> sample, std::span<const double> grid, double bandwidth) {
  if (sample.size() < 2 || grid.size() < 3) throw std::invalid_argument("kde_mode_count: sample or grid too small");
  ModeReport report;
  if (!(bandwidth > 0.0)) {
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    double mean = 0.0;
    for (double x : sorted) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : sorted) var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / (n - 1.0));
    const double iqr = sorted[static_cast<std::size_t>(0.75 * (n - 1))] -
                       sorted[static_cast<std::size_t>(0.25 * (n - 1))];
    const double spread = std::min(sd, iqr / 1.34);
    bandwidth = 0.9 * spread * std::pow(n, -0.2);
  }
  report.bandwidth = bandwidth;

  std::vector<double> density(grid.size(), 0.0);
  const double norm = 1.0 / (static_cast<double>(sample.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  for (double x : sample) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double u = (grid[i] - x) / bandwidth;
      if (std::abs(u) < 8.0) density[i] += std::exp(-0.5 * u * u);
    }
  }
  for (auto& d : density) d *= norm;
  // A local maximum counts when its prominence clears three standard
  // deviations of the estimate there, sd ~ sqrt(f R(K) / (n h)) with
  // R(K) = 1 / (2 sqrt(pi)) for the Gaussian kernel.
  const double noise_scale = 1.0 / (2.0 * std::sqrt(std::numbers::pi) * static_cast<double>(sample.size()) * bandwidth);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (!(density[i] > density[i - 1] && density[i] >= density[i + 1])) continue;
    double left = density[i];
    std::size_t l = i;
    while (l > 0 && density[l - 1] <= density[i]) left = std::min(left, density[--l]);
    double right = density[i];
    std::size_t r = i;
    while (r + 1 < grid.size() && density[r + 1] <= density[i]) right = std::min(right, density[++r]);
    // The dip that has to be crossed to reach higher ground; the global peak
    // is measured against the lower of its two sides.
    const bool higher_left = l > 0;
    const bool higher_right = r + 1 < grid.size();
    double base = std::min(left, right);
    if (higher_left && higher_right) base = std::max(left, right);
    else if (higher_left) base = left;
    else if (higher_right) base = right;
    if (density[i] - base > 3.0 * std::sqrt(density[i] * noise_scale)) report.mode_locations.push_back(grid[i]);
  }
  report.modes = report.mode_locations.size();
  return report;
}

}  // namespace phimix
