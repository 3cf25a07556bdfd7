#include "phimix/stats_verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace phimix {

std::vector<double> linear_grid(double from, double to, std::size_t points) {
  if (points == 0) throw std::invalid_argument("linear_grid: need at least one point");
  if (points == 1) return {from};
  std::vector<double> grid(points);
  const double step = (to - from) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = from + step * static_cast<double>(i);
  grid.back() = to;
  return grid;
}

std::vector<double> log_grid(double from, double to, std::size_t points) {
  if (!(from > 0.0) || !(to > 0.0)) throw std::invalid_argument("log_grid: endpoints must be positive");
  auto grid = linear_grid(std::log(from), std::log(to), points);
  for (auto& g : grid) g = std::exp(g);
  grid.front() = from;
  if (points > 1) grid.back() = to;
  return grid;
}

std::vector<double> default_cf_grid() { return linear_grid(-5.0, 5.0, 61); }

std::complex<double> empirical_cf(std::span<const double> sample, double t) {
  if (sample.empty()) throw std::invalid_argument("empirical_cf: empty sample");
  if (t == 0.0) return {1.0, 0.0};
  double re = 0.0;
  double im = 0.0;
  for (double x : sample) {
    re += std::cos(t * x);
    im += std::sin(t * x);
  }
  const auto n = static_cast<double>(sample.size());
  return {re / n, im / n};
}

double empirical_df(std::span<const double> sample, double x) {
  if (sample.empty()) throw std::invalid_argument("empirical_df: empty sample");
  const auto below = std::count_if(sample.begin(), sample.end(), [x](double v) { return v <= x; });
  return static_cast<double>(below) / static_cast<double>(sample.size());
}

double empirical_df(const VectorSample& sample, std::span<const double> x) {
  if (sample.size() == 0) throw std::invalid_argument("empirical_df: empty sample");
  if (x.size() != sample.dim) throw std::invalid_argument("empirical_df: dimension mismatch");
  std::size_t below = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto row = sample.row(i);
    bool inside = true;
    for (std::size_t k = 0; k < sample.dim && inside; ++k) inside = row[k] <= x[k];
    below += inside ? 1 : 0;
  }
  return static_cast<double>(below) / static_cast<double>(sample.size());
}

double empirical_mean(std::span<const double> sample, const std::function<double(double)>& f) {
  if (sample.empty()) throw std::invalid_argument("empirical_mean: empty sample");
  double acc = 0.0;
  for (double x : sample) acc += f(x);
  return acc / static_cast<double>(sample.size());
}

double ks_distance(std::span<const double> sample, const CdfFunction& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    // Ties form a single jump of the empirical d.f.
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double f = cdf(sorted[i]);
    // Left limit, so that targets with atoms are compared correctly.
    const double f_left = cdf(std::nextafter(sorted[i], -std::numeric_limits<double>::infinity()));
    const double before = static_cast<double>(i) / n;
    const double after = static_cast<double>(j + 1) / n;
    worst = std::max({worst, std::abs(after - f), std::abs(f_left - before)});
    i = j + 1;
  }
  return worst;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto n = static_cast<double>(x.size());
  const auto m = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double worst = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return worst;
}

double ks_two_sample_critical(std::size_t n, std::size_t m, double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("ks_two_sample_critical: level in (0,1)");
  const double c = std::sqrt(-0.5 * std::log(level / 2.0));
  const auto nn = static_cast<double>(n);
  const auto mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

double cf_sup_distance(std::span<const double> sample, const CfFunction& cf,
                       std::span<const double> t_grid) {
  double worst = 0.0;
  for (double t : t_grid) worst = std::max(worst, std::abs(empirical_cf(sample, t) - cf(t)));
  return worst;
}

PsdReport psd_toeplitz_check(const CfFunction& f, std::span<const double> t_points, double tol) {
  const std::size_t m = t_points.size();
  if (m == 0 || m > 64) throw std::invalid_argument("psd_toeplitz_check: need 1..64 points");
  PsdReport report;
  Eigen::MatrixXcd mat(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f(t_points[i] - t_points[j]);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const auto a = mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const auto b = mat(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      report.hermitian_defect = std::max(report.hermitian_defect, std::abs(a - std::conj(b)));
    }
  }
  report.hermitian = report.hermitian_defect <= tol;
  // Symmetrize before solving; the defect has been recorded above.
  const Eigen::MatrixXcd herm = 0.5 * (mat + mat.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("psd_toeplitz_check: eigen solver failed");
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  report.max_eigenvalue = solver.eigenvalues().maxCoeff();
  report.pass = report.hermitian &&
                report.min_eigenvalue >= -tol * std::max(1.0, report.max_eigenvalue);
  return report;
}

}  // namespace phimix
