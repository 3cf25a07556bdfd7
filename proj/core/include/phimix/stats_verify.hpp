#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace phimix {

using CfFunction = std::function<std::complex<double>(double)>;
using CdfFunction = std::function<double(double)>;

/// A seeded scalar Monte-Carlo sample together with a text description
/// of how it was drawn.
struct EmpiricalSample {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string spec;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// Row-major sample of `dim`-vectors.
struct VectorSample {
  std::size_t dim = 0;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string spec;

  [[nodiscard]] std::size_t size() const noexcept { return dim == 0 ? 0 : values.size() / dim; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {values.data() + i * dim, dim};
  }
};

// Grids ------------------------------------------------------------------

/// `points` equally spaced values from `from` to `to` inclusive.
std::vector<double> linear_grid(double from, double to, std::size_t points);

/// `points` log-equally spaced values from `from` to `to` inclusive (both > 0).
std::vector<double> log_grid(double from, double to, std::size_t points);

/// The default CF grid: 61 points on [-5, 5].
std::vector<double> default_cf_grid();

// Empirical transforms ---------------------------------------------------

/// (1/n) sum_j exp(i t x_j). Exactly 1 at t = 0.
std::complex<double> empirical_cf(std::span<const double> sample, double t);

/// Fraction of sample points <= x.
double empirical_df(std::span<const double> sample, double x);

/// Fraction of sample rows that are component-wise <= x.
double empirical_df(const VectorSample& sample, std::span<const double> x);

/// Mean of f(x_j).
double empirical_mean(std::span<const double> sample, const std::function<double(double)>& f);

// Distances ---------------------------------------------------------------

/// One-sample Kolmogorov-Smirnov statistic sup_x |F_n(x) - F(x)|, evaluated
/// on both sides of every jump.
double ks_distance(std::span<const double> sample, const CdfFunction& cdf);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic critical value of the two-sample KS statistic at `level`
/// (one of 0.10, 0.05, 0.01, 0.001).
double ks_two_sample_critical(std::size_t n, std::size_t m, double level);

/// max over the grid of |empirical_cf(t) - cf(t)|.
double cf_sup_distance(std::span<const double> sample, const CfFunction& cf,
                       std::span<const double> t_grid);

// Positive-definiteness witness -------------------------------------------

struct PsdReport {
  bool pass = false;
  bool hermitian = true;
  double hermitian_defect = 0.0;  // max |f(-t) - conj f(t)| over the grid
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// Smallest eigenvalue of the Hermitian matrix [f(t_i - t_j)]. Passes iff the
/// input is Hermitian to `tol` and min eigenvalue >= -tol * max(1, max eigenvalue).
/// At most 64 points.
PsdReport psd_toeplitz_check(const CfFunction& f, std::span<const double> t_points,
                             double tol = 1e-8);

}  // namespace phimix
