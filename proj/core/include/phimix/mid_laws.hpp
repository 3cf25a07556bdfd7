#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "phimix/mixing_laws.hpp"
#include "phimix/rng.hpp"

namespace phimix {

using DfFunction = std::function<double(std::span<const double>)>;

enum class MidKind { product_frechet, product_neg_exponential };

/// Max-infinitely divisible d.f. H on R^d, d >= 2, of product form.
///
///   product_frechet(gamma):   H(x) = exp(-sum_i x_i^(-gamma_i)) on x > 0, else 0
///   product_neg_exponential:  H(x) = exp(sum_i min(x_i, 0)), coordinates are -Exp(1)
///
/// Powers H^t are of the same kind, which makes H^t exactly samplable.
class MidLaw {
 public:
  static MidLaw product_frechet(std::vector<double> shapes);
  static MidLaw product_neg_exponential(std::size_t dim);

  [[nodiscard]] MidKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t dim() const noexcept { return shapes_.size(); }
  [[nodiscard]] const std::vector<double>& shapes() const noexcept { return shapes_; }

  /// Infimum of the support in coordinate i (0 for Frechet, -inf otherwise).
  [[nodiscard]] double lower_corner(std::size_t i) const;

  [[nodiscard]] double df(std::span<const double> x) const;

  /// -log H(x); +inf outside the support.
  [[nodiscard]] double neg_log_df(std::span<const double> x) const;

  /// Writes one draw from H^t into `out`.
  void sample_power(double t, Rng& rng, std::span<double> out) const;

  [[nodiscard]] DfFunction as_function() const;
  [[nodiscard]] std::string describe() const;

 private:
  MidLaw(MidKind kind, std::vector<double> shapes) : kind_(kind), shapes_(std::move(shapes)) {}

  MidKind kind_;
  std::vector<double> shapes_;
};

/// Rectangular grid given by one sorted axis per coordinate.
struct RectGrid {
  std::vector<std::vector<double>> axes;

  [[nodiscard]] std::size_t dim() const noexcept { return axes.size(); }
  [[nodiscard]] std::size_t size() const;
  /// Multi-index of the flat position `flat` (last coordinate fastest).
  [[nodiscard]] std::vector<std::size_t> unflatten(std::size_t flat) const;
  [[nodiscard]] std::size_t flatten(std::span<const std::size_t> index) const;
  [[nodiscard]] std::vector<double> point(std::span<const std::size_t> index) const;
  /// Every grid point in flat order.
  [[nodiscard]] std::vector<std::vector<double>> points() const;
};

RectGrid square_grid(std::span<const double> axis, std::size_t dim);

/// A d.f. tabulated on a rectangular grid.
struct TabulatedDf {
  RectGrid grid;
  std::vector<double> values;  // flat, same order as RectGrid::unflatten
};

TabulatedDf tabulate(const DfFunction& df, const RectGrid& grid);

struct MidViolation {
  enum class Kind { range, monotone, rectangle };
  Kind kind = Kind::range;
  double power = 1.0;
  std::vector<std::size_t> cell;  // grid multi-index (lower corner for rectangles)
  std::size_t axis = 0;           // monotone violations only
  double value = 0.0;             // offending value, increment or cell mass
};

struct MidCheckReport {
  bool pass = true;
  std::vector<MidViolation> violations;
};

const char* to_string(MidViolation::Kind kind);

/// Checks that every power H^s is a d.f. on the grid: values in [0, 1],
/// non-decreasing along each axis, and non-negative mass (inclusion-exclusion
/// over the 2^d corners) on every grid cell.
MidCheckReport mid_power_check(const TabulatedDf& table, std::span<const double> powers,
                               double tol = 1e-12);
MidCheckReport mid_power_check(const DfFunction& df, const RectGrid& grid,
                               std::span<const double> powers, double tol = 1e-12);

struct SupportReport {
  bool pass = true;
  // Grid points where positivity disagrees with the product of the
  // coordinate projections of the positivity set.
  std::vector<std::vector<std::size_t>> offending;
};

/// Tests whether {H > 0} restricted to the grid is a rectangle.
SupportReport support_rectangle_check(const TabulatedDf& table);
SupportReport support_rectangle_check(const DfFunction& df, const RectGrid& grid);

/// phi(-log H(x)); 0 where H(x) = 0.
double mixture_mid_df(const MixingLaw& mixing, const MidLaw& law, std::span<const double> x);
double mixture_mid_df(const MixingLaw& mixing, const DfFunction& df, std::span<const double> x);

/// Y(Z) for the extremal process Y with P{Y(t) <= x} = H(x)^t and an
/// independent Z with transform phi; the draw has d.f. phi(-log H).
void sample_extremal_at_random_time(const MixingLaw& mixing, const MidLaw& law, Rng& rng,
                                    std::span<double> out);

}  // namespace phimix
