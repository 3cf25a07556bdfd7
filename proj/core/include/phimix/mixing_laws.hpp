#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phimix/rng.hpp"

namespace phimix {

enum class MixingKind { gamma, exponential, degenerate, custom };

/// A positive random variable Z presented through its Laplace transform
/// phi(s) = E[exp(-s Z)] and an exact sampler.
///
/// Built-in kinds:
///   gamma(shape nu, scale sigma)  phi(s) = (1 + sigma s)^(-nu)
///   exponential(scale sigma)      phi(s) = 1 / (1 + sigma s)
///   degenerate(point c)           phi(s) = exp(-c s)
/// A custom kind pairs a user transform with a user sampler; its transform is
/// only defined for real arguments.
///
/// Values are immutable and safe to share across threads.
class MixingLaw {
 public:
  static MixingLaw gamma(double shape, double scale = 1.0);
  static MixingLaw exponential(double scale = 1.0);
  static MixingLaw degenerate(double point);
  static MixingLaw custom(std::string name, std::function<double(double)> laplace,
                          std::function<double(Rng&)> sampler,
                          std::optional<double> mean = std::nullopt);

  [[nodiscard]] MixingKind kind() const noexcept { return kind_; }
  [[nodiscard]] double shape() const noexcept { return shape_; }
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] double point() const noexcept { return point_; }
  [[nodiscard]] bool has_closed_form() const noexcept { return kind_ != MixingKind::custom; }

  /// phi(s) for s >= 0; throws std::domain_error otherwise.
  [[nodiscard]] double laplace(double s) const;

  /// phi(z) by analytic continuation of the closed form (principal branch).
  /// Throws NumericDomainError when 1 + sigma z lies on the non-positive real
  /// axis, or for custom laws off the non-negative real axis.
  [[nodiscard]] std::complex<double> laplace(std::complex<double> z) const;

  [[nodiscard]] double sample(Rng& rng) const;

  /// E[Z] when known.
  [[nodiscard]] std::optional<double> mean() const;

  /// Short text form, e.g. `gamma(shape=2, scale=1)`.
  [[nodiscard]] std::string describe() const;

 private:
  struct Custom {
    std::string name;
    std::function<double(double)> laplace;
    std::function<double(Rng&)> sampler;
    std::optional<double> mean;
  };

  MixingLaw(MixingKind kind, double shape, double scale, double point)
      : kind_(kind), shape_(shape), scale_(scale), point_(point) {}

  MixingKind kind_;
  double shape_ = 1.0;
  double scale_ = 1.0;
  double point_ = 0.0;
  std::shared_ptr<const Custom> custom_;
};

struct MonotonicityReport {
  bool pass = true;
  // Largest normalized violation, max(0, -(-1)^n D^n f / scale), over all
  // orders and grid points.
  double worst_violation = 0.0;
  int worst_order = -1;
  double worst_point = 0.0;
  // Same quantity per order n = 0..max_order.
  std::vector<double> violation_by_order;
  // Orders at which some grid point violated the tolerance.
  std::vector<int> failing_orders;
};

/// Finite-difference complete-monotonicity witness: checks that
/// (-1)^n D_h^n f(s) >= -tol * scale for n = 0..max_order at every grid point
/// whose forward stencil fits on the grid. `scale` is the largest |f| on the
/// stencil, so rapidly decaying transforms are judged relative to themselves.
///
/// The grid must be strictly increasing with uniform spacing; max_order <= 8.
MonotonicityReport check_complete_monotonicity(const std::function<double(double)>& f,
                                               std::span<const double> grid,
                                               int max_order = 6, double tol = 1e-9);

}  // namespace phimix
