#include "phimix/mixing_laws.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "phimix/errors.hpp"

namespace phimix {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("MixingLaw: ") + what + " must be positive and finite");
  }
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

MixingLaw MixingLaw::gamma(double shape, double scale) {
  require_positive(shape, "gamma shape");
  require_positive(scale, "gamma scale");
  return {MixingKind::gamma, shape, scale, 0.0};
}

MixingLaw MixingLaw::exponential(double scale) {
  require_positive(scale, "exponential scale");
  return {MixingKind::exponential, 1.0, scale, 0.0};
}

MixingLaw MixingLaw::degenerate(double point) {
  require_positive(point, "degenerate point");
  return {MixingKind::degenerate, 0.0, 1.0, point};
}

MixingLaw MixingLaw::custom(std::string name, std::function<double(double)> laplace,
                            std::function<double(Rng&)> sampler, std::optional<double> mean) {
  if (!laplace || !sampler) throw std::invalid_argument("MixingLaw::custom: transform and sampler required");
  MixingLaw law{MixingKind::custom, 0.0, 1.0, 0.0};
  law.custom_ = std::make_shared<const Custom>(
      Custom{std::move(name), std::move(laplace), std::move(sampler), mean});
  return law;
}

double MixingLaw::laplace(double s) const {
  if (!(s >= 0.0)) throw std::domain_error("MixingLaw::laplace: argument must be >= 0");
  switch (kind_) {
    case MixingKind::gamma:
      return std::pow(1.0 + scale_ * s, -shape_);
    case MixingKind::exponential:
      return 1.0 / (1.0 + scale_ * s);
    case MixingKind::degenerate:
      return std::exp(-point_ * s);
    case MixingKind::custom:
      return custom_->laplace(s);
  }
  return 0.0;
}

std::complex<double> MixingLaw::laplace(std::complex<double> z) const {
  switch (kind_) {
    case MixingKind::gamma:
    case MixingKind::exponential: {
      const std::complex<double> w = 1.0 + scale_ * z;
      if (w.imag() == 0.0 && w.real() <= 0.0) {
        throw NumericDomainError("MixingLaw::laplace: 1 + scale*z on the non-positive real axis");
      }
      if (kind_ == MixingKind::exponential) return 1.0 / w;
      return std::exp(-shape_ * std::log(w));
    }
    case MixingKind::degenerate:
      return std::exp(-point_ * z);
    case MixingKind::custom:
      if (z.imag() != 0.0 || z.real() < 0.0) {
        throw NumericDomainError("MixingLaw::laplace: custom law '" + custom_->name +
                                 "' has no continuation off [0, inf)");
      }
      return custom_->laplace(z.real());
  }
  return {};
}

double MixingLaw::sample(Rng& rng) const {
  switch (kind_) {
    case MixingKind::gamma: {
      std::gamma_distribution<double> dist(shape_, scale_);
      return dist(rng);
    }
    case MixingKind::exponential:
      return scale_ * rng.exponential();
    case MixingKind::degenerate:
      return point_;
    case MixingKind::custom:
      return custom_->sampler(rng);
  }
  return 0.0;
}

std::optional<double> MixingLaw::mean() const {
  switch (kind_) {
    case MixingKind::gamma:
      return shape_ * scale_;
    case MixingKind::exponential:
      return scale_;
    case MixingKind::degenerate:
      return point_;
    case MixingKind::custom:
      return custom_->mean;
  }
  return std::nullopt;
}

std::string MixingLaw::describe() const {
  switch (kind_) {
    case MixingKind::gamma:
      return "gamma(shape=" + format_number(shape_) + ", scale=" + format_number(scale_) + ")";
    case MixingKind::exponential:
      return "exponential(scale=" + format_number(scale_) + ")";
    case MixingKind::degenerate:
      return "degenerate(point=" + format_number(point_) + ")";
    case MixingKind::custom:
      return "custom(" + custom_->name + ")";
  }
  return {};
}

MonotonicityReport check_complete_monotonicity(const std::function<double(double)>& f,
                                               std::span<const double> grid, int max_order,
                                               double tol) {
  if (max_order < 0 || max_order > 8) {
    throw std::invalid_argument("check_complete_monotonicity: max_order must be in [0, 8]");
  }
  if (grid.size() < 2) throw std::invalid_argument("check_complete_monotonicity: need >= 2 grid points");
  const double h = grid[1] - grid[0];
  if (!(h > 0.0)) throw std::invalid_argument("check_complete_monotonicity: grid must be increasing");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double step = grid[i] - grid[i - 1];
    if (!(step > 0.0) || std::abs(step - h) > 1e-9 * std::max(1.0, std::abs(grid[i]))) {
      throw std::invalid_argument("check_complete_monotonicity: grid spacing must be uniform");
    }
  }

  const std::size_t m = grid.size();
  std::vector<double> values(m);
  for (std::size_t i = 0; i < m; ++i) values[i] = f(grid[0] + h * static_cast<double>(i));

  MonotonicityReport report;
  report.violation_by_order.assign(static_cast<std::size_t>(max_order) + 1, 0.0);

  // diff[i] holds D_h^n f(s_i) for the current order n.
  std::vector<double> diff = values;
  for (int n = 0; n <= max_order; ++n) {
    const std::size_t usable = m - static_cast<std::size_t>(n);
    if (n > 0) {
      for (std::size_t i = 0; i < usable; ++i) diff[i] = diff[i + 1] - diff[i];
    }
    if (usable == 0) break;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    bool order_failed = false;
    for (std::size_t i = 0; i < usable; ++i) {
      double scale = 0.0;
      for (std::size_t k = i; k <= i + static_cast<std::size_t>(n); ++k) scale = std::max(scale, std::abs(values[k]));
      if (scale == 0.0) scale = 1.0;
      const double normalized = sign * diff[i] / scale;
      const double violation = std::max(0.0, -normalized);
      auto& slot = report.violation_by_order[static_cast<std::size_t>(n)];
      slot = std::max(slot, violation);
      if (violation > tol) {
        order_failed = true;
        if (violation > report.worst_violation) {
          report.worst_violation = violation;
          report.worst_order = n;
          report.worst_point = grid[i];
        }
      }
    }
    if (order_failed) {
      report.pass = false;
      report.failing_orders.push_back(n);
    }
  }
  return report;
}

}  // namespace phimix
