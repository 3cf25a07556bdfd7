#pragma once

#include <optional>
#include <span>
#include <vector>

#include "phimix/id_laws.hpp"
#include "phimix/mixing_laws.hpp"
#include "phimix/stats_verify.hpp"

namespace phimix {

/// phi(s) / phi(c s): the transform phi_c in phi(s) = phi(c s) phi_c(s).
double selfdecomp_factor(const MixingLaw& mixing, double c, double s);

struct FactorCheck {
  double c = 0.0;
  MonotonicityReport monotonicity;
};

struct ClassLReport {
  bool pass = true;
  std::vector<FactorCheck> checks;
};

/// Runs the complete-monotonicity witness on s -> phi(s)/phi(c s) for every c.
/// Passing means phi is numerically consistent with self-decomposability.
ClassLReport classl_factor_check(const MixingLaw& mixing, std::span<const double> c_grid,
                                 std::span<const double> s_grid, int max_order = 6,
                                 double tol = 1e-9);

/// Default grids used when none are supplied: c in {0.3, 0.5, 0.7},
/// s in [0, 10] with step 0.1.
std::vector<double> default_c_grid();
std::vector<double> default_s_grid();

struct CfFactorCheck {
  double c = 0.0;
  PsdReport psd;
  double max_modulus = 0.0;          // max |g_c| over the evaluation points
  std::optional<double> zero_at;     // located real zero of f, if any
  bool pass = false;
};

struct SelfDecompReport {
  bool pass = true;
  std::vector<CfFactorCheck> checks;
};

/// For each c forms g_c(t) = f(t) / f(c t) and requires the Toeplitz matrix
/// [g_c(t_i - t_j)] to be positive semidefinite and |g_c| <= 1 + tol. A real
/// zero of f among the evaluation points (the differences t_i - t_j) fails
/// the check and is reported with its location.
SelfDecompReport selfdecomp_cf_check(const CfFunction& f, std::span<const double> c_grid,
                                     std::span<const double> t_grid, double tol = 1e-8);

/// phi(psi(t)) for a mixing law that passes classl_factor_check on the
/// default grids; throws std::invalid_argument otherwise.
CfFunction construct_classl_mixture(const MixingLaw& mixing, const StableExponent& exponent);

struct ModeReport {
  std::size_t modes = 0;
  std::vector<double> mode_locations;
  double bandwidth = 0.0;
};

/// Counts local maxima of a Gaussian kernel density estimate on `grid`.
/// Maxima whose prominence is within three standard deviations of the
/// estimate's sampling noise are ignored. bandwidth <= 0 selects
/// Silverman's rule.
ModeReport kde_mode_count(std::span<const double> sample, std::span<const double> grid,
                          double bandwidth = 0.0);

}  // namespace phimix
