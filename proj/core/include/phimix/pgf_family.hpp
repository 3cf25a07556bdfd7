#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "phimix/mixing_laws.hpp"
#include "phimix/monte_carlo.hpp"
#include "phimix/rng.hpp"

namespace phimix {

/// Counting law N_theta with PGF
///   P_theta(s) = s^j phi((1 - s^k) / theta),   0 <= s <= 1,
/// for a mixing law phi, shift j >= 0, stride k >= 1 and theta > 0.
///
/// Structurally N_theta = j + k M where M is mixed Poisson: Z ~ phi and
/// M | Z ~ Poisson(Z / theta).
class PgfFamily {
 public:
  PgfFamily(MixingLaw mixing, int shift, int stride, double theta);

  [[nodiscard]] const MixingLaw& mixing() const noexcept { return mixing_; }
  [[nodiscard]] int shift() const noexcept { return shift_; }
  [[nodiscard]] int stride() const noexcept { return stride_; }
  [[nodiscard]] double theta() const noexcept { return theta_; }

  [[nodiscard]] PgfFamily with_theta(double theta) const;

  /// P_theta(s) for s in [0, 1]; throws std::domain_error otherwise.
  [[nodiscard]] double pgf(double s) const;

  /// Exact draw via the mixed-Poisson representation.
  [[nodiscard]] std::int64_t sample(Rng& rng) const;

  /// Laplace transform of theta N_theta at v > 0:
  ///   exp(-v j theta) phi((1 - exp(-v k theta)) / theta).
  [[nodiscard]] double scaled_lt(double v) const;

  /// E[N_theta] = j + k E[Z] / theta, when the mixing mean is known.
  [[nodiscard]] std::optional<double> mean() const;

 private:
  MixingLaw mixing_;
  int shift_;
  int stride_;
  double theta_;
};

/// Probabilities P(N = j + k m) for m = 0..m_max plus the remaining tail mass.
struct PmfTable {
  int shift = 0;
  int stride = 1;
  std::vector<double> probabilities;
  double tail = 0.0;

  [[nodiscard]] std::int64_t support_point(std::size_t m) const {
    return shift + static_cast<std::int64_t>(stride) * static_cast<std::int64_t>(m);
  }
};

/// Closed-form pmf: negative binomial for gamma/exponential mixing, Poisson
/// for degenerate mixing. The tail is computed independently of the listed
/// terms. Throws NoClosedFormError for custom mixing laws.
PmfTable pgf_pmf(const PgfFamily& family, int m_max);

/// Monte-Carlo pmf estimate with binomial standard errors; works for any
/// mixing law.
struct PmfEstimate {
  int shift = 0;
  int stride = 1;
  std::vector<double> probabilities;
  std::vector<double> standard_errors;
  double tail = 0.0;
  double tail_standard_error = 0.0;
};

PmfEstimate estimate_pmf(const PgfFamily& family, int m_max, const McPlan& plan);

struct Lemma22Row {
  double theta = 0.0;
  double sup_error = 0.0;  // sup_v |scaled_lt(v) - phi(k v)|
  double worst_v = 0.0;
};

struct Lemma22Report {
  std::vector<Lemma22Row> rows;
  bool non_increasing = true;  // each error <= (1 + slack) * previous
  bool below_threshold = false;  // final error < threshold
  [[nodiscard]] bool pass() const noexcept { return non_increasing && below_threshold; }
};

/// Tabulates the distance between the Laplace transform of theta N_theta and
/// its limit phi(k v) along a decreasing theta sequence. Non-convergence is
/// reported, never thrown.
Lemma22Report check_lemma22_limit(const MixingLaw& mixing, int shift, int stride,
                                  std::span<const double> thetas, std::span<const double> v_grid,
                                  double threshold = 1e-2, double slack = 0.10);

}  // namespace phimix
