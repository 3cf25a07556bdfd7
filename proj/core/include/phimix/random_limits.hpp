#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "phimix/id_laws.hpp"
#include "phimix/mid_laws.hpp"
#include "phimix/monte_carlo.hpp"
#include "phimix/pgf_family.hpp"
#include "phimix/stats_verify.hpp"

namespace phimix {

using ScalarSampler = std::function<double(Rng&)>;
using VectorSampler = std::function<void(Rng&, std::span<double>)>;
using CountSampler = std::function<std::int64_t(Rng&)>;

/// Normalization of a random sum: S_N / scale - N * center.
struct SumNorming {
  double scale = 1.0;
  double center = 0.0;
};

/// Per-coordinate normalization of a random maximum: (M_i - center_i) / scale_i.
struct MaxNorming {
  std::vector<double> scale;
  std::vector<double> center;
};

/// Counting source that always returns `n`.
CountSampler fixed_count(std::int64_t n);

CountSampler counting_sampler(const PgfFamily& family);

/// Draws N, adds N i.i.d. increments and normalizes. N = 0 gives -0 * center = 0.
double random_sum_sample(const CountSampler& count, const ScalarSampler& increment,
                         const SumNorming& norming, Rng& rng);
double random_sum_sample(const PgfFamily& counting, const ScalarSampler& increment,
                         const SumNorming& norming, Rng& rng);

struct MaxDraw {
  std::vector<double> point;
  std::size_t redraws = 0;  // draws of N = 0 that were rejected
};

/// Component-wise maximum of N i.i.d. vectors, normalized. N = 0 is redrawn
/// until N >= 1; the number of rejections is returned alongside the point.
MaxDraw random_max_sample(const CountSampler& count, const VectorSampler& vector, std::size_t dim,
                          const MaxNorming& norming, Rng& rng);
MaxDraw random_max_sample(const PgfFamily& counting, const VectorSampler& vector, std::size_t dim,
                          const MaxNorming& norming, Rng& rng);

/// a(theta) = (stride / theta)^(1/alpha), b = 0. With stride 1 this is the
/// classical stable norming n^(1/alpha) at theta = 1/n.
SumNorming attraction_norming(double alpha, double theta, int stride = 1);

/// a = E[N_theta], b = 0. Geometric sums on {1, 2, ...} of exponentials
/// normalized this way are exactly exponential at every theta.
SumNorming mean_norming(const PgfFamily& family);

// Convergence experiments ------------------------------------------------

struct ConvergencePoint {
  std::vector<double> grid_point;
  std::complex<double> empirical;
  std::complex<double> target;
  double abs_error = 0.0;
};

struct ThetaResult {
  double theta = 0.0;
  double sup_error = 0.0;
  std::size_t worst_index = 0;
  std::vector<ConvergencePoint> points;
  double conditioning_rate = 0.0;  // fraction of N = 0 draws rejected (maxima only)
};

struct ConvergenceReport {
  std::vector<ThetaResult> results;

  /// Sup errors strictly decreasing along the theta sequence.
  [[nodiscard]] bool decreasing() const;
  [[nodiscard]] double final_sup_error() const;
};

/// N_theta-sum experiment. For each theta the counting family is
/// (mixing, shift, stride, theta) and `norming(theta)` normalizes the sum.
/// The distance is the sup CF distance on `t_grid` to `target_cf`, or, when
/// `target_cdf` is set, the one-sample KS distance (the listed points are
/// then the d.f. evaluated on `x_grid`).
struct SumExperiment {
  MixingLaw mixing = MixingLaw::exponential();
  int shift = 0;
  int stride = 1;
  std::vector<double> thetas{1e-1, 1e-2, 1e-3};
  ScalarSampler increment;
  std::function<SumNorming(const PgfFamily&)> norming;
  CfFunction target_cf;
  CdfFunction target_cdf;
  std::vector<double> t_grid = default_cf_grid();
  std::vector<double> x_grid;
  McPlan plan;
};

ConvergenceReport transfer_sum_experiment(const SumExperiment& experiment);

/// N_theta-maximum experiment; distance is the sup over the rectangular
/// x-grid of |empirical joint d.f. - target_df|.
struct MaxExperiment {
  MixingLaw mixing = MixingLaw::exponential();
  int shift = 1;
  int stride = 1;
  std::vector<double> thetas{1e-1, 1e-2, 1e-3};
  std::size_t dim = 2;
  VectorSampler vector;
  std::function<MaxNorming(const PgfFamily&)> norming;
  std::function<double(std::span<const double>)> target_df;
  std::vector<std::vector<double>> x_grid;  // flattened list of grid points
  McPlan plan;
};

ConvergenceReport transfer_max_experiment(const MaxExperiment& experiment);

/// Canonical max experiment target: phi(-log H(x)), i.e. mixture_mid_df.
std::function<double(std::span<const double>)> mixture_mid_target(const MixingLaw& mixing,
                                                                   const MidLaw& law);

// Necessary-and-sufficient condition ----------------------------------------

/// g(theta, t): CF of the increment at level theta.
using CfFamily = std::function<std::complex<double>(double theta, double t)>;

struct NsRow {
  double theta = 0.0;
  double sup_error = 0.0;  // sup_t |(1 - g_theta(t)) / theta - psi(t)|
  double worst_t = 0.0;
};

struct NsReport {
  std::vector<NsRow> rows;
  [[nodiscard]] bool decreasing() const;
};

NsReport ns_condition_check(const CfFamily& g, const Exponent& psi, std::span<const double> thetas,
                            std::span<const double> t_grid);

}  // namespace phimix
