#include "phimix/random_limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace phimix {

CountSampler fixed_count(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("fixed_count: n must be >= 0");
  return [n](Rng&) { return n; };
}

CountSampler counting_sampler(const PgfFamily& family) {
  return [family](Rng& rng) { return family.sample(rng); };
}

double random_sum_sample(const CountSampler& count, const ScalarSampler& increment,
                         const SumNorming& norming, Rng& rng) {
  if (!(norming.scale > 0.0)) throw std::invalid_argument("random_sum_sample: scale must be positive");
  const std::int64_t n = count(rng);
  double sum = 0.0;
  for (std::int64_t i = 0; i < n; ++i) sum += increment(rng);
  return sum / norming.scale - static_cast<double>(n) * norming.center;
}

double random_sum_sample(const PgfFamily& counting, const ScalarSampler& increment,
                         const SumNorming& norming, Rng& rng) {
  const std::int64_t n = counting.sample(rng);
  return random_sum_sample(fixed_count(n), increment, norming, rng);
}

MaxDraw random_max_sample(const CountSampler& count, const VectorSampler& vector, std::size_t dim,
                          const MaxNorming& norming, Rng& rng) {
  if (norming.scale.size() != dim || norming.center.size() != dim) {
    throw std::invalid_argument("random_max_sample: norming dimension mismatch");
  }
  MaxDraw draw;
  std::int64_t n = count(rng);
  while (n == 0) {
    ++draw.redraws;
    n = count(rng);
  }
  draw.point.assign(dim, -std::numeric_limits<double>::infinity());
  std::vector<double> y(dim);
  for (std::int64_t i = 0; i < n; ++i) {
    vector(rng, y);
    for (std::size_t k = 0; k < dim; ++k) draw.point[k] = std::max(draw.point[k], y[k]);
  }
  for (std::size_t k = 0; k < dim; ++k) {
    draw.point[k] = (draw.point[k] - norming.center[k]) / norming.scale[k];
  }
  return draw;
}

MaxDraw random_max_sample(const PgfFamily& counting, const VectorSampler& vector, std::size_t dim,
                          const MaxNorming& norming, Rng& rng) {
  return random_max_sample(counting_sampler(counting), vector, dim, norming, rng);
}

SumNorming attraction_norming(double alpha, double theta, int stride) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("attraction_norming: alpha must lie in (0, 2]");
  if (!(theta > 0.0)) throw std::invalid_argument("attraction_norming: theta must be positive");
  if (stride < 1) throw std::invalid_argument("attraction_norming: stride must be >= 1");
  return {std::pow(stride / theta, 1.0 / alpha), 0.0};
}

SumNorming mean_norming(const PgfFamily& family) {
  const auto mean = family.mean();
  if (!mean || !(*mean > 0.0)) throw std::invalid_argument("mean_norming: counting law has no positive mean");
  return {*mean, 0.0};
}

bool ConvergenceReport::decreasing() const {
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (!(results[i].sup_error < results[i - 1].sup_error)) return false;
  }
  return true;
}

double ConvergenceReport::final_sup_error() const {
  if (results.empty()) throw std::logic_error("ConvergenceReport: no results");
  return results.back().sup_error;
}

namespace {

void require_decreasing(const std::vector<double>& thetas) {
  if (thetas.empty()) throw std::invalid_argument("experiment: empty theta sequence");
  for (std::size_t i = 1; i < thetas.size(); ++i) {
    if (!(thetas[i] < thetas[i - 1])) throw std::invalid_argument("experiment: thetas must strictly decrease");
  }
}

}  // namespace

ConvergenceReport transfer_sum_experiment(const SumExperiment& exp) {
  require_decreasing(exp.thetas);
  if (!exp.increment || !exp.norming) throw std::invalid_argument("transfer_sum_experiment: sampler and norming required");
  if (!exp.target_cf && !exp.target_cdf) throw std::invalid_argument("transfer_sum_experiment: no target");

  ConvergenceReport report;
  for (double theta : exp.thetas) {
    const PgfFamily family(exp.mixing, exp.shift, exp.stride, theta);
    const SumNorming norming = exp.norming(family);
    const auto sample = draw_scalars(exp.plan, [&](Rng& rng) {
      return random_sum_sample(family, exp.increment, norming, rng);
    });

    ThetaResult result;
    result.theta = theta;
    if (exp.target_cdf) {
      for (double x : exp.x_grid) {
        const double emp = empirical_df(sample, x);
        const double tgt = exp.target_cdf(x);
        result.points.push_back({{x}, emp, tgt, std::abs(emp - tgt)});
      }
      result.sup_error = ks_distance(sample, exp.target_cdf);
    } else {
      for (double t : exp.t_grid) {
        const auto emp = empirical_cf(sample, t);
        const auto tgt = exp.target_cf(t);
        result.points.push_back({{t}, emp, tgt, std::abs(emp - tgt)});
      }
    }
    double worst = -1.0;
    for (std::size_t i = 0; i < result.points.size(); ++i) {
      if (result.points[i].abs_error > worst) {
        worst = result.points[i].abs_error;
        result.worst_index = i;
      }
    }
    if (!exp.target_cdf) result.sup_error = worst;
    report.results.push_back(std::move(result));
  }
  return report;
}

ConvergenceReport transfer_max_experiment(const MaxExperiment& exp) {
  require_decreasing(exp.thetas);
  if (exp.dim < 2) throw std::invalid_argument("transfer_max_experiment: dimension must be >= 2");
  if (!exp.vector || !exp.norming || !exp.target_df) {
    throw std::invalid_argument("transfer_max_experiment: sampler, norming and target required");
  }
  for (const auto& p : exp.x_grid) {
    if (p.size() != exp.dim) throw std::invalid_argument("transfer_max_experiment: grid dimension mismatch");
  }

  ConvergenceReport report;
  for (double theta : exp.thetas) {
    const PgfFamily family(exp.mixing, exp.shift, exp.stride, theta);
    const MaxNorming norming = exp.norming(family);
    const McPlan& plan = exp.plan;
    // Rejections are tallied per sample slot so the total is schedule-independent.
    std::vector<double> redraws(plan.samples, 0.0);
    std::vector<double> flat(plan.samples * exp.dim);
    detail::for_each_block(plan, [&](std::size_t, std::size_t begin, std::size_t end, Rng& rng) {
      for (std::size_t i = begin; i < end; ++i) {
        auto draw = random_max_sample(family, exp.vector, exp.dim, norming, rng);
        std::copy(draw.point.begin(), draw.point.end(), flat.begin() + static_cast<std::ptrdiff_t>(i * exp.dim));
        redraws[i] = static_cast<double>(draw.redraws);
      }
    });
    VectorSample sample{exp.dim, std::move(flat), plan.seed, family.mixing().describe()};

    ThetaResult result;
    result.theta = theta;
    double total_redraws = 0.0;
    for (double r : redraws) total_redraws += r;
    result.conditioning_rate = total_redraws / (total_redraws + static_cast<double>(plan.samples));
    for (std::size_t i = 0; i < exp.x_grid.size(); ++i) {
      const auto& x = exp.x_grid[i];
      const double emp = empirical_df(sample, x);
      const double tgt = exp.target_df(x);
      const double err = std::abs(emp - tgt);
      result.points.push_back({x, emp, tgt, err});
      if (err > result.sup_error) {
        result.sup_error = err;
        result.worst_index = i;
      }
    }
    report.results.push_back(std::move(result));
  }
  return report;
}

std::function<double(std::span<const double>)> mixture_mid_target(const MixingLaw& mixing,
                                                                   const MidLaw& law) {
  return [mixing, law](std::span<const double> x) { return mixture_mid_df(mixing, law, x); };
}

bool NsReport::decreasing() const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].sup_error < rows[i - 1].sup_error)) return false;
  }
  return true;
}

NsReport ns_condition_check(const CfFamily& g, const Exponent& psi, std::span<const double> thetas,
                            std::span<const double> t_grid) {
  if (thetas.empty() || t_grid.empty()) throw std::invalid_argument("ns_condition_check: empty grid");
  NsReport report;
  for (double theta : thetas) {
    if (!(theta > 0.0)) throw std::invalid_argument("ns_condition_check: theta must be positive");
    NsRow row{theta, 0.0, t_grid.front()};
    for (double t : t_grid) {
      const auto deficiency = (1.0 - g(theta, t)) / theta;
      const double err = std::abs(deficiency - psi(t));
      if (err > row.sup_error) {
        row.sup_error = err;
        row.worst_t = t;
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace phimix
