#include "phimix/pgf_family.hpp"

#include <boost/math/distributions/negative_binomial.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <cmath>
#include <random>
#include <stdexcept>

#include "phimix/errors.hpp"

namespace phimix {

PgfFamily::PgfFamily(MixingLaw mixing, int shift, int stride, double theta)
    : mixing_(std::move(mixing)), shift_(shift), stride_(stride), theta_(theta) {
  if (shift < 0) throw std::invalid_argument("PgfFamily: shift must be >= 0");
  if (stride < 1) throw std::invalid_argument("PgfFamily: stride must be >= 1");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw std::invalid_argument("PgfFamily: theta must be positive");
}

PgfFamily PgfFamily::with_theta(double theta) const { return {mixing_, shift_, stride_, theta}; }

double PgfFamily::pgf(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("PgfFamily::pgf: s must lie in [0, 1]");
  const double lead = shift_ == 0 ? 1.0 : std::pow(s, shift_);
  return lead * mixing_.laplace((1.0 - std::pow(s, stride_)) / theta_);
}

std::int64_t PgfFamily::sample(Rng& rng) const {
  const double rate = mixing_.sample(rng) / theta_;
  std::int64_t m = 0;
  if (rate > 0.0) {
    std::poisson_distribution<std::int64_t> poisson(rate);
    m = poisson(rng);
  }
  return shift_ + static_cast<std::int64_t>(stride_) * m;
}

double PgfFamily::scaled_lt(double v) const {
  if (!(v >= 0.0)) throw std::domain_error("PgfFamily::scaled_lt: v must be >= 0");
  const double damp = std::exp(-v * shift_ * theta_);
  const double arg = -std::expm1(-v * stride_ * theta_) / theta_;
  return damp * mixing_.laplace(arg);
}

std::optional<double> PgfFamily::mean() const {
  const auto z = mixing_.mean();
  if (!z) return std::nullopt;
  return shift_ + stride_ * (*z) / theta_;
}

PmfTable pgf_pmf(const PgfFamily& family, int m_max) {
  if (m_max < 0) throw std::invalid_argument("pgf_pmf: m_max must be >= 0");
  const auto& law = family.mixing();
  const double theta = family.theta();
  PmfTable table;
  table.shift = family.shift();
  table.stride = family.stride();
  table.probabilities.resize(static_cast<std::size_t>(m_max) + 1);

  switch (law.kind()) {
    case MixingKind::gamma:
    case MixingKind::exponential: {
      // Z / theta ~ gamma(nu, sigma / theta); mixed Poisson is negative
      // binomial with success probability p = theta / (theta + sigma).
      const double nu = law.shape();
      const double p = theta / (theta + law.scale());
      const double log_p = std::log(p);
      const double log_q = std::log1p(-p);
      for (int m = 0; m <= m_max; ++m) {
        const double log_term = std::lgamma(nu + m) - std::lgamma(nu) - std::lgamma(m + 1.0) +
                                nu * log_p + m * log_q;
        table.probabilities[static_cast<std::size_t>(m)] = std::exp(log_term);
      }
      boost::math::negative_binomial_distribution<double> nb(nu, p);
      table.tail = boost::math::cdf(boost::math::complement(nb, static_cast<double>(m_max)));
      break;
    }
    case MixingKind::degenerate: {
      const double mu = law.point() / theta;
      for (int m = 0; m <= m_max; ++m) {
        table.probabilities[static_cast<std::size_t>(m)] =
            std::exp(m * std::log(mu) - mu - std::lgamma(m + 1.0));
      }
      boost::math::poisson_distribution<double> poisson(mu);
      table.tail = boost::math::cdf(boost::math::complement(poisson, static_cast<double>(m_max)));
      break;
    }
    case MixingKind::custom:
      throw NoClosedFormError("pgf_pmf: no closed form for " + law.describe() +
                              "; use estimate_pmf");
  }
  return table;
}

PmfEstimate estimate_pmf(const PgfFamily& family, int m_max, const McPlan& plan) {
  if (m_max < 0) throw std::invalid_argument("estimate_pmf: m_max must be >= 0");
  if (plan.samples == 0) throw std::invalid_argument("estimate_pmf: need samples");
  const auto draws = draw_scalars(plan, [&](Rng& rng) { return static_cast<double>(family.sample(rng)); });
  std::vector<std::size_t> counts(static_cast<std::size_t>(m_max) + 1, 0);
  std::size_t tail = 0;
  for (double d : draws) {
    const auto m = (static_cast<std::int64_t>(d) - family.shift()) / family.stride();
    if (m <= m_max) {
      ++counts[static_cast<std::size_t>(m)];
    } else {
      ++tail;
    }
  }
  const auto n = static_cast<double>(plan.samples);
  auto se = [n](double p) { return std::sqrt(p * (1.0 - p) / n); };
  PmfEstimate est;
  est.shift = family.shift();
  est.stride = family.stride();
  for (auto c : counts) {
    const double p = static_cast<double>(c) / n;
    est.probabilities.push_back(p);
    est.standard_errors.push_back(se(p));
  }
  est.tail = static_cast<double>(tail) / n;
  est.tail_standard_error = se(est.tail);
  return est;
}

Lemma22Report check_lemma22_limit(const MixingLaw& mixing, int shift, int stride,
                                  std::span<const double> thetas, std::span<const double> v_grid,
                                  double threshold, double slack) {
  if (thetas.empty() || v_grid.empty()) throw std::invalid_argument("check_lemma22_limit: empty grid");
  Lemma22Report report;
  for (double theta : thetas) {
    const PgfFamily family(mixing, shift, stride, theta);
    Lemma22Row row{theta, 0.0, v_grid.front()};
    for (double v : v_grid) {
      const double err = std::abs(family.scaled_lt(v) - mixing.laplace(stride * v));
      if (err > row.sup_error) {
        row.sup_error = err;
        row.worst_v = v;
      }
    }
    if (!report.rows.empty() && row.sup_error > (1.0 + slack) * report.rows.back().sup_error) {
      report.non_increasing = false;
    }
    report.rows.push_back(row);
  }
  report.below_threshold = report.rows.back().sup_error < threshold;
  return report;
}

}  // namespace phimix
