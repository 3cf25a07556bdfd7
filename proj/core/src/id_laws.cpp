#include "phimix/id_laws.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phimix {

namespace {

constexpr double kPi = std::numbers::pi;

double max_skew(double alpha) { return std::min(kPi * alpha / 2.0, kPi - kPi * alpha / 2.0); }

void validate(double scale, double index, double skew) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("StableExponent: scale must be positive");
  if (!(index > 0.0 && index <= 2.0)) throw std::invalid_argument("StableExponent: index must lie in (0, 2]");
  if (!(std::abs(skew) <= max_skew(index) + 1e-12)) {
    throw std::invalid_argument("StableExponent: |skew| exceeds min(pi alpha/2, pi - pi alpha/2)");
  }
}

}  // namespace

StableExponent::StableExponent(double scale, double index, double skew)
    : scale_(scale), index_(index), skew_(skew) {
  validate(scale, index, skew);
}

std::complex<double> StableExponent::operator()(double t) const {
  if (t == 0.0) return {0.0, 0.0};
  const double magnitude = scale_ * std::pow(std::abs(t), index_);
  const double angle = t > 0.0 ? -skew_ : skew_;
  return std::polar(magnitude, angle);
}

std::complex<double> StableExponent::cf(double t) const { return std::exp(-(*this)(t)); }

bool StableExponent::samplable() const noexcept { return !(index_ == 1.0 && skew_ != 0.0); }

Exponent StableExponent::as_function() const {
  return [e = *this](double t) { return e(t); };
}

double sample_strictly_stable(const StableExponent& exponent, Rng& rng) {
  if (!exponent.samplable()) {
    throw std::invalid_argument("sample_strictly_stable: alpha = 1 requires beta = 0");
  }
  const double alpha = exponent.index();
  const double beta = exponent.skew();
  const double v = kPi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  const double scale = std::pow(exponent.scale(), 1.0 / alpha);

  if (alpha == 1.0) return scale * std::tan(v);
  if (alpha == 2.0) return scale * 2.0 * std::sin(v) * std::sqrt(w);

  const double av = alpha * v + beta;
  const double lead = std::sin(av) / std::pow(std::cos(v), 1.0 / alpha);
  const double tail = std::pow(std::cos(v - av) / w, (1.0 - alpha) / alpha);
  return scale * lead * tail;
}

std::complex<double> mixture_cf(const MixingLaw& mixing, const StableExponent& exponent, double t) {
  return mixing.laplace(exponent(t));
}

std::complex<double> mixture_cf(const MixingLaw& mixing, const Exponent& exponent, double t) {
  return mixing.laplace(exponent(t));
}

std::complex<double> linnik_cf(const LinnikParams& p, double t) {
  if (!(p.nu > 0.0)) throw std::invalid_argument("linnik_cf: nu must be positive");
  const StableExponent psi(p.lambda, p.alpha, p.beta);
  return std::pow(1.0 + psi(t), -p.nu);
}

double sample_mixture_id(const MixingLaw& mixing, const StableExponent& exponent, Rng& rng) {
  const double z = mixing.sample(rng);
  const double s = sample_strictly_stable(exponent, rng);
  return std::pow(z, 1.0 / exponent.index()) * s;
}

}  // namespace phimix
