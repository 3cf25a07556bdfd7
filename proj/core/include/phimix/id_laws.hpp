#pragma once

#include <complex>
#include <functional>

#include "phimix/mixing_laws.hpp"
#include "phimix/rng.hpp"

namespace phimix {

/// Levy exponent psi of an infinitely divisible law: its CF is exp(-psi(t)).
using Exponent = std::function<std::complex<double>(double)>;

/// Exponent of a strictly stable law,
///   psi(t) = lambda |t|^alpha exp(-i beta sgn t),
/// with lambda > 0, 0 < alpha <= 2 and |beta| <= min(pi alpha / 2, pi - pi alpha / 2).
class StableExponent {
 public:
  StableExponent(double scale, double index, double skew = 0.0);

  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] double index() const noexcept { return index_; }
  [[nodiscard]] double skew() const noexcept { return skew_; }

  /// psi(t); psi(0) = 0.
  [[nodiscard]] std::complex<double> operator()(double t) const;

  /// exp(-psi(t)).
  [[nodiscard]] std::complex<double> cf(double t) const;

  /// False only for alpha = 1 with beta != 0, which the sampler rejects.
  [[nodiscard]] bool samplable() const noexcept;

  [[nodiscard]] Exponent as_function() const;

 private:
  double scale_;
  double index_;
  double skew_;
};

/// Draws from the strictly stable law with CF exp(-psi(t)).
///
/// Uses the Chambers-Mallows-Stuck construction in Zolotarev's form. With
/// V ~ U(-pi/2, pi/2) and W ~ Exp(1) independent,
///
///   X = lambda^(1/alpha) sin(alpha V + beta) / cos(V)^(1/alpha)
///       * (cos(V - alpha V - beta) / W)^((1 - alpha) / alpha).
///
/// Relative to the (sigma, b) parameters of the S_alpha(sigma, b, 0) form
/// exp(-sigma^alpha |t|^alpha (1 - i b sgn(t) tan(pi alpha / 2))), this is
/// sigma^alpha = lambda cos(beta) and b tan(pi alpha / 2) = tan(beta); the
/// Weron shift B = atan(b tan(pi alpha/2)) / alpha reduces to beta / alpha and
/// the Weron scale (1 + b^2 tan^2(pi alpha/2))^(1/(2 alpha)) cancels against
/// cos(beta)^(1/alpha). alpha = 2 gives N(0, 2 lambda); alpha = 1, beta = 0
/// gives Cauchy with scale lambda.
///
/// Throws std::invalid_argument for alpha = 1 with beta != 0.
double sample_strictly_stable(const StableExponent& exponent, Rng& rng);

/// phi(psi(t)): the CF of the phi-mixture of the ID law with CF exp(-psi).
std::complex<double> mixture_cf(const MixingLaw& mixing, const StableExponent& exponent, double t);
std::complex<double> mixture_cf(const MixingLaw& mixing, const Exponent& exponent, double t);

struct LinnikParams {
  double lambda = 1.0;
  double alpha = 2.0;
  double beta = 0.0;
  double nu = 1.0;
};

/// Generalized Linnik CF {1 + lambda |t|^alpha exp(-i beta sgn t)}^(-nu).
std::complex<double> linnik_cf(const LinnikParams& params, double t);

/// Draws Z from the mixing law and returns Z^(1/alpha) S with S strictly
/// stable; the result has CF phi(psi(t)).
double sample_mixture_id(const MixingLaw& mixing, const StableExponent& exponent, Rng& rng);

}  // namespace phimix
