#include "phimix/subordination.hpp"

#include <cmath>
#include <stdexcept>

namespace phimix {

SubordinatedSpec::SubordinatedSpec(StableExponent base, MixingLaw directing, std::vector<double> times)
    : base_(base), directing_(std::move(directing)), times_(std::move(times)) {
  if (directing_.kind() == MixingKind::custom) {
    throw std::invalid_argument("SubordinatedSpec: directing law needs closed-form convolution powers");
  }
  if (!base_.samplable()) throw std::invalid_argument("SubordinatedSpec: base exponent is not samplable");
  if (times_.empty()) throw std::invalid_argument("SubordinatedSpec: empty time grid");
  double prev = 0.0;
  for (double t : times_) {
    if (!(t > prev)) throw std::invalid_argument("SubordinatedSpec: times must be positive and increasing");
    prev = t;
  }
}

MixingLaw SubordinatedSpec::directing_at(double time) const {
  if (!(time > 0.0)) throw std::invalid_argument("SubordinatedSpec::directing_at: time must be positive");
  switch (directing_.kind()) {
    case MixingKind::gamma:
    case MixingKind::exponential:
      return MixingLaw::gamma(directing_.shape() * time, directing_.scale());
    case MixingKind::degenerate:
      return MixingLaw::degenerate(directing_.point() * time);
    case MixingKind::custom:
      break;
  }
  throw std::invalid_argument("SubordinatedSpec::directing_at: unsupported directing law");
}

std::complex<double> subordinated_cf(const SubordinatedSpec& spec, double time, double t) {
  return mixture_cf(spec.directing_at(time), spec.base(), t);
}

std::vector<double> sample_subordinated_path(const SubordinatedSpec& spec, Rng& rng) {
  const double inv_alpha = 1.0 / spec.base().index();
  std::vector<double> path;
  path.reserve(spec.times().size());
  double previous_time = 0.0;
  double x = 0.0;
  for (double time : spec.times()) {
    const double dt = spec.directing_at(time - previous_time).sample(rng);
    x += std::pow(dt, inv_alpha) * sample_strictly_stable(spec.base(), rng);
    path.push_back(x);
    previous_time = time;
  }
  return path;
}

}  // namespace phimix
