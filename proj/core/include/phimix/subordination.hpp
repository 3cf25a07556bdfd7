#pragma once

#include <complex>
#include <vector>

#include "phimix/id_laws.hpp"
#include "phimix/mixing_laws.hpp"
#include "phimix/rng.hpp"

namespace phimix {

/// A strictly stable process X(s) run on an independent operational time
/// T(t) whose Laplace transform at time t is phi^t. The directing law must
/// have closed-form convolution powers: gamma (shape nu t), exponential
/// (treated as gamma with shape 1) or degenerate (point c t).
class SubordinatedSpec {
 public:
  SubordinatedSpec(StableExponent base, MixingLaw directing, std::vector<double> times);

  [[nodiscard]] const StableExponent& base() const noexcept { return base_; }
  [[nodiscard]] const MixingLaw& directing() const noexcept { return directing_; }
  [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }

  /// Law of T(t), i.e. the mixing law with transform phi^t.
  [[nodiscard]] MixingLaw directing_at(double time) const;

 private:
  StableExponent base_;
  MixingLaw directing_;
  std::vector<double> times_;
};

/// h(t)^time where h = phi(psi): the CF of X(T(time)).
std::complex<double> subordinated_cf(const SubordinatedSpec& spec, double time, double t);

/// One path evaluated at spec.times(): X(T(t_1)), X(T(t_2)), ...
std::vector<double> sample_subordinated_path(const SubordinatedSpec& spec, Rng& rng);

}  // namespace phimix
