#include "phimix/fixtures.hpp"

#include <algorithm>
#include <cmath>

namespace phimix::fixtures {

MixingLaw bernoulli_scaled_lt() {
  return MixingLaw::custom(
      "bernoulli-scaled", [](double s) { return 0.5 + 0.5 * std::exp(-s); },
      [](Rng& rng) { return rng.uniform() < 0.5 ? 0.0 : 1.0; }, 0.5);
}

CfFunction uniform_cf() {
  return [](double t) -> std::complex<double> {
    if (t == 0.0) return 1.0;
    return std::sin(t) / t;
  };
}

DfFunction shifted_uniform_mixture() {
  return [](std::span<const double> x) {
    auto u = [](double v) { return std::clamp(v, 0.0, 1.0); };
    return 0.5 * u(x[0]) * u(x[1] - 1.0) + 0.5 * u(x[0] - 1.0) * u(x[1]);
  };
}

TabulatedDf l_shaped_table() {
  const auto axis = log_grid(0.2, 20.0, 7);
  const auto law = MidLaw::product_frechet({1.0, 1.0});
  auto table = tabulate(law.as_function(), square_grid(axis, 2));
  for (std::size_t f = 0; f < table.values.size(); ++f) {
    const auto idx = table.grid.unflatten(f);
    if (axis[idx[0]] >= 1.5 && axis[idx[1]] < 1.0) table.values[f] = 0.0;
  }
  return table;
}

}  // namespace phimix::fixtures
