#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "phimix/errors.hpp"
#include "phimix/mixing_laws.hpp"
#include "phimix/monte_carlo.hpp"
#include "phimix/stats_verify.hpp"

using namespace phimix;

namespace {

std::vector<MixingLaw> builtins() {
  return {MixingLaw::gamma(0.5), MixingLaw::gamma(2.0, 1.5), MixingLaw::exponential(),
          MixingLaw::exponential(0.5), MixingLaw::degenerate(1.0), MixingLaw::degenerate(2.0)};
}

}  // namespace

TEST_CASE("laplace transform examples") {
  CHECK(MixingLaw::gamma(1.0, 1.0).laplace(0.0) == 1.0);
  CHECK(MixingLaw::exponential(1.0).laplace(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(MixingLaw::degenerate(2.0).laplace(3.0) == doctest::Approx(std::exp(-6.0)).epsilon(1e-15));
  CHECK(MixingLaw::gamma(2.0, 1.0).laplace(1.0) == doctest::Approx(0.25));
  for (const auto& law : builtins()) CHECK(law.laplace(0.0) == 1.0);
}

TEST_CASE("invalid construction and domain") {
  CHECK_THROWS_AS(MixingLaw::gamma(0.0), std::invalid_argument);
  CHECK_THROWS_AS(MixingLaw::gamma(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(MixingLaw::degenerate(0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)MixingLaw::exponential().laplace(-0.1), std::domain_error);
}

TEST_CASE("complex continuation") {
  const auto g = MixingLaw::gamma(2.0);
  const std::complex<double> z(1.0, 2.0);
  const auto expected = 1.0 / ((1.0 + z) * (1.0 + z));
  CHECK(std::abs(g.laplace(z) - expected) < 1e-15);
  CHECK(std::abs(MixingLaw::exponential().laplace(z) - 1.0 / (1.0 + z)) < 1e-15);
  CHECK(std::abs(MixingLaw::degenerate(1.5).laplace(z) - std::exp(-1.5 * z)) < 1e-15);
  // Real argument agrees with the real overload.
  CHECK(g.laplace(std::complex<double>(0.7, 0.0)).real() == doctest::Approx(g.laplace(0.7)));

  CHECK_THROWS_AS((void)g.laplace(std::complex<double>(-2.0, 0.0)), NumericDomainError);
  CHECK_THROWS_AS((void)MixingLaw::exponential().laplace(std::complex<double>(-1.0, 0.0)), NumericDomainError);

  const auto custom = MixingLaw::custom("c", [](double s) { return std::exp(-s); }, [](Rng&) { return 1.0; });
  CHECK(custom.laplace(std::complex<double>(1.0, 0.0)).real() == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS((void)custom.laplace(std::complex<double>(1.0, 1.0)), NumericDomainError);
}

TEST_CASE("transforms are non-increasing and in (0, 1]") {
  const auto grid = linear_grid(0.0, 20.0, 201);
  for (const auto& law : builtins()) {
    double prev = 1.0;
    for (double s : grid) {
      const double v = law.laplace(s);
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("samplers") {
  Rng rng(1);
  for (int i = 0; i < 10; ++i) CHECK(MixingLaw::degenerate(2.0).sample(rng) == 2.0);

  const McPlan plan{1000000, 2024};
  const auto expo = draw_scalars(plan, [law = MixingLaw::exponential()](Rng& r) { return law.sample(r); });
  const double lt1 = empirical_mean(expo, [](double z) { return std::exp(-z); });
  CHECK(std::abs(lt1 - 0.5) < 0.005);

  const auto gam = draw_scalars(plan, [law = MixingLaw::gamma(2.0, 1.0)](Rng& r) { return law.sample(r); });
  CHECK(std::abs(empirical_mean(gam, [](double z) { return z; }) - 2.0) < 0.01);
}

TEST_CASE("empirical transform matches the closed form on [0, 5]") {
  const std::size_t n = 1000000;
  const McPlan plan{n, 77};
  const double bound = 3.0 / std::sqrt(static_cast<double>(n));
  for (const auto& law : {MixingLaw::gamma(0.5), MixingLaw::gamma(2.0), MixingLaw::exponential()}) {
    const auto z = draw_scalars(plan, [&](Rng& r) { return law.sample(r); });
    for (double s : linear_grid(0.0, 5.0, 11)) {
      const double emp = empirical_mean(z, [s](double v) { return std::exp(-s * v); });
      CHECK_MESSAGE(std::abs(emp - law.laplace(s)) < bound, law.describe() << " s=" << s);
    }
  }
}

TEST_CASE("sampler mean matches -phi'(0)") {
  const McPlan plan{200000, 5};
  for (const auto& law : builtins()) {
    const double h = 1e-6;
    const double slope = -(law.laplace(h) - law.laplace(0.0)) / h;
    const auto z = draw_scalars(plan, [&](Rng& r) { return law.sample(r); });
    double mean = 0.0;
    double sq = 0.0;
    for (double v : z) {
      mean += v;
      sq += v * v;
    }
    mean /= static_cast<double>(z.size());
    const double sd = std::sqrt(std::max(0.0, sq / static_cast<double>(z.size()) - mean * mean));
    const double mc = 4.0 * sd / std::sqrt(static_cast<double>(z.size()));
    CHECK_MESSAGE(std::abs(mean - slope) < mc + 1e-5 * slope, law.describe());
    CHECK(law.mean().value() == doctest::Approx(slope).epsilon(1e-5));
  }
}

TEST_CASE("complete monotonicity witness") {
  const auto grid = linear_grid(0.0, 3.0, 31);

  const auto expo = check_complete_monotonicity([](double s) { return std::exp(-s); }, grid);
  CHECK(expo.pass);
  CHECK(expo.worst_violation == 0.0);

  CHECK(check_complete_monotonicity([](double s) { return 1.0 / (1.0 + s); }, grid).pass);

  // Oracle: the second forward difference of cos at 0 is negative.
  const double h = grid[1] - grid[0];
  const double d2 = std::cos(2 * h) - 2 * std::cos(h) + std::cos(0.0);
  REQUIRE(d2 < 0.0);
  const auto cosine = check_complete_monotonicity([](double s) { return std::cos(s); }, grid);
  CHECK_FALSE(cosine.pass);
  CHECK(std::find(cosine.failing_orders.begin(), cosine.failing_orders.end(), 2) != cosine.failing_orders.end());
  CHECK(cosine.violation_by_order[2] >= -d2 - 1e-12);

  for (const auto& law : builtins()) {
    const auto r = check_complete_monotonicity([&](double s) { return law.laplace(s); },
                                               linear_grid(0.0, 10.0, 101));
    CHECK_MESSAGE(r.pass, law.describe() << " worst " << r.worst_violation);
  }

  const std::vector<double> uneven{0.0, 0.1, 0.3};
  CHECK_THROWS_AS(check_complete_monotonicity([](double s) { return s; }, uneven), std::invalid_argument);
  CHECK_THROWS_AS(check_complete_monotonicity([](double s) { return s; }, grid, 9), std::invalid_argument);
}
