#include <doctest.h>

#include <cmath>
#include <limits>

#include "phimix/fixtures.hpp"
#include "phimix/mid_laws.hpp"
#include "phimix/monte_carlo.hpp"
#include "phimix/random_limits.hpp"
#include "phimix/stats_verify.hpp"

using namespace phimix;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

VectorSample extremal_sample(const MixingLaw& m, const MidLaw& h, std::size_t n, std::uint64_t seed) {
  auto flat = draw_vectors(McPlan{n, seed}, h.dim(), [&](Rng& rng, std::span<double> out) {
    sample_extremal_at_random_time(m, h, rng, out);
  });
  return {h.dim(), std::move(flat), seed, ""};
}

}  // namespace

TEST_CASE("mid_df_eval examples") {
  const auto h = MidLaw::product_frechet({1.0, 1.0});
  const std::vector<double> one{1.0, 1.0};
  CHECK(h.df(one) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  const std::vector<double> outside{-1.0, 5.0};
  CHECK(h.df(outside) == 0.0);
  const std::vector<double> corner{0.0, 5.0};
  CHECK(h.df(corner) == 0.0);
  const std::vector<double> far{kInf, kInf};
  CHECK(h.df(far) == 1.0);
  CHECK(h.lower_corner(0) == 0.0);

  const auto g = MidLaw::product_frechet({0.5, 2.0, 1.0});
  const std::vector<double> x{4.0, 0.5, 2.0};
  CHECK(g.df(x) == doctest::Approx(std::exp(-(0.5 + 4.0 + 0.5))).epsilon(1e-14));

  const auto e = MidLaw::product_neg_exponential(2);
  const std::vector<double> neg{-1.0, -0.5};
  CHECK(e.df(neg) == doctest::Approx(std::exp(-1.5)));
  const std::vector<double> pos{1.0, 3.0};
  CHECK(e.df(pos) == 1.0);
  CHECK(e.lower_corner(1) == -kInf);

  CHECK_THROWS_AS(MidLaw::product_frechet({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(MidLaw::product_frechet({1.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(MidLaw::product_neg_exponential(1), std::invalid_argument);
}

TEST_CASE("mid_power_check passes on product laws") {
  const std::vector<double> powers{0.5, 1.0, 2.0, 5.0};
  const auto frechet_grid = square_grid(log_grid(0.1, 30.0, 11), 2);
  for (const auto& shapes : {std::vector<double>{1.0, 1.0}, std::vector<double>{0.5, 3.0}}) {
    const auto h = MidLaw::product_frechet(shapes);
    CHECK(mid_power_check(h.as_function(), frechet_grid, powers).pass);
    CHECK(support_rectangle_check(h.as_function(), frechet_grid).pass);
  }
  // Grid that straddles the support boundary.
  const auto straddle = square_grid(linear_grid(-1.0, 5.0, 13), 2);
  CHECK(mid_power_check(MidLaw::product_frechet({1.0, 2.0}).as_function(), straddle, powers).pass);
  CHECK(support_rectangle_check(MidLaw::product_frechet({1.0, 2.0}).as_function(), straddle).pass);

  const auto neg = MidLaw::product_neg_exponential(3);
  RectGrid g3;
  g3.axes.assign(3, linear_grid(-3.0, 1.0, 7));
  CHECK(mid_power_check(neg.as_function(), g3, powers).pass);
  CHECK(support_rectangle_check(neg.as_function(), g3).pass);
}

TEST_CASE("s = 1 checks that H itself is a d.f.") {
  const std::vector<double> one{1.0};
  const auto grid = square_grid(linear_grid(-0.5, 2.5, 7), 2);
  CHECK(mid_power_check(fixtures::shifted_uniform_mixture(), grid, one).pass);
  const DfFunction not_df = [](std::span<const double> x) { return 1.2 - 0.1 * x[0]; };
  const auto r = mid_power_check(not_df, grid, one);
  CHECK_FALSE(r.pass);
}

TEST_CASE("the shifted uniform mixture is not MID") {
  const auto df = fixtures::shifted_uniform_mixture();
  // Oracle: F is 1, 1/2, 1/2 and 0 at the corners of [1, 2]^2, so F^s puts
  // mass 1 - 2 * 0.5^s there.
  const double s = 0.5;
  const double oracle_mass = 1.0 - 2.0 * std::pow(0.5, s);
  REQUIRE(oracle_mass < 0.0);

  RectGrid grid;
  grid.axes = {{0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}};
  const std::vector<double> powers{1.0, s};
  const auto r = mid_power_check(df, grid, powers);
  CHECK_FALSE(r.pass);
  bool located = false;
  for (const auto& v : r.violations) {
    CHECK(v.power == s);  // F itself is a d.f.
    if (v.kind == MidViolation::Kind::rectangle && v.cell == std::vector<std::size_t>{1, 1}) {
      located = true;
      CHECK(v.value == doctest::Approx(oracle_mass));
    }
  }
  CHECK(located);

  const auto sup = support_rectangle_check(df, grid);
  CHECK_FALSE(sup.pass);
  REQUIRE(sup.offending.size() == 1);
  CHECK(sup.offending.front() == std::vector<std::size_t>{1, 1});
}

TEST_CASE("the L-shaped table fails both checks") {
  const auto table = fixtures::l_shaped_table();
  const std::vector<double> powers{0.5, 1.0, 2.0};
  const auto r = mid_power_check(table, powers);
  CHECK_FALSE(r.pass);
  bool monotone = false;
  for (const auto& v : r.violations) monotone = monotone || v.kind == MidViolation::Kind::monotone;
  CHECK(monotone);

  const auto sup = support_rectangle_check(table);
  CHECK_FALSE(sup.pass);
  // The zeroed block is x_1 in {2, 4.3, 9.3, 20}, x_2 in {0.2, 0.43, 0.93}.
  CHECK(sup.offending.size() == 12);
}

TEST_CASE("support check on a one-point grid passes vacuously") {
  RectGrid grid;
  grid.axes = {{1.0}, {1.0}};
  CHECK(support_rectangle_check(fixtures::shifted_uniform_mixture(), grid).pass);
}

TEST_CASE("mixture_mid_df examples") {
  const auto h = MidLaw::product_frechet({1.0, 1.0});
  const std::vector<double> x{2.0, 2.0};
  CHECK(mixture_mid_df(MixingLaw::exponential(1.0), h, x) == doctest::Approx(0.5).epsilon(1e-15));
  for (double a : {0.3, 1.0, 4.0}) {
    const std::vector<double> p{a, 2.0 * a};
    CHECK(mixture_mid_df(MixingLaw::degenerate(1.0), h, p) == doctest::Approx(h.df(p)).epsilon(1e-15));
    CHECK(mixture_mid_df(MixingLaw::gamma(2.0), h, p) ==
          doctest::Approx(std::pow(1.0 + 1.0 / a + 0.5 / a, -2.0)).epsilon(1e-14));
  }
  const std::vector<double> outside{-1.0, 2.0};
  CHECK(mixture_mid_df(MixingLaw::exponential(1.0), h, outside) == 0.0);
  CHECK(mixture_mid_df(MixingLaw::exponential(1.0), h.as_function(), outside) == 0.0);
  CHECK(mixture_mid_df(MixingLaw::exponential(1.0), h.as_function(), x) == doctest::Approx(0.5));

  const auto target = mixture_mid_target(MixingLaw::gamma(2.0), h);
  CHECK(target(x) == mixture_mid_df(MixingLaw::gamma(2.0), h, x));
}

TEST_CASE("the mixture d.f. is itself a d.f.") {
  const auto h = MidLaw::product_frechet({1.0, 1.0});
  const auto grid = square_grid(log_grid(0.1, 30.0, 9), 2);
  for (const auto& m : {MixingLaw::exponential(), MixingLaw::gamma(0.5), MixingLaw::gamma(3.0)}) {
    const DfFunction f = [&](std::span<const double> x) { return mixture_mid_df(m, h, x); };
    const std::vector<double> one{1.0};
    CHECK(mid_power_check(f, grid, one).pass);
    CHECK(support_rectangle_check(f, grid).pass);
  }
}

TEST_CASE("extremal process at an independent random time") {
  const auto h = MidLaw::product_frechet({1.0, 1.0});
  {
    Rng rng(5);
    std::vector<double> out(2);
    sample_extremal_at_random_time(MixingLaw::degenerate(1.0), h, rng, out);
    CHECK(out[0] > 0.0);
  }
  const std::size_t n = 100000;
  const auto s = extremal_sample(MixingLaw::exponential(1.0), h, n, 1);
  const std::vector<double> at{2.0, 2.0};
  CHECK(std::abs(empirical_df(s, at) - 0.5) < 0.01);

  // Margin: P(Y_1 <= 1) = phi(1) = 1/2.
  const std::vector<double> margin{1.0, kInf};
  CHECK(std::abs(empirical_df(s, margin) - 0.5) < 0.01);

  // Degenerate mixing reproduces H.
  const auto d = extremal_sample(MixingLaw::degenerate(1.0), h, n, 2);
  CHECK(std::abs(empirical_df(d, at) - h.df(at)) < 0.01);
}

TEST_CASE("extremal sample d.f. matches phi(-log H) on a 7x7 grid") {
  const std::size_t n = 100000;
  const double bound = 3.0 / std::sqrt(static_cast<double>(n)) + 0.005;
  const auto grid = square_grid(log_grid(0.2, 20.0, 7), 2).points();
  std::uint64_t seed = 10;
  for (const auto& m : {MixingLaw::exponential(1.0), MixingLaw::gamma(2.0), MixingLaw::gamma(0.5, 2.0)}) {
    for (const auto& shapes : {std::vector<double>{1.0, 1.0}, std::vector<double>{0.5, 2.0}}) {
      const auto h = MidLaw::product_frechet(shapes);
      const auto s = extremal_sample(m, h, n, ++seed);
      double worst = 0.0;
      for (const auto& x : grid) worst = std::max(worst, std::abs(empirical_df(s, x) - mixture_mid_df(m, h, x)));
      CHECK_MESSAGE(worst < bound, m.describe() << " " << h.describe() << " worst=" << worst);
    }
  }
  const auto neg = MidLaw::product_neg_exponential(2);
  const auto s = extremal_sample(MixingLaw::gamma(2.0), neg, n, 99);
  for (const auto& x : square_grid(linear_grid(-3.0, -0.1, 7), 2).points()) {
    CHECK(std::abs(empirical_df(s, x) - mixture_mid_df(MixingLaw::gamma(2.0), neg, x)) < bound);
  }
}
