// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Tolerances are pinned here, not read from the shipped configs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "phimix/cli/app.hpp"
#include "phimix/cli/experiments.hpp"
#include "phimix/phimix.hpp"

using namespace phimix;

namespace {

constexpr std::uint64_t kSeed = 42;
constexpr std::size_t kN = 100000;

McPlan plan(std::uint64_t salt, std::size_t n = kN) { return McPlan{n, mix64(kSeed + salt), 1, 4096}; }

double root_n_bound(std::size_t n, double offset) { return 3.0 / std::sqrt(static_cast<double>(n)) + offset; }

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string series(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " -> " : "") + fmt(v[i]);
  return s;
}

std::vector<double> sups(const ConvergenceReport& r) {
  std::vector<double> out;
  for (const auto& x : r.results) out.push_back(x.sup_error);
  return out;
}

const std::vector<double> kThetas{1e-1, 1e-2, 1e-3};

double frechet_mixture_df(std::span<const double> x) { return 1.0 / (1.0 + 1.0 / x[0] + 1.0 / x[1]); }

// 1 -------------------------------------------------------------------------
void criterion1(Verdict& v) {
  const double bound = root_n_bound(kN, 0.005);
  const auto grid = default_cf_grid();
  const std::pair<double, double> cases[] = {{2.0, 1.0}, {1.0, 1.0}, {1.5, 2.0}};
  std::uint64_t salt = 100;
  for (const auto& [alpha, nu] : cases) {
    const StableExponent e(1.0, alpha, 0.0);
    const auto z = MixingLaw::gamma(nu);
    const auto sample = draw_scalars(plan(++salt), [&](Rng& rng) { return sample_mixture_id(z, e, rng); });
    const LinnikParams lp{1.0, alpha, 0.0, nu};
    const double d = cf_sup_distance(sample, [&](double t) { return linnik_cf(lp, t); }, grid);
    v.detail << " (a=" << alpha << ",nu=" << nu << ") cf_sup=" << fmt(d);
    v.require(d <= bound, "cf distance above " + fmt(bound));
    if (alpha == 2.0 && nu == 1.0) {
      const double ks = ks_distance(sample, [](double x) { return oracle::laplace_cdf(x); });
      v.detail << " ks_laplace=" << fmt(ks);
      v.require(ks < 0.01, "KS against Laplace");
    }
  }
  v.detail << " bound=" << fmt(bound);
}

// 2 -------------------------------------------------------------------------
void criterion2(Verdict& v) {
  const double theta = 0.5;
  const PgfFamily geo(MixingLaw::exponential(), 0, 1, theta);
  const PgfFamily nb(MixingLaw::gamma(2.0, 1.5), 1, 2, 1.0);
  const double bound = 3.0 / std::sqrt(static_cast<double>(kN));
  double worst_pgf = 0.0;
  std::uint64_t salt = 200;
  for (const auto* f : {&geo, &nb}) {
    const auto counts = draw_scalars(plan(++salt), [&](Rng& rng) { return static_cast<double>(f->sample(rng)); });
    for (int i = 1; i <= 9; ++i) {
      const double s = 0.1 * i;
      double acc = 0.0;
      for (double k : counts) acc += std::pow(s, k);
      worst_pgf = std::max(worst_pgf, std::abs(acc / static_cast<double>(kN) - f->pgf(s)));
    }
  }
  v.detail << " pgf_sup=" << fmt(worst_pgf) << " bound=" << fmt(bound);
  v.require(worst_pgf <= bound, "empirical PGF");

  const int m_max = 20;
  const auto table = pgf_pmf(geo, m_max);
  double worst_exact = 0.0;
  for (int m = 0; m <= m_max; ++m) {
    const double p = theta / (1.0 + theta) * std::pow(1.0 / (1.0 + theta), m);
    worst_exact = std::max(worst_exact, std::abs(table.probabilities[static_cast<std::size_t>(m)] - p));
  }
  v.detail << " pmf_exact_err=" << fmt(worst_exact);
  v.require(worst_exact <= 1e-12, "closed-form geometric pmf");

  const auto counts = draw_scalars(plan(210), [&](Rng& rng) { return static_cast<double>(geo.sample(rng)); });
  double worst_z = 0.0;
  for (int m = 0; m <= m_max; ++m) {
    const double p = theta / (1.0 + theta) * std::pow(1.0 / (1.0 + theta), m);
    double hits = 0.0;
    for (double k : counts) hits += (k == m);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(kN));
    worst_z = std::max(worst_z, std::abs(hits / static_cast<double>(kN) - p) / se);
  }
  v.detail << " pmf_sim_max_z=" << fmt(worst_z);
  v.require(worst_z <= 4.0, "simulated pmf within 4 sigma");
}

// 3 -------------------------------------------------------------------------
void criterion3(Verdict& v) {
  const auto v_grid = linear_grid(0.1, 5.0, 50);
  const MixingLaw laws[] = {MixingLaw::exponential(), MixingLaw::gamma(2.0), MixingLaw::degenerate(1.0)};
  const std::pair<int, int> jk[] = {{0, 1}, {1, 2}};
  double worst_final = 0.0;
  for (const auto& law : laws) {
    for (const auto& [j, k] : jk) {
      const auto rep = check_lemma22_limit(law, j, k, kThetas, v_grid, 1e-2, 0.0);
      std::vector<double> e;
      for (const auto& r : rep.rows) e.push_back(r.sup_error);
      worst_final = std::max(worst_final, e.back());
      v.require(strictly_decreasing(e), law.describe() + " j=" + std::to_string(j) + " not decreasing");
      v.require(e.back() < 1e-2, law.describe() + " j=" + std::to_string(j) + " above 1e-2");
    }
  }
  v.detail << " worst error at theta=1e-3: " << fmt(worst_final);
}

// 4 -------------------------------------------------------------------------
void criterion4(Verdict& v) {
  const StableExponent cauchy(1.0, 1.0, 0.0);
  auto cauchy_case = [&](const MixingLaw& z, std::uint64_t salt, const char* name) {
    SumExperiment e;
    e.mixing = z;
    e.thetas = kThetas;
    e.increment = [&](Rng& rng) { return sample_strictly_stable(cauchy, rng); };
    e.norming = [](const PgfFamily& f) { return attraction_norming(1.0, f.theta(), f.stride()); };
    const LinnikParams lp{1.0, 1.0, 0.0, z.shape()};
    e.target_cf = [lp](double t) { return linnik_cf(lp, t); };
    e.plan = plan(salt);
    const auto s = sups(transfer_sum_experiment(e));
    v.detail << " " << name << ": " << series(s);
    v.require(s.back() < 0.02, std::string(name) + " final distance");
    v.require(strictly_decreasing(s), std::string(name) + " not decreasing in theta");

    // Sampling noise of an exact draw from the limit law, same n and grid.
    const auto exact = draw_scalars(plan(salt + 1000), [&](Rng& rng) { return sample_mixture_id(z, cauchy, rng); });
    v.detail << " (exact-sample noise floor " << fmt(cf_sup_distance(exact, e.target_cf, default_cf_grid())) << ")";
  };
  cauchy_case(MixingLaw::exponential(), 401, "geometric");
  cauchy_case(MixingLaw::gamma(2.0), 402, "negbin2");

  SumExperiment fixed;
  fixed.mixing = MixingLaw::exponential();
  fixed.shift = 1;
  fixed.thetas = kThetas;
  fixed.increment = [](Rng& rng) { return rng.exponential(); };
  fixed.norming = [](const PgfFamily& f) { return mean_norming(f); };
  fixed.target_cdf = [](double x) { return oracle::exponential_cdf(x); };
  fixed.x_grid = linear_grid(0.25, 5.0, 20);
  fixed.plan = plan(403);
  const auto ks = sups(transfer_sum_experiment(fixed));
  v.detail << " fixed-point KS: " << series(ks);
  for (double d : ks) v.require(d < 0.01, "fixed point KS");
}

// 5 -------------------------------------------------------------------------
void criterion5(Verdict& v) {
  const auto z = MixingLaw::exponential();
  const auto h = MidLaw::product_frechet({1.0, 1.0});
  VectorSample s{2, draw_vectors(plan(500), 2, [&](Rng& rng, std::span<double> out) {
                   sample_extremal_at_random_time(z, h, rng, out);
                 }), kSeed, ""};
  double worst = 0.0;
  for (const auto& x : square_grid(log_grid(0.2, 20.0, 7), 2).points()) {
    worst = std::max(worst, std::abs(empirical_df(s, x) - frechet_mixture_df(x)));
  }
  const std::vector<double> spot{2.0, 2.0};
  const double closed = mixture_mid_df(z, h, spot);
  const double emp = empirical_df(s, spot);
  v.detail << " grid_sup=" << fmt(worst) << " closed(2,2)=" << closed << " empirical(2,2)=" << fmt(emp);
  v.require(worst < 0.01, "grid distance");
  v.require(std::abs(closed - 0.5) <= 1e-12, "closed-form spot value");
  v.require(std::abs(emp - 0.5) < 0.01, "empirical spot value");
}

// 6 -------------------------------------------------------------------------
void criterion6(Verdict& v) {
  const auto h = MidLaw::product_frechet({1.0, 1.0});
  MaxExperiment e;
  e.mixing = MixingLaw::exponential();
  e.shift = 1;
  e.thetas = kThetas;
  e.vector = [&](Rng& rng, std::span<double> out) { h.sample_power(1.0, rng, out); };
  e.norming = [](const PgfFamily& f) { return MaxNorming{{1.0 / f.theta(), 1.0 / f.theta()}, {0.0, 0.0}}; };
  e.target_df = frechet_mixture_df;
  e.x_grid = square_grid(log_grid(0.2, 20.0, 7), 2).points();
  e.plan = plan(600);
  const auto s = sups(transfer_max_experiment(e));
  v.detail << " sup: " << series(s);
  v.require(s.back() < 0.02, "final distance");
  v.require(strictly_decreasing(s), "not decreasing in theta");
}

// 7 -------------------------------------------------------------------------
void criterion7(Verdict& v) {
  const StableExponent gauss(1.0, 2.0, 0.0);
  const auto z = MixingLaw::gamma(1.0);
  const std::vector<double> times{0.5, 1.0, 2.0};
  const SubordinatedSpec spec(gauss, z, times);
  const auto flat = draw_vectors(plan(700), times.size(), [&](Rng& rng, std::span<double> out) {
    const auto p = sample_subordinated_path(spec, rng);
    std::copy(p.begin(), p.end(), out.begin());
  });
  const double bound = root_n_bound(kN, 0.005);
  std::vector<double> col(kN);
  for (std::size_t j = 0; j < times.size(); ++j) {
    for (std::size_t i = 0; i < kN; ++i) col[i] = flat[i * times.size() + j];
    const double d = cf_sup_distance(col, [&](double t) { return subordinated_cf(spec, times[j], t); }, default_cf_grid());
    v.detail << " t=" << times[j] << " cf_sup=" << fmt(d);
    v.require(d <= bound, "cf distance at t=" + fmt(times[j]));
    if (times[j] == 1.0) {
      const auto direct = draw_scalars(plan(701), [&](Rng& rng) { return sample_mixture_id(z, gauss, rng); });
      const double ks = ks_two_sample(col, direct);
      const double crit = ks_two_sample_critical(kN, kN, 0.01);
      v.detail << " ks2=" << fmt(ks) << " crit=" << fmt(crit);
      v.require(ks < crit, "two-sample KS at 1%");
    }
  }
  v.detail << " bound=" << fmt(bound);
}

// 8 -------------------------------------------------------------------------
void criterion8(Verdict& v) {
  const std::vector<double> c{0.3, 0.5, 0.7};
  const auto s = default_s_grid();
  for (const auto& law : {MixingLaw::gamma(0.5), MixingLaw::gamma(1.0), MixingLaw::gamma(2.0), MixingLaw::degenerate(1.0)}) {
    v.require(classl_factor_check(law, c, s).pass, "factor check on " + law.describe());
  }
  const auto t = linear_grid(-5.0, 5.0, 41);
  const std::pair<double, double> linnik[] = {{1.0, 1.0}, {1.5, 1.0}, {2.0, 2.0}};
  for (const auto& [alpha, nu] : linnik) {
    const LinnikParams lp{1.0, alpha, 0.0, nu};
    const auto rep = selfdecomp_cf_check([&](double x) { return linnik_cf(lp, x); }, c, t);
    double min_eig = 1.0;
    for (const auto& ch : rep.checks) min_eig = std::min(min_eig, ch.psd.min_eigenvalue);
    v.detail << " linnik(" << alpha << "," << nu << ") min_eig=" << fmt(min_eig);
    v.require(rep.pass, "linnik cf check");
  }
  const auto bern = classl_factor_check(fixtures::bernoulli_scaled_lt(), c, s);
  double worst = 0.0;
  for (const auto& ch : bern.checks) worst = std::max(worst, ch.monotonicity.worst_violation);
  v.detail << " bernoulli: " << (bern.pass ? "pass" : "fail") << " (violation " << fmt(worst) << ")";
  v.require(!bern.pass, "Bernoulli-scaled fixture should fail");
  const auto uni = selfdecomp_cf_check(fixtures::uniform_cf(), c, t);
  std::string zero = "none";
  for (const auto& ch : uni.checks) {
    if (ch.zero_at) zero = fmt(*ch.zero_at);
  }
  v.detail << " uniform: " << (uni.pass ? "pass" : "fail") << " (zero at " << zero << ")";
  v.require(!uni.pass && zero != "none", "uniform CF should fail with a located zero");
}

// 9 -------------------------------------------------------------------------
void criterion9(Verdict& v) {
  const std::vector<double> powers{0.25, 0.5, 1.0, 2.0, 4.0};
  const auto grid = square_grid(log_grid(0.1, 30.0, 11), 2);
  for (const auto& shapes : {std::vector<double>{1.0, 1.0}, std::vector<double>{0.5, 3.0}}) {
    const auto h = MidLaw::product_frechet(shapes).as_function();
    v.require(mid_power_check(h, grid, powers).pass, "power check on product Frechet");
    v.require(support_rectangle_check(h, grid).pass, "support check on product Frechet");
  }
  RectGrid ugrid;
  ugrid.axes = {{0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}};
  const auto u = fixtures::shifted_uniform_mixture();
  const auto up = mid_power_check(u, ugrid, powers);
  const auto us = support_rectangle_check(u, ugrid);
  v.require(!up.pass && !up.violations.empty(), "shifted-uniform power check should fail");
  v.require(!us.pass && !us.offending.empty(), "shifted-uniform support check should fail");
  if (!up.violations.empty()) {
    const auto& f = up.violations.front();
    v.detail << " shifted-uniform: " << to_string(f.kind) << " s=" << f.power << " cell=(" << f.cell[0] << ","
             << f.cell[1] << ") mass=" << fmt(f.value);
  }
  const auto table = fixtures::l_shaped_table();
  const auto lp = mid_power_check(table, powers);
  const auto ls = support_rectangle_check(table);
  v.require(!lp.pass && !lp.violations.empty(), "L-shaped power check should fail");
  v.require(!ls.pass && !ls.offending.empty(), "L-shaped support check should fail");
  v.detail << " l-shaped: " << lp.violations.size() << " d.f. violations, " << ls.offending.size()
           << " off-rectangle points";
}

// 10 ------------------------------------------------------------------------
void criterion10(Verdict& v) {
  const auto t = linear_grid(-1.0, 1.0, 61);
  for (double index : {1.0, 2.0}) {
    const StableExponent e(1.0, index, 0.0);
    const auto rep = ns_condition_check([&](double theta, double x) { return std::exp(-theta * e(x)); },
                                        e.as_function(), kThetas, t);
    std::vector<double> s;
    for (const auto& r : rep.rows) s.push_back(r.sup_error);
    v.detail << (index == 1.0 ? " |t|: " : " t^2: ") << series(s);
    v.require(strictly_decreasing(s), "not decreasing");
    v.require(s[1] < 1e-2, "error at theta=1e-2");
  }
}

// 11 ------------------------------------------------------------------------
void criterion11(Verdict& v) {
  const auto path = (std::filesystem::path(cli::config_directory()) / "c11_reproducibility.yaml").string();
  const auto out = cli::run_file(path, cli::RunOptions{});
  std::size_t runs = 0;
  std::istringstream lines(out.csv);
  for (std::string line; std::getline(lines, line);) runs += !line.empty() && line[0] != '#' && line.find(".yaml,") != std::string::npos;
  v.detail << " " << runs << " reruns across worker counts 1 and 4";
  v.require(runs > 0, "no runs recorded");
  for (const auto& f : out.failures) v.require(false, f);
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Verdict&)>> criteria[] = {
      {"mixture CF matches generalized Linnik", criterion1},
      {"counting PGF and pmf", criterion2},
      {"scaled counting law limit", criterion3},
      {"random sums transfer", criterion4},
      {"extremal process at random time", criterion5},
      {"random maxima transfer", criterion6},
      {"subordinated marginals", criterion7},
      {"class-L witnesses", criterion8},
      {"MID validity checks", criterion9},
      {"necessary and sufficient condition", criterion10},
      {"reproducibility", criterion11},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.pass;
    std::printf("%s criterion %2d: %s |%s (%.1fs)\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.str().c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
