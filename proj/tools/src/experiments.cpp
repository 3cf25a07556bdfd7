#include "phimix/cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

#include <boost/math/distributions/negative_binomial.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/uuid/detail/sha1.hpp>

#include "phimix/phimix.hpp"

namespace phimix::cli {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string joined(std::span<const double> p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ';';
    s += num(p[i]);
  }
  return s;
}

std::string joined(std::span<const std::size_t> p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(p[i]);
  }
  return s;
}

std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

const char* verdict(bool ok) { return ok ? "pass" : "fail"; }

struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

  void fail_row(const std::vector<std::string>& row, const std::string& why) {
    std::string line;
    for (std::size_t i = 0; i < columns.size() && i < row.size(); ++i) {
      if (i) line += ' ';
      line += columns[i] + '=' + row[i];
    }
    failures.push_back(line + (why.empty() ? "" : " (" + why + ")"));
  }

  // Records the most recently added row as failing.
  void fail_last(const std::string& why) { fail_row(rows.back(), why); }
};

struct Context {
  std::uint64_t seed = 42;
  std::size_t samples = 100000;
  std::size_t block_size = 4096;
  unsigned workers = 1;
  std::string directory;

  // Cases draw from distinct, fixed seeds so adding a case leaves the others alone.
  [[nodiscard]] McPlan plan(std::size_t index) const {
    return McPlan{samples, mix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1)), workers, block_size};
  }
};

using Runner = std::function<void(Report&)>;

struct Bound {
  double sqrt_n = 3.0;
  double offset = 0.0;
  [[nodiscard]] double at(std::size_t n) const { return sqrt_n / std::sqrt(static_cast<double>(n)) + offset; }
};

Bound read_bound(const Table& t, const std::string& key, Bound fallback) {
  if (!t.has(key)) {
    (void)t.number(key, 0.0);  // marks the key as known
    return fallback;
  }
  const auto b = t.table(key);
  return {b.number("sqrt_n", fallback.sqrt_n), b.number("offset", fallback.offset)};
}

bool read_expect(const Table& t) {
  const auto e = t.text("expect", "pass");
  if (e != "pass" && e != "fail") t.fail("expect", "expected pass or fail");
  return e == "pass";
}

std::vector<double> read_thetas(const Table& t) {
  auto thetas = t.has("thetas") ? t.numbers("thetas") : std::vector<double>{1e-1, 1e-2, 1e-3};
  if (!t.has("thetas")) (void)t.number("thetas", 0.0);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (!(thetas[i] > 0.0)) t.fail("thetas", "values must be positive");
    if (i && !(thetas[i] < thetas[i - 1])) t.fail("thetas", "values must be strictly decreasing");
  }
  return thetas;
}

// Strict decrease of a sequence; returns the first offending index or 0.
std::size_t first_increase(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return i;
  }
  return 0;
}

double normal_cdf(double x, double variance) { return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance)); }

CdfFunction read_cdf(const Table& t) {
  const auto law = t.text("law");
  if (law == "laplace") {
    const double b = t.number("scale", 1.0);
    if (!(b > 0.0)) t.fail("scale", "must be positive");
    return [b](double x) { return x < 0.0 ? 0.5 * std::exp(x / b) : 1.0 - 0.5 * std::exp(-x / b); };
  }
  if (law == "normal") {
    const double v = t.number("variance", 1.0);
    if (!(v > 0.0)) t.fail("variance", "must be positive");
    return [v](double x) { return normal_cdf(x, v); };
  }
  if (law == "exponential") {
    const double m = t.number("mean", 1.0);
    if (!(m > 0.0)) t.fail("mean", "must be positive");
    return [m](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x / m); };
  }
  t.fail("law", "unknown reference law '" + law + "' (laplace, normal, exponential)");
}

MidLaw read_mid(const Table& t) {
  const auto law = t.text("law");
  try {
    if (law == "frechet") return MidLaw::product_frechet(t.numbers("shapes"));
    if (law == "neg-exponential") {
      const auto d = t.integer("dim", 2);
      if (d < 2) t.fail("dim", "must be at least 2");
      return MidLaw::product_neg_exponential(static_cast<std::size_t>(d));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("'" + t.path() + "': " + e.what());
  }
  t.fail("law", "unknown MID law '" + law + "' (frechet, neg-exponential)");
}

std::vector<double> default_axis(const MidLaw& law) {
  return law.kind() == MidKind::product_frechet ? log_grid(0.2, 20.0, 7) : linear_grid(-3.0, -0.1, 7);
}

// mixture-id ---------------------------------------------------------------

Runner parse_mixture_id(const Table& root, const Context& ctx) {
  struct Case {
    std::string name;
    MixingLaw mixing;
    StableExponent exponent;
    CdfFunction ks;
  };
  const auto grid = root.grid("t_grid", default_cf_grid());
  const auto bound = read_bound(root, "bound", {3.0, 0.005});
  const double ks_threshold = root.number("ks_threshold", 0.01);
  std::vector<Case> cases;
  for (const auto& c : root.tables("cases")) {
    Case k{c.text("name"), c.mixing("mixing"), c.exponent("exponent"), {}};
    if (!k.exponent.samplable()) c.fail("exponent", "index 1 with non-zero skew cannot be sampled");
    if (c.has("ks_against")) k.ks = read_cdf(c.table("ks_against"));
    cases.push_back(std::move(k));
  }

  return [=](Report& r) {
    r.columns = {"case", "check", "grid_point", "empirical", "target", "abs_error", "threshold", "pass"};
    const double threshold = bound.at(ctx.samples);
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto& c = cases[i];
      const auto sample = draw_scalars(ctx.plan(i), [&](Rng& rng) { return sample_mixture_id(c.mixing, c.exponent, rng); });
      const bool linnik = c.mixing.kind() == MixingKind::gamma || c.mixing.kind() == MixingKind::exponential;
      const LinnikParams lp{c.exponent.scale() * c.mixing.scale(), c.exponent.index(), c.exponent.skew(),
                            c.mixing.shape()};
      for (double t : grid) {
        const auto emp = empirical_cf(sample, t);
        const auto tgt = linnik ? linnik_cf(lp, t) : mixture_cf(c.mixing, c.exponent, t);
        const double err = std::abs(emp - tgt);
        r.add({c.name, "cf", num(t), num(emp.real()), num(tgt.real()), num(err), num(threshold), verdict(err <= threshold)});
        if (err > threshold) r.fail_last("");
      }
      if (c.ks) {
        const double d = ks_distance(sample, c.ks);
        r.add({c.name, "ks", "", num(d), "0", num(d), num(ks_threshold), verdict(d < ks_threshold)});
        if (!(d < ks_threshold)) r.fail_last("");
      }
    }
  };
}

// pgf ----------------------------------------------------------------------

Runner parse_pgf(const Table& root, const Context& ctx) {
  struct Case {
    std::string name;
    PgfFamily family;
    int m_max;
    bool geometric;
  };
  const auto s_grid = root.grid("s_grid", linear_grid(0.1, 0.9, 9));
  for (double s : s_grid) {
    if (s < 0.0 || s > 1.0) root.fail("s_grid", "values must lie in [0, 1]");
  }
  const auto bound = read_bound(root, "bound", {3.0, 0.0});
  const double pmf_tol = root.number("pmf_tolerance", 1e-12);
  const double sigmas = root.number("sim_sigmas", 4.0);
  std::vector<Case> cases;
  for (const auto& c : root.tables("cases")) {
    const auto mixing = c.mixing("mixing");
    const auto shift = c.integer("shift", 0);
    const auto stride = c.integer("stride", 1);
    const double theta = c.number("theta");
    const auto m_max = c.integer("m_max", 10);
    if (m_max < 0 || m_max > 100000) c.fail("m_max", "must lie in [0, 100000]");
    const auto oracle = c.text("oracle", "boost");
    if (oracle != "boost" && oracle != "geometric") c.fail("oracle", "expected boost or geometric");
    if (mixing.kind() == MixingKind::custom) c.fail("mixing", "needs a closed-form pmf");
    const bool geometric = oracle == "geometric";
    if (geometric && !(mixing.kind() == MixingKind::exponential && mixing.scale() == 1.0 && shift == 0 && stride == 1)) {
      c.fail("oracle", "the geometric oracle needs exponential(1) mixing with shift 0 and stride 1");
    }
    try {
      cases.push_back({c.text("name"), PgfFamily(mixing, static_cast<int>(shift), static_cast<int>(stride), theta),
                       static_cast<int>(m_max), geometric});
    } catch (const std::invalid_argument& e) {
      throw ConfigError("'" + c.path() + "': " + e.what());
    }
  }

  return [=](Report& r) {
    r.columns = {"case", "quantity", "point", "computed", "reference", "abs_error", "threshold", "pass"};
    const auto n = static_cast<double>(ctx.samples);
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto& c = cases[i];
      const auto& f = c.family;
      const auto counts = draw_scalars(ctx.plan(i), [&](Rng& rng) { return static_cast<double>(f.sample(rng)); });

      const double pgf_threshold = bound.at(ctx.samples);
      for (double s : s_grid) {
        double acc = 0.0;
        for (double k : counts) acc += std::pow(s, k);
        const double emp = acc / n;
        const double ref = f.pgf(s);
        const double err = std::abs(emp - ref);
        r.add({c.name, "pgf", num(s), num(emp), num(ref), num(err), num(pgf_threshold), verdict(err <= pgf_threshold)});
        if (err > pgf_threshold) r.fail_last("");
      }

      const auto table = pgf_pmf(f, c.m_max);
      const auto& z = f.mixing();
      const double theta = f.theta();
      auto oracle = [&](int m) {
        if (c.geometric) return theta / (1.0 + theta) * std::pow(1.0 / (1.0 + theta), m);
        if (z.kind() == MixingKind::degenerate) {
          return boost::math::pdf(boost::math::poisson_distribution<double>(z.point() / theta), m);
        }
        const double p = theta / (theta + z.scale());
        return boost::math::pdf(boost::math::negative_binomial_distribution<double>(z.shape(), p), m);
      };
      std::vector<double> hits(table.probabilities.size(), 0.0);
      for (double k : counts) {
        const double m = (k - f.shift()) / f.stride();
        if (m >= 0.0 && m < static_cast<double>(hits.size())) hits[static_cast<std::size_t>(m)] += 1.0;
      }
      for (std::size_t m = 0; m < table.probabilities.size(); ++m) {
        const double p = table.probabilities[m];
        const double ref = oracle(static_cast<int>(m));
        const double err = std::abs(p - ref);
        const auto at = std::to_string(table.support_point(m));
        r.add({c.name, "pmf", at, num(p), num(ref), num(err), num(pmf_tol), verdict(err <= pmf_tol)});
        if (err > pmf_tol) r.fail_last("");

        const double freq = hits[m] / n;
        const double tol = sigmas * std::sqrt(p * (1.0 - p) / n);
        const double serr = std::abs(freq - p);
        r.add({c.name, "pmf_sim", at, num(freq), num(p), num(serr), num(tol), verdict(serr <= tol)});
        if (serr > tol) r.fail_last("");
      }
      if (c.geometric) {
        const double ref = std::pow(1.0 / (1.0 + theta), c.m_max + 1);
        const double err = std::abs(table.tail - ref);
        r.add({c.name, "tail", ">" + std::to_string(table.support_point(table.probabilities.size() - 1)),
               num(table.tail), num(ref), num(err), num(pmf_tol), verdict(err <= pmf_tol)});
        if (err > pmf_tol) r.fail_last("");
      }
    }
  };
}

// lemma22 ------------------------------------------------------------------

Runner parse_lemma22(const Table& root, const Context&) {
  struct Case {
    std::string name;
    MixingLaw mixing;
    int shift;
    int stride;
  };
  const auto thetas = read_thetas(root);
  const auto v_grid = root.grid("v_grid", linear_grid(0.1, 5.0, 50));
  for (double v : v_grid) {
    if (!(v > 0.0)) root.fail("v_grid", "values must be positive");
  }
  const double threshold = root.number("threshold", 1e-2);
  std::vector<Case> cases;
  for (const auto& c : root.tables("cases")) {
    const auto shift = c.integer("shift", 0);
    const auto stride = c.integer("stride", 1);
    if (shift < 0 || stride < 1) c.fail("stride", "need shift >= 0 and stride >= 1");
    cases.push_back({c.text("name"), c.mixing("mixing"), static_cast<int>(shift), static_cast<int>(stride)});
  }

  return [=](Report& r) {
    r.columns = {"case", "theta", "sup_error", "worst_v", "threshold", "pass"};
    for (const auto& c : cases) {
      const auto rep = check_lemma22_limit(c.mixing, c.shift, c.stride, thetas, v_grid, threshold, 0.0);
      for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        const bool last = i + 1 == rep.rows.size();
        const bool down = i == 0 || row.sup_error < rep.rows[i - 1].sup_error;
        const bool below = !last || row.sup_error < threshold;
        r.add({c.name, num(row.theta), num(row.sup_error), num(row.worst_v), last ? num(threshold) : "",
               verdict(down && below)});
        if (!down) r.fail_last("not decreasing");
        if (!below) r.fail_last("above threshold");
      }
    }
  };
}

// converge-sum / converge-max ----------------------------------------------

void emit_convergence(Report& r, const std::string& name, const ConvergenceReport& rep, double threshold,
                      bool decreasing, bool every_theta) {
  std::vector<double> sups;
  for (const auto& res : rep.results) {
    sups.push_back(res.sup_error);
    for (const auto& p : res.points) {
      r.add({name, num(res.theta), joined(p.grid_point), num(p.empirical.real()), num(p.target.real()),
             num(p.abs_error), num(res.sup_error)});
    }
  }
  // Failing rows point at the worst grid point of the offending theta.
  auto fail_at = [&](std::size_t k, const std::string& why) {
    const auto& res = rep.results[k];
    const auto& p = res.points[res.worst_index];
    r.fail_row({name, num(res.theta), joined(p.grid_point), num(p.empirical.real()), num(p.target.real()),
                num(p.abs_error), num(res.sup_error)},
               why);
  };
  for (std::size_t k = 0; k < sups.size(); ++k) {
    const bool checked = every_theta || k + 1 == sups.size();
    if (checked && !(sups[k] < threshold)) fail_at(k, "sup_error >= " + num(threshold));
  }
  if (decreasing) {
    if (const auto k = first_increase(sups)) fail_at(k, "sup_error not decreasing in theta");
  }
}

Runner parse_converge_sum(const Table& root, const Context& ctx) {
  struct Case {
    std::string name;
    SumExperiment exp;
    double threshold;
    bool decreasing;
    bool every_theta;
  };
  const auto thetas = read_thetas(root);
  const auto t_grid = root.grid("t_grid", default_cf_grid());
  const double default_threshold = root.number("threshold", 0.02);
  std::vector<Case> cases;
  const auto tables = root.tables("cases");
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& c = tables[i];
    Case k;
    k.name = c.text("name");
    auto& e = k.exp;
    e.mixing = c.mixing("mixing");
    e.shift = static_cast<int>(c.integer("shift", 0));
    e.stride = static_cast<int>(c.integer("stride", 1));
    e.thetas = thetas;
    e.t_grid = t_grid;
    e.plan = ctx.plan(i);

    const auto inc = c.table("increment");
    const auto law = inc.text("law");
    std::optional<StableExponent> stable;
    double alpha = 1.0;
    if (law == "stable") {
      try {
        stable = StableExponent(inc.number("scale", 1.0), inc.number("index"), inc.number("skew", 0.0));
      } catch (const std::invalid_argument& ex) {
        throw ConfigError("'" + inc.path() + "': " + ex.what());
      }
      if (!stable->samplable()) inc.fail("index", "index 1 with non-zero skew cannot be sampled");
      alpha = stable->index();
      const auto s = *stable;
      e.increment = [s](Rng& rng) { return sample_strictly_stable(s, rng); };
    } else if (law == "exponential") {
      const double mean = inc.number("mean", 1.0);
      if (!(mean > 0.0)) inc.fail("mean", "must be positive");
      e.increment = [mean](Rng& rng) { return mean * rng.exponential(); };
    } else {
      inc.fail("law", "unknown increment law '" + law + "' (stable, exponential)");
    }

    const auto norming = c.text("norming", "attraction");
    if (norming == "attraction") {
      e.norming = [alpha](const PgfFamily& f) { return attraction_norming(alpha, f.theta(), f.stride()); };
    } else if (norming == "mean") {
      e.norming = [](const PgfFamily& f) { return mean_norming(f); };
    } else {
      c.fail("norming", "expected attraction or mean");
    }

    if (c.has("target") && c.text("target", "") != "mixture") {
      c.fail("target", "expected 'mixture'; use target_cdf for a d.f. target");
    }
    if (c.has("target_cdf")) {
      e.target_cdf = read_cdf(c.table("target_cdf"));
      e.x_grid = c.grid("x_grid", linear_grid(0.25, 5.0, 20));
    } else {
      if (!stable) c.fail("target", "a mixture target needs a stable increment");
      const auto s = *stable;
      const auto m = e.mixing;
      e.target_cf = [m, s](double t) { return mixture_cf(m, s, t); };
    }
    k.threshold = c.number("threshold", default_threshold);
    k.decreasing = c.flag("decreasing", true);
    k.every_theta = c.flag("every_theta", false);
    try {
      (void)PgfFamily(e.mixing, e.shift, e.stride, thetas.front());
    } catch (const std::invalid_argument& ex) {
      throw ConfigError("'" + c.path() + "': " + ex.what());
    }
    cases.push_back(std::move(k));
  }

  return [=](Report& r) {
    r.columns = {"case", "theta", "grid_point", "empirical", "target", "abs_error", "sup_error"};
    for (const auto& c : cases) {
      const auto rep = transfer_sum_experiment(c.exp);
      emit_convergence(r, c.name, rep, c.threshold, c.decreasing, c.every_theta);
    }
  };
}

Runner parse_converge_max(const Table& root, const Context& ctx) {
  struct Case {
    std::string name;
    MaxExperiment exp;
    double threshold;
    bool decreasing;
  };
  const auto thetas = read_thetas(root);
  const double default_threshold = root.number("threshold", 0.02);
  std::vector<Case> cases;
  const auto tables = root.tables("cases");
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& c = tables[i];
    Case k;
    k.name = c.text("name");
    auto& e = k.exp;
    e.mixing = c.mixing("mixing");
    e.shift = static_cast<int>(c.integer("shift", 1));
    e.stride = static_cast<int>(c.integer("stride", 1));
    e.thetas = thetas;
    e.plan = ctx.plan(i);
    const auto law = read_mid(c.table("mid"));
    e.dim = law.dim();
    e.vector = [law](Rng& rng, std::span<double> out) { law.sample_power(1.0, rng, out); };
    if (c.text("norming", "attraction") != "attraction") c.fail("norming", "only attraction norming is defined for maxima");
    e.norming = [law](const PgfFamily& f) {
      MaxNorming n;
      const double ratio = f.stride() / f.theta();
      for (std::size_t d = 0; d < law.dim(); ++d) {
        // Frechet(gamma): a = ratio^(1/gamma). Negative exponential: a = 1 / ratio.
        n.scale.push_back(law.kind() == MidKind::product_frechet ? std::pow(ratio, 1.0 / law.shapes()[d]) : 1.0 / ratio);
        n.center.push_back(0.0);
      }
      return n;
    };
    e.target_df = mixture_mid_target(e.mixing, law);
    const auto axis = c.grid("x_axis", default_axis(law));
    e.x_grid = square_grid(axis, law.dim()).points();
    k.threshold = c.number("threshold", default_threshold);
    k.decreasing = c.flag("decreasing", true);
    if (e.shift < 0 || e.stride < 1) c.fail("stride", "need shift >= 0 and stride >= 1");
    cases.push_back(std::move(k));
  }

  return [=](Report& r) {
    r.columns = {"case", "theta", "grid_point", "empirical", "target", "abs_error", "sup_error"};
    for (const auto& c : cases) {
      const auto rep = transfer_max_experiment(c.exp);
      emit_convergence(r, c.name, rep, c.threshold, c.decreasing, false);
      for (const auto& res : rep.results) {
        if (res.conditioning_rate > 0.0) {
          r.warnings.push_back(c.name + ": theta " + num(res.theta) + " rejected N = 0 at rate " +
                               num(res.conditioning_rate));
        }
      }
    }
  };
}

// mid-sample / mid-check ---------------------------------------------------

Runner parse_mid_sample(const Table& root, const Context& ctx) {
  const auto mixing = root.mixing("mixing");
  const auto law = read_mid(root.table("mid"));
  const auto axis = root.grid("x_axis", default_axis(law));
  const double threshold = root.number("threshold", 0.01);
  const double spot_tol = root.number("spot_tolerance", 1e-12);
  std::vector<std::pair<std::vector<double>, double>> spots;
  if (root.has("spots")) {
    for (const auto& s : root.tables("spots")) {
      auto p = s.numbers("point");
      if (p.size() != law.dim()) s.fail("point", "dimension does not match the MID law");
      spots.emplace_back(std::move(p), s.number("value"));
    }
  } else {
    (void)root.number("spots", 0.0);
  }

  return [=](Report& r) {
    r.columns = {"kind", "grid_point", "empirical", "target", "abs_error", "threshold", "pass"};
    VectorSample sample{law.dim(), draw_vectors(ctx.plan(0), law.dim(), [&](Rng& rng, std::span<double> out) {
                          sample_extremal_at_random_time(mixing, law, rng, out);
                        }), ctx.seed, ""};
    for (const auto& x : square_grid(axis, law.dim()).points()) {
      const double emp = empirical_df(sample, x);
      const double tgt = mixture_mid_df(mixing, law, x);
      const double err = std::abs(emp - tgt);
      r.add({"grid", joined(x), num(emp), num(tgt), num(err), num(threshold), verdict(err <= threshold)});
      if (err > threshold) r.fail_last("");
    }
    for (const auto& [x, value] : spots) {
      const double closed = mixture_mid_df(mixing, law, x);
      const double cerr = std::abs(closed - value);
      r.add({"spot_closed_form", joined(x), num(closed), num(value), num(cerr), num(spot_tol), verdict(cerr <= spot_tol)});
      if (cerr > spot_tol) r.fail_last("");
      const double emp = empirical_df(sample, x);
      const double serr = std::abs(emp - value);
      r.add({"spot_sample", joined(x), num(emp), num(value), num(serr), num(threshold), verdict(serr <= threshold)});
      if (serr > threshold) r.fail_last("");
    }
  };
}

std::string describe(const MidViolation& v) {
  std::string s = std::string(to_string(v.kind)) + " s=" + num(v.power) + " cell=" + joined(v.cell);
  if (v.kind == MidViolation::Kind::monotone) s += " axis=" + std::to_string(v.axis);
  return s + " value=" + num(v.value);
}

Runner parse_mid_check(const Table& root, const Context&) {
  struct Subject {
    std::string name;
    std::optional<TabulatedDf> table;
    DfFunction df;
    RectGrid grid;
    bool expect_pass;
  };
  const auto powers = root.has("powers") ? root.numbers("powers") : std::vector<double>{0.25, 0.5, 1.0, 2.0, 4.0};
  if (!root.has("powers")) (void)root.number("powers", 0.0);
  for (double s : powers) {
    if (!(s > 0.0)) root.fail("powers", "values must be positive");
  }
  const double tol = root.number("tolerance", 1e-12);
  std::vector<Subject> subjects;
  for (const auto& t : root.tables("subjects")) {
    Subject s;
    s.name = t.text("name");
    s.expect_pass = read_expect(t);
    const auto d = t.table("df");
    const auto law = d.text("law");
    std::size_t dim = 2;
    if (law == "frechet" || law == "neg-exponential") {
      const auto m = read_mid(d);
      s.df = m.as_function();
      dim = m.dim();
    } else if (law == "mixture") {
      const auto m = read_mid(d.table("mid"));
      const auto z = d.mixing("mixing");
      s.df = [m, z](std::span<const double> x) { return mixture_mid_df(z, m, x); };
      dim = m.dim();
    } else if (law == "shifted-uniform") {
      s.df = fixtures::shifted_uniform_mixture();
    } else if (law == "l-shaped") {
      s.table = fixtures::l_shaped_table();
    } else {
      d.fail("law", "unknown d.f. '" + law + "' (frechet, neg-exponential, mixture, shifted-uniform, l-shaped)");
    }
    if (!s.table) {
      const auto axis = t.grid("axis");
      for (std::size_t i = 1; i < axis.size(); ++i) {
        if (!(axis[i] > axis[i - 1])) t.fail("axis", "must be strictly increasing");
      }
      s.grid = square_grid(axis, dim);
    } else if (t.has("axis")) {
      t.fail("axis", "the l-shaped fixture carries its own grid");
    }
    subjects.push_back(std::move(s));
  }

  return [=](Report& r) {
    r.columns = {"subject", "check", "expected", "observed", "violations", "located", "pass"};
    for (const auto& s : subjects) {
      const auto power = s.table ? mid_power_check(*s.table, powers, tol) : mid_power_check(s.df, s.grid, powers, tol);
      const auto support = s.table ? support_rectangle_check(*s.table) : support_rectangle_check(s.df, s.grid);
      const std::string located_power = power.violations.empty() ? "" : describe(power.violations.front());
      const std::string located_support = support.offending.empty() ? "" : "point=" + joined(support.offending.front());

      auto emit = [&](const char* check, bool observed, std::size_t count, const std::string& located) {
        const bool ok = observed == s.expect_pass && (observed || !located.empty());
        r.add({s.name, check, verdict(s.expect_pass), verdict(observed), std::to_string(count), located, verdict(ok)});
        if (!ok) r.fail_last("");
      };
      emit("power", power.pass, power.violations.size(), located_power);
      emit("support", support.pass, support.offending.size(), located_support);
    }
  };
}

// subordinate --------------------------------------------------------------

Runner parse_subordinate(const Table& root, const Context& ctx) {
  const auto base = root.exponent("base");
  const auto directing = root.mixing("directing");
  const auto times = root.numbers("times");
  std::optional<SubordinatedSpec> spec;
  try {
    spec.emplace(base, directing, times);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("subordination: ") + e.what());
  }
  const auto grid = root.grid("t_grid", default_cf_grid());
  const auto bound = read_bound(root, "bound", {3.0, 0.005});
  const double level = root.number("ks_level", 0.01);
  if (!(level > 0.0 && level < 1.0)) root.fail("ks_level", "must lie in (0, 1)");
  // The two-sample test compares the marginal at time 1 with the mixture sampler.
  const auto ks_index = static_cast<std::size_t>(std::find(times.begin(), times.end(), 1.0) - times.begin());

  return [=](Report& r) {
    r.columns = {"check", "time", "statistic", "threshold", "pass"};
    const std::size_t dim = times.size();
    VectorSample paths{dim, draw_vectors(ctx.plan(0), dim, [&](Rng& rng, std::span<double> out) {
                         const auto p = sample_subordinated_path(*spec, rng);
                         std::copy(p.begin(), p.end(), out.begin());
                       }), ctx.seed, ""};
    const double threshold = bound.at(ctx.samples);
    std::vector<double> column(paths.size());
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t i = 0; i < paths.size(); ++i) column[i] = paths.row(i)[j];
      const double tt = times[j];
      const double d = cf_sup_distance(column, [&](double t) { return subordinated_cf(*spec, tt, t); }, grid);
      r.add({"cf_sup", num(tt), num(d), num(threshold), verdict(d <= threshold)});
      if (d > threshold) r.fail_last("");
      if (j == ks_index) {
        const auto direct = draw_scalars(ctx.plan(1), [&](Rng& rng) { return sample_mixture_id(directing, base, rng); });
        const double ks = ks_two_sample(column, direct);
        const double crit = ks_two_sample_critical(column.size(), direct.size(), level);
        r.add({"ks_two_sample", num(tt), num(ks), num(crit), verdict(ks < crit)});
        if (!(ks < crit)) r.fail_last("");
      }
    }
  };
}

// classl -------------------------------------------------------------------

Runner parse_classl(const Table& root, const Context& ctx) {
  struct Subject {
    std::string name;
    std::optional<MixingLaw> lt;
    CfFunction cf;
    ScalarSampler sampler;  // for the unimodality probe
    std::size_t mode_samples = 0;
    bool expect_pass = true;
  };
  const auto c_grid = root.has("c_grid") ? root.numbers("c_grid") : default_c_grid();
  if (!root.has("c_grid")) (void)root.number("c_grid", 0.0);
  for (double c : c_grid) {
    if (!(c > 0.0 && c < 1.0)) root.fail("c_grid", "values must lie in (0, 1)");
  }
  const auto s_grid = root.grid("s_grid", default_s_grid());
  const auto t_grid = root.grid("t_grid", linear_grid(-5.0, 5.0, 41));
  if (t_grid.size() > 64) root.fail("t_grid", "at most 64 points");
  const auto max_order = root.integer("max_order", 6);
  if (max_order < 0 || max_order > 8) root.fail("max_order", "must lie in [0, 8]");
  const double lt_tol = root.number("lt_tolerance", 1e-9);
  const double cf_tol = root.number("cf_tolerance", 1e-8);

  std::vector<Subject> subjects;
  for (const auto& t : root.tables("subjects")) {
    Subject s;
    s.name = t.text("name");
    s.expect_pass = read_expect(t);
    if (t.has("lt") == t.has("cf")) t.fail("lt", "give exactly one of lt or cf");
    if (t.has("lt")) {
      s.lt = t.mixing("lt");
    } else {
      const auto f = t.table("cf");
      const auto law = f.text("law");
      if (law == "linnik") {
        const LinnikParams p{f.number("lambda", 1.0), f.number("alpha"), f.number("beta", 0.0), f.number("nu", 1.0)};
        std::optional<StableExponent> e;
        try {
          e.emplace(p.lambda, p.alpha, p.beta);
        } catch (const std::invalid_argument& ex) {
          throw ConfigError("'" + f.path() + "': " + ex.what());
        }
        if (!(p.nu > 0.0)) f.fail("nu", "must be positive");
        s.cf = [p](double t) { return linnik_cf(p, t); };
        if (e->samplable()) {
          const auto z = MixingLaw::gamma(p.nu);
          const auto ex = *e;
          s.sampler = [z, ex](Rng& rng) { return sample_mixture_id(z, ex, rng); };
        }
      } else if (law == "mixture") {
        const auto z = f.mixing("mixing");
        const auto e = f.exponent("exponent");
        try {
          s.cf = construct_classl_mixture(z, e);
        } catch (const std::invalid_argument& ex) {
          f.fail("mixing", ex.what());
        }
        if (e.samplable()) s.sampler = [z, e](Rng& rng) { return sample_mixture_id(z, e, rng); };
      } else if (law == "gaussian") {
        const double v = f.number("scale", 1.0);
        if (!(v > 0.0)) f.fail("scale", "must be positive");
        s.cf = [v](double t) { return std::complex<double>(std::exp(-v * t * t)); };
      } else if (law == "uniform") {
        s.cf = fixtures::uniform_cf();
      } else {
        f.fail("law", "unknown CF '" + law + "' (linnik, mixture, gaussian, uniform)");
      }
    }
    const auto modes = t.integer("mode_samples", 0);
    if (modes < 0) t.fail("mode_samples", "must be non-negative");
    if (modes > 0 && !s.sampler) t.fail("mode_samples", "no sampler for this subject");
    s.mode_samples = static_cast<std::size_t>(modes);
    subjects.push_back(std::move(s));
  }

  return [=](Report& r) {
    r.columns = {"subject", "c", "witness", "statistic", "detail", "observed", "expected", "pass"};
    for (std::size_t i = 0; i < subjects.size(); ++i) {
      const auto& s = subjects[i];
      auto emit = [&](double c, const std::string& witness, double stat, const std::string& detail, bool observed) {
        const bool ok = observed == s.expect_pass;
        r.add({s.name, num(c), witness, num(stat), detail, verdict(observed), verdict(s.expect_pass), verdict(ok)});
        if (!ok) r.fail_last("");
      };
      if (s.lt) {
        const auto rep = classl_factor_check(*s.lt, c_grid, s_grid, static_cast<int>(max_order), lt_tol);
        for (const auto& ch : rep.checks) {
          const auto& m = ch.monotonicity;
          const std::string detail = m.pass ? "" : "order=" + std::to_string(m.worst_order) + " s=" + num(m.worst_point);
          emit(ch.c, "complete_monotonicity", m.worst_violation, detail, m.pass);
        }
      } else {
        const auto rep = selfdecomp_cf_check(s.cf, c_grid, t_grid, cf_tol);
        for (const auto& ch : rep.checks) {
          if (ch.zero_at) {
            emit(ch.c, "real_zero", *ch.zero_at, "f vanishes", ch.pass);
          } else {
            emit(ch.c, "toeplitz_psd", ch.psd.min_eigenvalue, "max_modulus=" + num(ch.max_modulus), ch.pass);
          }
        }
      }
      if (s.mode_samples > 0) {
        McPlan plan = ctx.plan(i);
        plan.samples = s.mode_samples;
        const auto sample = draw_scalars(plan, s.sampler);
        const auto modes = kde_mode_count(sample, linear_grid(-8.0, 8.0, 321));
        const bool one = modes.modes == 1;
        r.add({s.name, "", "kde_modes", std::to_string(modes.modes), "bandwidth=" + num(modes.bandwidth),
               std::to_string(modes.modes), "1", one ? "pass" : "warn"});
        if (!one) r.warnings.push_back(s.name + ": kernel density shows " + std::to_string(modes.modes) + " modes");
      }
    }
  };
}

// ns-check -----------------------------------------------------------------

Runner parse_ns_check(const Table& root, const Context&) {
  struct Case {
    std::string name;
    CfFamily g;
    Exponent psi;
  };
  const auto thetas = read_thetas(root);
  const auto t_grid = root.grid("t_grid", linear_grid(-1.0, 1.0, 61));
  const double threshold = root.number("threshold", 1e-2);
  const double threshold_theta = root.number("threshold_theta", 1e-2);
  std::vector<Case> cases;
  for (const auto& c : root.tables("cases")) {
    const auto e = c.exponent("exponent");
    const auto family = c.text("g", "exp");
    Case k{c.text("name"), {}, e.as_function()};
    if (family == "exp") {
      k.g = [e](double theta, double t) { return std::exp(-theta * e(t)); };
    } else if (family == "linnik") {
      k.g = [e](double theta, double t) { return 1.0 / (1.0 + theta * e(t)); };
    } else {
      c.fail("g", "expected exp or linnik");
    }
    cases.push_back(std::move(k));
  }

  return [=](Report& r) {
    r.columns = {"case", "theta", "sup_error", "worst_t", "threshold", "pass"};
    for (const auto& c : cases) {
      const auto rep = ns_condition_check(c.g, c.psi, thetas, t_grid);
      for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        const bool down = i == 0 || row.sup_error < rep.rows[i - 1].sup_error;
        const bool gated = row.theta <= threshold_theta;
        const bool below = !gated || row.sup_error < threshold;
        r.add({c.name, num(row.theta), num(row.sup_error), num(row.worst_t), gated ? num(threshold) : "",
               verdict(down && below)});
        if (!down) r.fail_last("not decreasing");
        if (!below) r.fail_last("above threshold");
      }
    }
  };
}

// reproducibility ----------------------------------------------------------

std::string sha1_hex(const std::string& data) {
  boost::uuids::detail::sha1 h;
  h.process_bytes(data.data(), data.size());
  boost::uuids::detail::sha1::digest_type digest;
  h.get_digest(digest);
  std::string out;
  char buf[9];
  for (unsigned word : digest) {
    std::snprintf(buf, sizeof buf, "%08x", word);
    out += buf;
  }
  return out;
}

Runner parse_reproducibility(const Table& root, const Context& ctx) {
  const auto targets = root.texts("targets");
  if (targets.empty()) root.fail("targets", "list at least one config");
  std::vector<unsigned> workers;
  for (double w : root.has("workers") ? root.numbers("workers") : std::vector<double>{1, 4}) {
    if (!(w >= 1.0 && w <= 256.0) || w != std::floor(w)) root.fail("workers", "values must be integers in [1, 256]");
    workers.push_back(static_cast<unsigned>(w));
  }
  if (!root.has("workers")) (void)root.number("workers", 0.0);
  const auto target_samples = root.integer("target_samples", 0);
  if (target_samples < 0) root.fail("target_samples", "must be non-negative");

  std::vector<std::string> paths;
  for (const auto& t : targets) {
    std::filesystem::path p(t);
    if (p.is_relative() && !ctx.directory.empty()) p = std::filesystem::path(ctx.directory) / p;
    // Validate now so config errors surface before any sampling.
    auto doc = Document::load(p.string());
    const auto kind = doc.root().text("experiment");
    if (kind == "reproducibility") root.fail("targets", "targets cannot be reproducibility runs");
    paths.push_back(p.string());
  }

  return [=](Report& r) {
    r.columns = {"target", "run", "workers", "bytes", "sha1", "identical"};
    for (std::size_t i = 0; i < paths.size(); ++i) {
      // Runs: each worker count once, then the first worker count again.
      std::vector<unsigned> schedule = workers;
      schedule.push_back(workers.front());
      std::string reference;
      for (std::size_t k = 0; k < schedule.size(); ++k) {
        RunOptions o;
        o.seed = ctx.seed;
        if (target_samples > 0) o.samples = static_cast<std::size_t>(target_samples);
        o.workers = schedule[k];
        const auto out = run_file(paths[i], o);
        if (k == 0) reference = out.csv;
        const bool same = out.csv == reference;
        r.add({targets[i], std::to_string(k + 1), std::to_string(schedule[k]), std::to_string(out.csv.size()),
               sha1_hex(out.csv), same ? "yes" : "no"});
        if (!same) r.fail_last("CSV differs from run 1");
      }
    }
  };
}

using Parser = Runner (*)(const Table&, const Context&);

const std::map<std::string, Parser>& parsers() {
  static const std::map<std::string, Parser> table{
      {"mixture-id", parse_mixture_id},       {"pgf", parse_pgf},
      {"lemma22", parse_lemma22},             {"converge-sum", parse_converge_sum},
      {"converge-max", parse_converge_max},   {"mid-sample", parse_mid_sample},
      {"mid-check", parse_mid_check},         {"subordinate", parse_subordinate},
      {"classl", parse_classl},               {"ns-check", parse_ns_check},
      {"reproducibility", parse_reproducibility},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = [] {
    std::vector<std::string> k;
    for (const auto& [name, parser] : parsers()) k.push_back(name);
    return k;
  }();
  return kinds;
}

namespace {

struct Prepared {
  std::string kind;
  Runner runner;
};

Prepared prepare(Document& doc, const RunOptions& options, const std::string& expected_kind) {
  if (options.seed) doc.set("seed", std::to_string(*options.seed));
  if (options.samples) doc.set("samples", std::to_string(*options.samples));

  const auto root = doc.root();
  Context ctx;
  ctx.workers = std::max(1u, options.workers);
  ctx.directory = doc.directory();
  (void)root.text("description");
  const auto kind = root.text("experiment");
  const auto it = parsers().find(kind);
  if (it == parsers().end()) root.fail("experiment", "unknown experiment '" + kind + "'");
  if (!expected_kind.empty() && kind != expected_kind) {
    root.fail("experiment", "config is a '" + kind + "' experiment, expected '" + expected_kind + "'");
  }
  const auto seed = root.integer("seed", 42);
  if (seed < 0) root.fail("seed", "must be non-negative");
  ctx.seed = static_cast<std::uint64_t>(seed);
  const auto samples = root.integer("samples", 100000);
  if (samples < 1) root.fail("samples", "must be positive");
  ctx.samples = static_cast<std::size_t>(samples);
  const auto block = root.integer("block_size", 4096);
  if (block < 1) root.fail("block_size", "must be positive");
  ctx.block_size = static_cast<std::size_t>(block);
  // Echo the effective values, so the header says what actually ran.
  doc.set("seed", std::to_string(ctx.seed));
  doc.set("samples", std::to_string(ctx.samples));

  auto runner = it->second(root, ctx);
  doc.check_unused();
  return {kind, std::move(runner)};
}

}  // namespace

void validate_document(Document& doc, const std::string& expected_kind) {
  (void)prepare(doc, RunOptions{}, expected_kind);
}

Outcome run_document(Document& doc, const RunOptions& options, const std::string& expected_kind) {
  auto [kind, runner] = prepare(doc, options, expected_kind);

  Report report;
  runner(report);

  std::ostringstream csv;
  csv << "# phimix " << PHIMIX_VERSION << "\n";
  for (const auto& line : doc.canonical_echo()) csv << "# " << line << "\n";
  for (std::size_t i = 0; i < report.columns.size(); ++i) csv << (i ? "," : "") << report.columns[i];
  csv << "\n";
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << field(row[i]);
    csv << "\n";
  }
  return {kind, csv.str(), std::move(report.failures), std::move(report.warnings)};
}

Outcome run_file(const std::string& path, const RunOptions& options, const std::string& expected_kind) {
  auto doc = Document::load(path);
  return run_document(doc, options, expected_kind);
}

}  // namespace phimix::cli
