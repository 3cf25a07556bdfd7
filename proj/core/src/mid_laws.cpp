#include "phimix/mid_laws.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace phimix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

MidLaw MidLaw::product_frechet(std::vector<double> shapes) {
  if (shapes.size() < 2) throw std::invalid_argument("MidLaw: dimension must be >= 2");
  for (double g : shapes) {
    if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("MidLaw: Frechet shapes must be positive");
  }
  return {MidKind::product_frechet, std::move(shapes)};
}

MidLaw MidLaw::product_neg_exponential(std::size_t dim) {
  if (dim < 2) throw std::invalid_argument("MidLaw: dimension must be >= 2");
  return {MidKind::product_neg_exponential, std::vector<double>(dim, 1.0)};
}

double MidLaw::lower_corner(std::size_t i) const {
  if (i >= dim()) throw std::out_of_range("MidLaw::lower_corner");
  return kind_ == MidKind::product_frechet ? 0.0 : -kInf;
}

double MidLaw::neg_log_df(std::span<const double> x) const {
  if (x.size() != dim()) throw std::invalid_argument("MidLaw: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (kind_ == MidKind::product_frechet) {
      if (!(x[i] > 0.0)) return kInf;
      if (x[i] == kInf) continue;
      acc += std::pow(x[i], -shapes_[i]);
    } else {
      if (x[i] == -kInf) return kInf;
      acc -= std::min(x[i], 0.0);
    }
  }
  return acc;
}

double MidLaw::df(std::span<const double> x) const {
  const double e = neg_log_df(x);
  return e == kInf ? 0.0 : std::exp(-e);
}

void MidLaw::sample_power(double t, Rng& rng, std::span<double> out) const {
  if (!(t > 0.0)) throw std::invalid_argument("MidLaw::sample_power: t must be positive");
  if (out.size() != dim()) throw std::invalid_argument("MidLaw::sample_power: dimension mismatch");
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double e = rng.exponential();
    if (kind_ == MidKind::product_frechet) {
      // P((t/E)^(1/g) <= x) = P(E >= t x^-g) = exp(-t x^-g).
      out[i] = std::pow(t / e, 1.0 / shapes_[i]);
    } else {
      out[i] = -e / t;
    }
  }
}

DfFunction MidLaw::as_function() const {
  return [law = *this](std::span<const double> x) { return law.df(x); };
}

std::string MidLaw::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == MidKind::product_frechet) {
    os << "product-frechet(gamma=[";
    for (std::size_t i = 0; i < shapes_.size(); ++i) os << (i ? ", " : "") << shapes_[i];
    os << "])";
  } else {
    os << "product-neg-exponential(dim=" << dim() << ")";
  }
  return os.str();
}

std::size_t RectGrid::size() const {
  if (axes.empty()) return 0;
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size();
  return n;
}

std::vector<std::size_t> RectGrid::unflatten(std::size_t flat) const {
  std::vector<std::size_t> index(dim());
  for (std::size_t k = dim(); k-- > 0;) {
    index[k] = flat % axes[k].size();
    flat /= axes[k].size();
  }
  return index;
}

std::size_t RectGrid::flatten(std::span<const std::size_t> index) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < dim(); ++k) flat = flat * axes[k].size() + index[k];
  return flat;
}

std::vector<double> RectGrid::point(std::span<const std::size_t> index) const {
  std::vector<double> p(dim());
  for (std::size_t k = 0; k < dim(); ++k) p[k] = axes[k][index[k]];
  return p;
}

std::vector<std::vector<double>> RectGrid::points() const {
  std::vector<std::vector<double>> out;
  out.reserve(size());
  for (std::size_t f = 0; f < size(); ++f) out.push_back(point(unflatten(f)));
  return out;
}

RectGrid square_grid(std::span<const double> axis, std::size_t dim) {
  RectGrid grid;
  grid.axes.assign(dim, std::vector<double>(axis.begin(), axis.end()));
  return grid;
}

TabulatedDf tabulate(const DfFunction& df, const RectGrid& grid) {
  if (grid.dim() == 0) throw std::invalid_argument("tabulate: empty grid");
  for (const auto& a : grid.axes) {
    if (a.empty()) throw std::invalid_argument("tabulate: empty axis");
    for (std::size_t i = 1; i < a.size(); ++i) {
      if (!(a[i] > a[i - 1])) throw std::invalid_argument("tabulate: axes must be strictly increasing");
    }
  }
  TabulatedDf table{grid, std::vector<double>(grid.size())};
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto p = grid.point(grid.unflatten(f));
    table.values[f] = df(p);
  }
  return table;
}

const char* to_string(MidViolation::Kind kind) {
  switch (kind) {
    case MidViolation::Kind::range:
      return "range";
    case MidViolation::Kind::monotone:
      return "monotone";
    case MidViolation::Kind::rectangle:
      return "rectangle";
  }
  return "?";
}

MidCheckReport mid_power_check(const TabulatedDf& table, std::span<const double> powers, double tol) {
  const auto& grid = table.grid;
  const std::size_t d = grid.dim();
  const std::size_t total = grid.size();
  if (table.values.size() != total) throw std::invalid_argument("mid_power_check: table size mismatch");

  MidCheckReport report;
  std::vector<double> pw(total);
  for (double s : powers) {
    if (!(s > 0.0)) throw std::invalid_argument("mid_power_check: powers must be positive");
    for (std::size_t f = 0; f < total; ++f) {
      const double v = table.values[f];
      pw[f] = v > 0.0 ? std::pow(v, s) : (v == 0.0 ? 0.0 : v);
      if (v < -tol || v > 1.0 + tol) {
        report.violations.push_back({MidViolation::Kind::range, s, grid.unflatten(f), 0, v});
      }
    }
    for (std::size_t f = 0; f < total; ++f) {
      auto idx = grid.unflatten(f);
      for (std::size_t k = 0; k < d; ++k) {
        if (idx[k] + 1 >= grid.axes[k].size()) continue;
        auto up = idx;
        ++up[k];
        const double inc = pw[grid.flatten(up)] - pw[f];
        if (inc < -tol) report.violations.push_back({MidViolation::Kind::monotone, s, idx, k, inc});
      }
      // Cell with lower corner idx, if it exists.
      bool has_cell = true;
      for (std::size_t k = 0; k < d; ++k) has_cell = has_cell && idx[k] + 1 < grid.axes[k].size();
      if (!has_cell) continue;
      double mass = 0.0;
      for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
        auto c = idx;
        std::size_t lows = 0;
        for (std::size_t k = 0; k < d; ++k) {
          if (corner & (std::size_t{1} << k)) {
            ++c[k];
          } else {
            ++lows;
          }
        }
        mass += (lows % 2 == 0 ? 1.0 : -1.0) * pw[grid.flatten(c)];
      }
      if (mass < -tol) report.violations.push_back({MidViolation::Kind::rectangle, s, idx, 0, mass});
    }
  }
  report.pass = report.violations.empty();
  return report;
}

MidCheckReport mid_power_check(const DfFunction& df, const RectGrid& grid, std::span<const double> powers,
                               double tol) {
  return mid_power_check(tabulate(df, grid), powers, tol);
}

SupportReport support_rectangle_check(const TabulatedDf& table) {
  const auto& grid = table.grid;
  const std::size_t d = grid.dim();
  std::vector<std::vector<bool>> projection(d);
  for (std::size_t k = 0; k < d; ++k) projection[k].assign(grid.axes[k].size(), false);
  for (std::size_t f = 0; f < grid.size(); ++f) {
    if (table.values[f] > 0.0) {
      const auto idx = grid.unflatten(f);
      for (std::size_t k = 0; k < d; ++k) projection[k][idx[k]] = true;
    }
  }
  SupportReport report;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto idx = grid.unflatten(f);
    bool in_product = true;
    for (std::size_t k = 0; k < d; ++k) in_product = in_product && projection[k][idx[k]];
    if (in_product != (table.values[f] > 0.0)) report.offending.push_back(idx);
  }
  report.pass = report.offending.empty();
  return report;
}

SupportReport support_rectangle_check(const DfFunction& df, const RectGrid& grid) {
  return support_rectangle_check(tabulate(df, grid));
}

double mixture_mid_df(const MixingLaw& mixing, const MidLaw& law, std::span<const double> x) {
  const double e = law.neg_log_df(x);
  if (e == kInf) return 0.0;
  return mixing.laplace(e);
}

double mixture_mid_df(const MixingLaw& mixing, const DfFunction& df, std::span<const double> x) {
  const double h = df(x);
  if (!(h > 0.0)) return 0.0;
  return mixing.laplace(std::max(0.0, -std::log(h)));
}

void sample_extremal_at_random_time(const MixingLaw& mixing, const MidLaw& law, Rng& rng,
                                    std::span<double> out) {
  double z = mixing.sample(rng);
  // A gamma draw can underflow to 0 for tiny shapes; Y(0+) sits at the lower corner.
  if (!(z > 0.0)) z = std::numeric_limits<double>::min();
  law.sample_power(z, rng, out);
}

}  // namespace phimix
