#include "phimix/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "phimix/fixtures.hpp"
#include "phimix/stats_verify.hpp"

namespace phimix::cli {

namespace {

std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

bool scalar_sequence(const YAML::Node& node) {
  if (!node.IsSequence()) return false;
  return std::all_of(node.begin(), node.end(), [](const YAML::Node& n) { return n.IsScalar(); });
}

void echo(const YAML::Node& node, const std::string& path, std::vector<std::string>& out) {
  if (node.IsMap()) {
    for (const auto& kv : node) echo(kv.second, join_path(path, kv.first.as<std::string>()), out);
  } else if (scalar_sequence(node)) {
    std::string line = path + " = [";
    for (std::size_t i = 0; i < node.size(); ++i) {
      if (i) line += ", ";
      line += node[i].Scalar();
    }
    out.push_back(line + "]");
  } else if (node.IsSequence()) {
    for (std::size_t i = 0; i < node.size(); ++i) echo(node[i], path + "[" + std::to_string(i) + "]", out);
  } else if (node.IsScalar()) {
    out.push_back(path + " = " + node.Scalar());
  } else {
    out.push_back(path + " = ~");
  }
}

void find_unused(const YAML::Node& node, const std::string& path, const std::set<std::string>& used) {
  if (node.IsMap()) {
    for (const auto& kv : node) {
      const auto key = join_path(path, kv.first.as<std::string>());
      if (!used.count(key)) throw ConfigError("unknown key '" + key + "'");
      find_unused(kv.second, key, used);
    }
  } else if (node.IsSequence()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      find_unused(node[i], path + "[" + std::to_string(i) + "]", used);
    }
  }
}

}  // namespace

Table::Table(YAML::Node node, std::string path, std::shared_ptr<std::set<std::string>> used)
    : node_(std::move(node)), path_(std::move(path)), used_(std::move(used)) {
  if (!node_.IsMap()) throw ConfigError("'" + (path_.empty() ? "<root>" : path_) + "' must be a table");
}

std::string Table::child(const std::string& key) const { return join_path(path_, key); }

bool Table::has(const std::string& key) const {
  const YAML::Node& n = node_;
  return static_cast<bool>(n[key]) && !n[key].IsNull();
}

YAML::Node Table::get(const std::string& key) const {
  const YAML::Node& n = node_;
  YAML::Node v = n[key];
  if (!v || v.IsNull()) throw ConfigError("missing key '" + child(key) + "'");
  used_->insert(child(key));
  return v;
}

void Table::fail(const std::string& key, const std::string& message) const {
  throw ConfigError("'" + child(key) + "': " + message);
}

double Table::number(const std::string& key) const {
  const auto v = get(key);
  if (!v.IsScalar()) fail(key, "expected a number");
  try {
    return v.as<double>();
  } catch (const YAML::Exception&) {
    fail(key, "expected a number, got '" + v.Scalar() + "'");
  }
}

double Table::number(const std::string& key, double fallback) const {
  if (!has(key)) {
    used_->insert(child(key));
    return fallback;
  }
  return number(key);
}

std::int64_t Table::integer(const std::string& key) const {
  const double v = number(key);
  if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 9.0e15) fail(key, "expected an integer");
  return static_cast<std::int64_t>(v);
}

std::int64_t Table::integer(const std::string& key, std::int64_t fallback) const {
  if (!has(key)) {
    used_->insert(child(key));
    return fallback;
  }
  return integer(key);
}

std::string Table::text(const std::string& key) const {
  const auto v = get(key);
  if (!v.IsScalar()) fail(key, "expected a string");
  return v.Scalar();
}

std::string Table::text(const std::string& key, const std::string& fallback) const {
  if (!has(key)) {
    used_->insert(child(key));
    return fallback;
  }
  return text(key);
}

bool Table::flag(const std::string& key, bool fallback) const {
  if (!has(key)) {
    used_->insert(child(key));
    return fallback;
  }
  const auto v = get(key);
  try {
    return v.as<bool>();
  } catch (const YAML::Exception&) {
    fail(key, "expected true or false");
  }
}

std::vector<double> Table::numbers(const std::string& key) const {
  const auto v = get(key);
  if (!scalar_sequence(v)) fail(key, "expected a list of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    try {
      out.push_back(e.as<double>());
    } catch (const YAML::Exception&) {
      fail(key, "expected a number, got '" + e.Scalar() + "'");
    }
  }
  return out;
}

std::vector<std::string> Table::texts(const std::string& key) const {
  const auto v = get(key);
  if (!scalar_sequence(v)) fail(key, "expected a list of strings");
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(e.Scalar());
  return out;
}

Table Table::table(const std::string& key) const {
  const auto v = get(key);
  if (!v.IsMap()) fail(key, "expected a table");
  return Table(v, child(key), used_);
}

std::vector<Table> Table::tables(const std::string& key) const {
  const auto v = get(key);
  if (!v.IsSequence() || v.size() == 0) fail(key, "expected a non-empty list of tables");
  std::vector<Table> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto name = child(key) + "[" + std::to_string(i) + "]";
    if (!v[i].IsMap()) throw ConfigError("'" + name + "' must be a table");
    out.emplace_back(v[i], name, used_);
  }
  return out;
}

std::vector<double> Table::grid(const std::string& key) const {
  const auto v = get(key);
  std::vector<double> g;
  if (v.IsSequence()) {
    g = numbers(key);
  } else if (v.IsMap()) {
    const Table t(v, child(key), used_);
    const double from = t.number("from");
    const double to = t.number("to");
    const auto points = t.integer("points");
    const auto spacing = t.text("spacing", "linear");
    if (points < 1) t.fail("points", "must be at least 1");
    try {
      if (spacing == "linear") {
        g = linear_grid(from, to, static_cast<std::size_t>(points));
      } else if (spacing == "log") {
        g = log_grid(from, to, static_cast<std::size_t>(points));
      } else {
        t.fail("spacing", "expected linear or log");
      }
    } catch (const std::invalid_argument& e) {
      fail(key, e.what());
    }
  } else {
    fail(key, "expected a list or {from, to, points}");
  }
  if (g.empty()) fail(key, "grid is empty");
  for (double x : g) {
    if (!std::isfinite(x)) fail(key, "grid values must be finite");
  }
  return g;
}

std::vector<double> Table::grid(const std::string& key, std::vector<double> fallback) const {
  if (!has(key)) {
    used_->insert(child(key));
    return fallback;
  }
  return grid(key);
}

MixingLaw Table::mixing(const std::string& key) const {
  const auto t = table(key);
  const auto law = t.text("law");
  try {
    if (law == "gamma") return MixingLaw::gamma(t.number("shape"), t.number("scale", 1.0));
    if (law == "exponential") return MixingLaw::exponential(t.number("scale", 1.0));
    if (law == "degenerate") return MixingLaw::degenerate(t.number("point"));
    if (law == "bernoulli-fixture") return fixtures::bernoulli_scaled_lt();
  } catch (const std::invalid_argument& e) {
    fail(key, e.what());
  }
  t.fail("law", "unknown mixing law '" + law + "' (gamma, exponential, degenerate, bernoulli-fixture)");
}

StableExponent Table::exponent(const std::string& key) const {
  const auto t = table(key);
  try {
    return StableExponent(t.number("scale", 1.0), t.number("index"), t.number("skew", 0.0));
  } catch (const std::invalid_argument& e) {
    fail(key, e.what());
  }
}

Document Document::parse(const std::string& text, std::string origin) {
  Document d;
  try {
    d.node_ = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!d.node_.IsMap()) throw ConfigError(origin + ": a configuration must be a table of keys");
  d.origin_ = std::move(origin);
  d.used_ = std::make_shared<std::set<std::string>>();
  return d;
}

Document Document::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  auto d = parse(text.str(), path);
  d.directory_ = std::filesystem::path(path).parent_path().string();
  return d;
}

Table Document::root() const { return Table(node_, "", used_); }

void Document::set(const std::string& key, const std::string& value) { node_[key] = value; }

void Document::check_unused() const { find_unused(node_, "", *used_); }

std::vector<std::string> Document::canonical_echo() const {
  std::vector<std::string> out;
  echo(node_, "", out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace phimix::cli
