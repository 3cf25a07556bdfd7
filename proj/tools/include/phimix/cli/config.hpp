#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "phimix/id_laws.hpp"
#include "phimix/mixing_laws.hpp"

namespace phimix::cli {

/// Anything wrong with a configuration: syntax, types, unknown or missing keys.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Read-only view of one YAML mapping. Every key that is read is recorded in a
/// registry shared with the whole document, so `Document::check_unused` can
/// reject keys nobody asked for.
class Table {
 public:
  Table(YAML::Node node, std::string path, std::shared_ptr<std::set<std::string>> used);

  [[nodiscard]] const std::string& path() const noexcept { return path_; }
  [[nodiscard]] bool has(const std::string& key) const;

  [[nodiscard]] double number(const std::string& key) const;
  [[nodiscard]] double number(const std::string& key, double fallback) const;
  [[nodiscard]] std::int64_t integer(const std::string& key) const;
  [[nodiscard]] std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  [[nodiscard]] std::string text(const std::string& key) const;
  [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const;
  [[nodiscard]] bool flag(const std::string& key, bool fallback) const;
  [[nodiscard]] std::vector<double> numbers(const std::string& key) const;
  [[nodiscard]] std::vector<std::string> texts(const std::string& key) const;

  [[nodiscard]] Table table(const std::string& key) const;
  [[nodiscard]] std::vector<Table> tables(const std::string& key) const;

  /// A grid given either as an explicit list or as {from, to, points, spacing}.
  [[nodiscard]] std::vector<double> grid(const std::string& key) const;
  [[nodiscard]] std::vector<double> grid(const std::string& key, std::vector<double> fallback) const;

  /// {law: gamma|exponential|degenerate|bernoulli-fixture, shape, scale, point}
  [[nodiscard]] MixingLaw mixing(const std::string& key) const;
  /// {scale, index, skew}
  [[nodiscard]] StableExponent exponent(const std::string& key) const;

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  [[nodiscard]] YAML::Node get(const std::string& key) const;
  [[nodiscard]] std::string child(const std::string& key) const;

  YAML::Node node_;
  std::string path_;
  std::shared_ptr<std::set<std::string>> used_;
};

/// A parsed configuration file.
class Document {
 public:
  static Document parse(const std::string& text, std::string origin = "<string>");
  static Document load(const std::string& path);

  [[nodiscard]] Table root() const;
  [[nodiscard]] const std::string& origin() const noexcept { return origin_; }
  /// Directory the document was loaded from ("" for strings).
  [[nodiscard]] const std::string& directory() const noexcept { return directory_; }

  /// Replaces a top-level scalar, e.g. a --seed override.
  void set(const std::string& key, const std::string& value);

  /// Throws ConfigError naming the first key that was never read.
  void check_unused() const;

  /// Sorted `path = value` lines; identical documents give identical echoes.
  [[nodiscard]] std::vector<std::string> canonical_echo() const;

 private:
  YAML::Node node_;
  std::string origin_;
  std::string directory_;
  std::shared_ptr<std::set<std::string>> used_;
};

}  // namespace phimix::cli
