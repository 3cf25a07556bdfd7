#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phimix/cli/config.hpp"

namespace phimix::cli {

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  unsigned workers = 1;
};

struct Outcome {
  std::string kind;
  std::string csv;
  std::vector<std::string> failures;  // one line per failing row
  std::vector<std::string> warnings;

  [[nodiscard]] bool pass() const noexcept { return failures.empty(); }
};

/// Experiment kinds accepted in the `experiment` key.
const std::vector<std::string>& experiment_kinds();

/// Validates the whole document, then runs it. Config problems throw
/// ConfigError before any sampling starts. If `expected_kind` is non-empty
/// the document's `experiment` must equal it.
Outcome run_document(Document& doc, const RunOptions& options, const std::string& expected_kind = "");

/// Parses and checks a document without sampling anything.
void validate_document(Document& doc, const std::string& expected_kind = "");

Outcome run_file(const std::string& path, const RunOptions& options, const std::string& expected_kind = "");

}  // namespace phimix::cli
