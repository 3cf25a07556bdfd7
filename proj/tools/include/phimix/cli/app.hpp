#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phimix::cli {

/// Directory searched by `--list`: $PHIMIX_CONFIG_DIR if set, else the
/// installed config directory, else the source tree's tools/configs.
std::string config_directory();

/// Entry point of the `phimix` executable. Exit codes: 0 all thresholds met,
/// 1 threshold failure (failing rows go to `err`), 2 usage or config error
/// (no CSV written).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phimix::cli
