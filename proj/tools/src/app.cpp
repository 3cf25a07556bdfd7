#include "phimix/cli/app.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "phimix/cli/experiments.hpp"

namespace phimix::cli {

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  unsigned workers = 1;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool config_required = true) {
  auto* opt = cmd->add_option("--config", c.config, "Experiment configuration file");
  if (config_required) opt->required();
  cmd->add_option("--seed", c.seed, "Override the configured seed");
  cmd->add_option("--samples", c.samples, "Override the configured sample count")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", c.workers, "Worker threads (results do not depend on it)")
      ->check(CLI::Range(1u, 256u));
  cmd->add_option("--out", c.out, "Write the CSV report here instead of stdout");
}

int list_configs(std::ostream& out, std::ostream& err) {
  const auto dir = config_directory();
  std::error_code ec;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".yaml") files.push_back(entry.path());
  }
  if (ec) {
    err << "phimix: cannot list " << dir << ": " << ec.message() << "\n";
    return 2;
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      const auto doc = Document::load(f.string());
      const auto root = doc.root();
      out << std::left << std::setw(28) << f.filename().string() << std::setw(18) << root.text("experiment")
          << root.text("description") << "\n";
    } catch (const ConfigError& e) {
      out << std::left << std::setw(28) << f.filename().string() << "(unreadable: " << e.what() << ")\n";
    }
  }
  return 0;
}

int execute(Document& doc, const Common& c, const std::string& kind, std::ostream& out, std::ostream& err) {
  RunOptions options;
  options.seed = c.seed;
  options.samples = c.samples;
  options.workers = c.workers;
  Outcome outcome;
  try {
    outcome = run_document(doc, options, kind);
  } catch (const ConfigError& e) {
    err << "phimix: config error: " << e.what() << "\n";
    return 2;
  }
  if (c.out.empty()) {
    out << outcome.csv;
  } else {
    std::ofstream file(c.out, std::ios::binary);
    file << outcome.csv;
    if (!file) {
      err << "phimix: cannot write " << c.out << "\n";
      return 2;
    }
  }
  for (const auto& w : outcome.warnings) err << "warning: " << w << "\n";
  for (const auto& f : outcome.failures) err << "FAIL " << f << "\n";
  return outcome.pass() ? 0 : 1;
}

int execute_file(const Common& c, const std::string& kind, std::ostream& out, std::ostream& err) {
  try {
    auto doc = Document::load(c.config);
    return execute(doc, c, kind, out, err);
  } catch (const ConfigError& e) {
    err << "phimix: config error: " << e.what() << "\n";
    return 2;
  }
}

std::string quick_classl(const std::string& subject, double lambda, double alpha, double beta, double nu) {
  std::ostringstream y;
  y << std::setprecision(17);
  y << "description: class-L check of the generalized Linnik law\n"
    << "experiment: classl\n"
    << "subjects:\n"
    << "  - name: " << subject << "\n"
    << "    cf: {law: linnik, lambda: " << lambda << ", alpha: " << alpha << ", beta: " << beta << ", nu: " << nu
    << "}\n"
    << "    mode_samples: 20000\n"
    << "  - name: gamma-mixing\n"
    << "    lt: {law: gamma, shape: " << nu << "}\n";
  return y.str();
}

}  // namespace

std::string config_directory() {
  if (const char* env = std::getenv("PHIMIX_CONFIG_DIR"); env && *env) return env;
  // Installed copy first, then the source tree for uninstalled builds.
  if (std::filesystem::is_directory(PHIMIX_CONFIG_DIR)) return PHIMIX_CONFIG_DIR;
  return PHIMIX_SOURCE_CONFIG_DIR;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"phi-mixture experiments: random sums and maxima, Linnik laws, class-L checks"};
  app.set_version_flag("--version", std::string(PHIMIX_VERSION));
  bool list = false;
  app.add_flag("--list", list, "List the shipped example configurations");
  app.require_subcommand(0, 1);

  std::vector<std::pair<CLI::App*, Common>> slots;
  slots.reserve(16);
  auto simple = [&](const std::string& name, const std::string& help) {
    slots.emplace_back(app.add_subcommand(name, help), Common{});
    add_common(slots.back().first, slots.back().second);
    return slots.size() - 1;
  };

  const auto run_i = simple("run", "Run any configuration, dispatching on its experiment key");
  const auto pgf_i = simple("pgf", "Counting family: PGF against simulation and closed-form pmf");
  const auto lemma_i = simple("lemma22", "Scaled counting law against its mixing-law limit");
  const auto mixid_i = simple("mixture-id", "Mixture sampler against the closed-form characteristic function");
  const auto ns_i = simple("ns-check", "(1 - g_theta) / theta against the Levy exponent");
  const auto repro_i = simple("reproducibility", "Rerun configurations and compare CSV bytes");
  slots[repro_i].first->alias("repro");

  const auto conv_i = simple("converge", "Random sums or maxima along a theta sequence");
  std::string conv_mode;
  slots[conv_i].first->add_option("mode", conv_mode, "sum or max")->required()->check(CLI::IsMember({"sum", "max"}));

  const auto mid_i = simple("mid", "Max-infinitely divisible laws: d.f. checks or sampling");
  bool mid_check = false;
  bool mid_sample = false;
  auto* check_flag = slots[mid_i].first->add_flag("--check", mid_check, "Power and support checks");
  slots[mid_i].first->add_flag("--sample", mid_sample, "Extremal process at a random time")->excludes(check_flag);

  const auto sub_i = simple("subordinate", "Stable process on a random clock");
  std::optional<std::size_t> paths;
  slots[sub_i].first->add_option("--paths", paths, "Number of paths (same as --samples)")->check(CLI::PositiveNumber);

  slots.emplace_back(app.add_subcommand("classl", "Self-decomposability witnesses"), Common{});
  const auto classl_i = slots.size() - 1;
  add_common(slots[classl_i].first, slots[classl_i].second, false);
  std::string subject;
  double lambda = 1.0, alpha = 2.0, beta = 0.0, nu = 1.0;
  auto* cl = slots[classl_i].first;
  cl->add_option("--subject", subject, "Quick mode: check a named law instead of a config")
      ->check(CLI::IsMember({"linnik"}));
  cl->add_option("--lambda", lambda, "Linnik scale");
  cl->add_option("--alpha", alpha, "Linnik index");
  cl->add_option("--beta", beta, "Linnik skewness angle");
  cl->add_option("--nu", nu, "Linnik shape");

  std::vector<const char*> argv{"phimix"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? 0 : 2;
  }

  if (list) return list_configs(out, err);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    auto* cmd = slots[i].first;
    if (!cmd->parsed()) continue;
    Common& c = slots[i].second;
    if (i == run_i) return execute_file(c, "", out, err);
    if (i == pgf_i) return execute_file(c, "pgf", out, err);
    if (i == lemma_i) return execute_file(c, "lemma22", out, err);
    if (i == mixid_i) return execute_file(c, "mixture-id", out, err);
    if (i == ns_i) return execute_file(c, "ns-check", out, err);
    if (i == repro_i) return execute_file(c, "reproducibility", out, err);
    if (i == conv_i) return execute_file(c, conv_mode == "sum" ? "converge-sum" : "converge-max", out, err);
    if (i == mid_i) {
      if (!mid_check && !mid_sample) {
        err << "phimix: mid needs --check or --sample\n";
        return 2;
      }
      return execute_file(c, mid_check ? "mid-check" : "mid-sample", out, err);
    }
    if (i == sub_i) {
      if (paths) {
        if (c.samples && *c.samples != *paths) {
          err << "phimix: --paths and --samples disagree\n";
          return 2;
        }
        c.samples = paths;
      }
      return execute_file(c, "subordinate", out, err);
    }
    if (i == classl_i) {
      if (subject.empty() == c.config.empty()) {
        err << "phimix: classl needs exactly one of --config or --subject\n";
        return 2;
      }
      if (!c.config.empty()) return execute_file(c, "classl", out, err);
      try {
        auto doc = Document::parse(quick_classl(subject, lambda, alpha, beta, nu), "--subject");
        return execute(doc, c, "classl", out, err);
      } catch (const ConfigError& e) {
        err << "phimix: config error: " << e.what() << "\n";
        return 2;
      }
    }
  }
  err << app.help();
  return 2;
}

}  // namespace phimix::cli
