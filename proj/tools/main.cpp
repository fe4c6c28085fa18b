#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "config.hpp"
#include "emit.hpp"
#include "runner.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  std::string mode;
  bool timing = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "experiment config (JSON, schema_version 1)")->required();
  cmd->add_option("--seed", f.seed, "override the config seed");
  cmd->add_option("--out", f.out, "write reports here instead of the config outputs");
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--mode", f.mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
  cmd->add_flag("--timing", f.timing, "record wall time per check (output is no longer byte-stable)");
}

int run(const std::string& command, const Flags& f) {
  using namespace itolab::cli;
  ExperimentConfig config = load_config(f.config);
  if (f.seed) config.seed = *f.seed;
  if (!f.mode.empty()) config.sampled = f.mode == "sampled";
  RunOptions options;
  options.timing = f.timing;
  if (command != "suite") options.category = category_from_string(command);

  const std::vector<Job> jobs = plan(config, options);
  const std::vector<itolab::CheckReport> reports = sorted_for_output(execute(jobs, options));

  if (!f.out.empty()) {
    write_file(f.out, render(reports, f.format.empty() ? Format::csv : format_from_string(f.format)));
  } else if (!config.output_csv.empty() || !config.output_json.empty()) {
    if (!config.output_csv.empty()) write_file(config.output_csv, to_csv(reports));
    if (!config.output_json.empty()) write_file(config.output_json, to_json_text(reports));
  } else {
    std::cout << render(reports, f.format == "json" ? Format::json : Format::csv);
  }
  std::size_t failed = 0;
  std::size_t report_only = 0;
  for (const auto& r : reports) {
    failed += r.status == itolab::Status::fail;
    report_only += r.status == itolab::Status::report_only;
  }
  std::fprintf(stderr, "%zu rows: %zu failed, %zu report-only\n", reports.size(), failed, report_only);
  return failed > 0 ? kExitCheckFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace itolab::cli;
  CLI::App app{"itolab: numerical checks of moment inequalities for Poisson stochastic integrals"};
  app.require_subcommand(1);
  Flags flags;
  std::string command;
  for (const char* name : {"moments", "rosenthal", "integral", "matrix", "khintchine", "suite"}) {
    CLI::App* cmd = app.add_subcommand(name, std::string(name) == "suite" ? "run every configured check"
                                                                            : std::string("run the ") + name + " checks");
    add_flags(cmd, flags);
    cmd->callback([&command, name] { command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  try {
    return run(command, flags);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const itolab::InvalidInput& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitConfig;
  } catch (const itolab::ResourceError& e) {
    std::fprintf(stderr, "resource error: %s\n", e.what());
    return kExitResource;
  } catch (const itolab::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitResource;
  }
}
