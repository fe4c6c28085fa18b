#ifndef ITOLAB_TOOLS_RUNNER_HPP
#define ITOLAB_TOOLS_RUNNER_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "itolab/report.hpp"

namespace itolab::cli {

struct RunOptions {
  std::optional<Category> category;  // run only checks of this category
  bool timing = false;               // runtime_ms stays 0 otherwise, keeping output byte-stable
};

// One check at one parameter point.
struct Job {
  std::string check_id;
  std::function<std::vector<CheckReport>()> run;
};

// Validates every selected check body and binds it to its parameter points.
// Throws ConfigError before anything is executed.
std::vector<Job> plan(const ExperimentConfig& config, const RunOptions& options = {});

// Runs the jobs on the work pool and concatenates reports in job order.
// Rethrows the first job exception in job order; an OptimizerError becomes a
// fail row instead.
std::vector<CheckReport> execute(const std::vector<Job>& jobs, const RunOptions& options = {});

std::vector<CheckReport> run(const ExperimentConfig& config, const RunOptions& options = {});

enum ExitCode { kExitOk = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitResource = 3 };

}  // namespace itolab::cli

#endif
