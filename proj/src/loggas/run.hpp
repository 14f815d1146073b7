#pragma once

// Config-driven command orchestration: parses the run configuration JSON,
// executes one of the commands (expand, spectrum, sample, oracle, deform,
// verify) and emits the JSON summary plus CSV tables. Exit codes: 0 success,
// 1 validation failure, 2 configuration error.

#include <string>

namespace loggas::run {

struct RunResult {
  int exit_code = 0;
  std::string summary_json;  // also written to <out_dir>/summary.json
};

RunResult run_command(const std::string& command,
                      const std::string& config_json,
                      const std::string& out_dir);

const char* version();

}  // namespace loggas::run
