// Command-line front end. Everything goes through the C API.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "loggas.h"

int main(int argc, char** argv) {
  CLI::App app{"Log-gas on a closed contour: free-energy expansion, boundary "
               "operators, determinants, and finite-N validation"};
  app.set_version_flag("--version", lg_version());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string command;
  for (const char* name :
       {"expand", "spectrum", "sample", "oracle", "deform", "verify"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run configuration JSON")
        ->required();
    sub->add_option("--out", out_dir, "output directory (default: .)");
    sub->callback([&command, name] { command = name; });
  }

  CLI11_PARSE(app, argc, argv);

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config file '" << config_path << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string config = buf.str();

  int exit_code = 0;
  char* summary = nullptr;
  const lg_status st =
      lg_run(command.c_str(), config.c_str(), out_dir.c_str(), &exit_code,
             &summary);
  if (st != LG_OK) {
    std::cerr << "error: " << lg_last_error() << "\n";
    return 1;
  }
  std::cout << summary << "\n";
  lg_string_free(summary);
  return exit_code;
}
