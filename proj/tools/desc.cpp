// desc <command> <site-file> [--seed N] [--budget N] [--bound N] [--report out.json]
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "qstack/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Check finite group actions, principal bundles and descent data described in a site file."};
  std::string command;
  std::string site;
  std::string report_path;
  qstack::cli::RunOptions options;
  bool serial = false;

  std::string names;
  for (const auto& c : qstack::cli::commands()) names += (names.empty() ? "" : ", ") + c;
  app.add_option("command", command, "One of: " + names)->required();
  app.add_option("site", site, "Site file")->required();
  app.add_option("--seed", options.seed, "Seed for randomized checks")->capture_default_str();
  app.add_option("--budget", options.budget, "Random verify-stack cases per stack")->capture_default_str();
  app.add_option("--bound", options.bound, "Largest base in exhaustive sweeps; largest |A| for check-sheaf")
      ->capture_default_str();
  app.add_option("--report", report_path, "Write the JSON report here");
  app.add_flag("--serial", serial, "Run corpus checks on one thread");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  options.parallel = !serial;

  const qstack::cli::RunResult r = qstack::cli::run(command, site, options);
  (r.exit_code == 2 ? std::cerr : std::cout) << r.text;
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << report_path << "\n";
      return 2;
    }
    out << r.report;
  }
  return r.exit_code;
}
