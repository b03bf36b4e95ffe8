#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hsd/cli.hpp"

namespace {

unsigned thread_count() {
  const char* env = std::getenv("HSD_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) return 1;
  return static_cast<unsigned>(std::min(n, 64L));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated iterative Hasse-Schmidt derivations: batch driver"};
  app.require_subcommand(1);
  std::string config_path, report_path;
  bool quiet = false;
  CLI::App* run = app.add_subcommand("run", "Run the job described by a JSON config");
  run->add_option("config", config_path, "Path to the config file")->required();
  run->add_option("--report", report_path, "Write the report here instead of stdout");
  run->add_flag("--quiet", quiet, "Suppress the summary on stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : hsd::cli::kMalformed;
  }

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << config_path << "\n";
    return hsd::cli::kMalformed;
  }
  std::ostringstream text;
  text << in.rdbuf();

  auto start = std::chrono::steady_clock::now();
  hsd::cli::JobResult job = hsd::cli::run_job(text.str(), thread_count());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (report_path.empty()) {
    std::cout << job.report;
  } else {
    std::ofstream out(report_path, std::ios::binary);
    out << job.report;
    if (!out) {
      std::cerr << "cannot write " << report_path << "\n";
      return hsd::cli::kMalformed;
    }
  }
  if (!quiet) {
    std::cerr << job.summary;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", secs);
    std::cerr << "exit " << job.exit_code << " in " << buf << " s\n";
  }
  return job.exit_code;
}
