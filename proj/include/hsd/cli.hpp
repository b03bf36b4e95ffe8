#pragma once

#include <string>
#include <vector>

namespace hsd::cli {

inline constexpr int kSchemaVersion = 1;

/// Guards: p^(e m) <= 65536 for every job, and a model dimension of at most
/// 256 for commands that build component matrices.
inline constexpr unsigned long long kMaxBox = 65536;
inline constexpr unsigned long long kMaxModelDim = 256;

enum ExitCode { kPass = 0, kFail = 1, kMalformed = 2, kResource = 3 };

struct JobResult {
  int exit_code = kMalformed;
  std::string report;   // JSON, byte-deterministic for a given config
  std::string summary;  // short human-readable lines
};

/// Runs the job described by a JSON config. Domain errors end up in the
/// report; nothing is thrown.
JobResult run_job(const std::string& config_text, unsigned threads = 1);

struct SelftestCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};
/// The built-in invariant suite; checks run on up to `threads` workers and
/// are returned in a fixed order.
std::vector<SelftestCheck> run_selftest(unsigned threads = 1);

}  // namespace hsd::cli
