#pragma once

#include <stdexcept>

#include "reordermon/cli/options.hpp"

namespace reordermon::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Bad option values that only surface after parsing.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unreadable or malformed input files, unwritable outputs.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void cmd_generate(const Options& opts);
void cmd_analyze(const Options& opts);
void cmd_run(const Options& opts);
void cmd_sweep(const Options& opts);
void cmd_grid_hybrid(const Options& opts);
void cmd_validate_lemma(const Options& opts);

/// Parses argv, dispatches and maps failures to exit codes.
int main_entry(int argc, const char* const* argv);

}  // namespace reordermon::cli
