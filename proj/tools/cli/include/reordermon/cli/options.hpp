#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reordermon/synth.hpp"

namespace CLI {
class App;
}

namespace reordermon::cli {

/// Every knob of every subcommand. Options share one flat namespace so a
/// config file can set any of them with `key = value` lines.
struct Options {
  std::string trace;
  std::string out = ".";
  bool server_to_client = false;

  std::string algo = "array";
  int def = 1;
  std::vector<std::size_t> buckets;   // empty: subcommand default
  std::vector<double> hh_fractions;   // empty: subcommand default
  double T = 0x1p-15;
  std::uint64_t C = 16;
  std::uint64_t R = 1;
  double r_hh = 0.01;
  std::size_t d = 2;
  std::uint64_t min_hh_packets = 16;
  bool filter_by_prefix = false;
  std::uint64_t alpha = 16;
  std::uint64_t beta = 128;
  double eps = 0.01;
  double c = 1.0;
  std::string mode = "count";
  bool report_all = false;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::size_t jobs = 1;
  bool write_reports = false;

  std::string sweep_param = "buckets";
  std::vector<double> sweep_values;

  std::size_t pcc_repetitions = 100;
  double pcc_fraction = 0.005;

  SynthConfig synth;

  std::string model;  // lemma model JSON; empty: built-in presets
  std::size_t trials = 10000;
};

/// Registers all options and subcommands on `app`.
void register_options(CLI::App& app, Options& opts);

}  // namespace reordermon::cli
