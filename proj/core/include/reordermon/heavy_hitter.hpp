#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "reordermon/model.hpp"
#include "reordermon/report.hpp"

namespace reordermon {

struct HHParams {
  std::size_t stages = 2;               // d
  std::size_t buckets_per_stage = 512;
  // Explicit per-stage sizes; when non-empty it overrides stages/buckets_per_stage.
  std::vector<std::size_t> stage_sizes;
  double report_fraction = 0.01;        // R_hh
  std::uint64_t min_report_packets = 16;
  std::uint64_t hash_seed = 0;          // stage i hashes with derive_seed(hash_seed, i)
  std::uint64_t rng_seed = 0;           // randomized admission
  ReorderDef def = ReorderDef::Decrease;
};

struct HHEntry {
  FlowId flow;
  std::uint64_t count_est = 0;
  SeqState seq;
  std::uint64_t n = 0;  // packets seen while resident, admission packet excluded
  std::uint64_t o = 0;
  bool occupied = false;
};

struct HHResult {
  bool resident = false;
  std::optional<Report> report;
};

/// d-stage heavy-hitter table with randomized admission: on a miss the
/// smallest of the d probed counters is replaced with probability 1/(min+1)
/// and the newcomer inherits min+1. Entries are addressed by prefix hash, so a
/// prefix never holds more than d entries. Each entry also tracks reordering.
class HeavyHitterTable {
 public:
  explicit HeavyHitterTable(const HHParams& params);

  HHResult process(const PacketRecord& pkt);
  std::vector<Report> flush();

  bool contains(const FlowId& flow) const;
  bool contains_prefix(Prefix p) const;

  std::size_t stage_count() const { return stages_.size(); }
  std::span<const HHEntry> stage(std::size_t i) const { return stages_[i]; }
  std::size_t bucket_index(std::size_t stage, Prefix p) const;
  std::size_t total_buckets() const;
  const AccessCounters& counters() const { return counters_; }

  /// Uniform draw used for admission; exposed so tests can replay the tape.
  static double admission_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

 private:
  bool qualifies(const HHEntry& e) const;

  HHParams params_;
  std::vector<std::vector<HHEntry>> stages_;
  std::vector<std::uint64_t> stage_seeds_;
  std::mt19937_64 rng_;
  AccessCounters counters_;
};

}  // namespace reordermon
