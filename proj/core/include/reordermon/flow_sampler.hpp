#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "reordermon/model.hpp"
#include "reordermon/report.hpp"

namespace reordermon {

struct SamplerParams {
  std::size_t buckets = 1024;                  // B
  double staleness_seconds = 0x1p-15;          // T
  std::uint64_t count_threshold = 16;          // C
  std::uint64_t report_threshold = 1;          // R
  ReorderDef def = ReorderDef::Decrease;
  bool report_all = false;
  std::uint64_t hash_seed = 0;
};

/// One array cell. `n` excludes the admission packet.
struct BucketRecord {
  FlowId flow;
  SeqState seq;
  double last_ts = 0.0;
  std::uint64_t n = 0;
  std::uint64_t o = 0;
  bool occupied = false;
};

/// Hash-indexed array that samples flows for short windows. All flows of a
/// prefix share one bucket. A resident record is replaced lazily, only when a
/// packet of another flow lands on its bucket and the resident is stale
/// (idle > T), has had more than C packets, or has more than R out-of-order
/// packets. The last case reports the resident; with `report_all` every
/// replaced record with n >= 1 is reported.
class FlowSampler {
 public:
  explicit FlowSampler(const SamplerParams& params);

  std::optional<Report> process(const PacketRecord& pkt);

  /// End-of-interval scan: reports qualifying records and clears the array.
  std::vector<Report> flush();

  std::size_t bucket_index(Prefix p) const;
  std::span<const BucketRecord> buckets() const { return buckets_; }
  const SamplerParams& params() const { return params_; }
  const AccessCounters& counters() const { return counters_; }

 private:
  bool should_report(const BucketRecord& b) const;

  SamplerParams params_;
  std::vector<BucketRecord> buckets_;
  AccessCounters counters_;
};

}  // namespace reordermon
