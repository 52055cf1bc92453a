#include "reordermon/flow_sampler.hpp"

#include <algorithm>

#include "reordermon/hash.hpp"

namespace reordermon {

FlowSampler::FlowSampler(const SamplerParams& params) : params_(params) {
  if (params_.buckets < 1) throw DetectorConfigError("flow sampler needs at least one bucket");
  if (!(params_.staleness_seconds > 0.0)) throw DetectorConfigError("staleness threshold T must be > 0");
  if (params_.count_threshold < 1) throw DetectorConfigError("count threshold C must be >= 1");
  if (params_.report_threshold < 1) throw DetectorConfigError("report threshold R must be >= 1");
  if (params_.def == ReorderDef::BelowMax) {
    throw DetectorConfigError("the flow sampler supports only the decrease and gap definitions");
  }
  buckets_.resize(params_.buckets);
}

std::size_t FlowSampler::bucket_index(Prefix p) const {
  return static_cast<std::size_t>(hash_prefix(p, params_.hash_seed) % buckets_.size());
}

bool FlowSampler::should_report(const BucketRecord& b) const {
  if (b.o > params_.report_threshold) return true;
  return params_.report_all && b.n >= 1;
}

std::optional<Report> FlowSampler::process(const PacketRecord& pkt) {
  ++counters_.packets;
  ++counters_.reads;
  counters_.max_reads_per_packet = std::max<std::uint64_t>(counters_.max_reads_per_packet, 1);
  auto& b = buckets_[bucket_index(prefix_of(pkt.flow))];

  auto admit = [&] {
    b.flow = pkt.flow;
    b.seq = SeqState::from_packet(pkt);
    b.last_ts = pkt.ts;
    b.n = 0;
    b.o = 0;
    b.occupied = true;
    ++counters_.writes;
    counters_.max_writes_per_packet = std::max<std::uint64_t>(counters_.max_writes_per_packet, 1);
  };

  if (!b.occupied) {
    admit();
    return std::nullopt;
  }

  if (b.flow == pkt.flow) {
    if (is_out_of_order(b.seq, pkt, params_.def)) ++b.o;
    ++b.n;
    b.seq.advance(pkt);
    b.last_ts = pkt.ts;
    ++counters_.writes;
    counters_.max_writes_per_packet = std::max<std::uint64_t>(counters_.max_writes_per_packet, 1);
    return std::nullopt;
  }

  const bool stale = pkt.ts - b.last_ts > params_.staleness_seconds;
  const bool hogging = b.n > params_.count_threshold;
  const bool heavy = b.o > params_.report_threshold;
  if (!(stale || hogging || heavy)) return std::nullopt;

  std::optional<Report> report;
  if (should_report(b)) report = Report{prefix_of(b.flow), b.n, b.o, ReportSource::ArrayEviction};
  admit();
  return report;
}

std::vector<Report> FlowSampler::flush() {
  std::vector<Report> out;
  for (auto& b : buckets_) {
    if (b.occupied && should_report(b)) {
      out.push_back(Report{prefix_of(b.flow), b.n, b.o, ReportSource::ArrayFlush});
    }
    b = BucketRecord{};
  }
  return out;
}

}  // namespace reordermon
