#include "reordermon/hybrid.hpp"

#include <algorithm>
#include <cmath>

namespace reordermon {

std::vector<std::size_t> split_stage_sizes(std::size_t buckets, std::size_t stages) {
  if (stages == 0) return {};
  std::vector<std::size_t> sizes(stages, buckets / stages);
  for (std::size_t i = 0; i < buckets % stages; ++i) ++sizes[i];
  return sizes;
}

HybridDetector::HybridDetector(const HybridParams& params) : filter_by_prefix_(params.filter_by_prefix) {
  if (params.total_buckets < 1) throw DetectorConfigError("hybrid needs at least one bucket");
  if (!(params.hh_fraction >= 0.0 && params.hh_fraction <= 1.0)) {
    throw DetectorConfigError("hh_fraction must lie in [0, 1]");
  }
  hh_buckets_ = static_cast<std::size_t>(
      std::floor(params.hh_fraction * static_cast<double>(params.total_buckets)));
  const std::size_t array_buckets = params.total_buckets - hh_buckets_;

  if (hh_buckets_ > 0) {
    HHParams hp = params.hh;
    hp.stage_sizes = split_stage_sizes(hh_buckets_, std::max<std::size_t>(1, hp.stages));
    hh_.emplace(hp);
  }
  if (array_buckets > 0) {
    SamplerParams sp = params.sampler;
    sp.buckets = array_buckets;
    array_.emplace(sp);
  }
}

void HybridDetector::process(const PacketRecord& pkt, std::vector<Report>& out) {
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  bool resident = false;
  if (hh_) {
    const auto before = hh_->counters();
    auto r = hh_->process(pkt);
    resident = r.resident;
    if (r.report) out.push_back(*r.report);
    reads += hh_->counters().reads - before.reads;
    writes += hh_->counters().writes - before.writes;
    if (!resident && filter_by_prefix_ && hh_->contains_prefix(prefix_of(pkt.flow))) resident = true;
  }
  if (!resident && array_) {
    const auto before = array_->counters();
    if (auto r = array_->process(pkt)) out.push_back(*r);
    reads += array_->counters().reads - before.reads;
    writes += array_->counters().writes - before.writes;
  }
  ++counters_.packets;
  counters_.reads += reads;
  counters_.writes += writes;
  counters_.max_reads_per_packet = std::max(counters_.max_reads_per_packet, reads);
  counters_.max_writes_per_packet = std::max(counters_.max_writes_per_packet, writes);
}

std::vector<Report> HybridDetector::flush() {
  std::vector<Report> out;
  if (hh_) out = hh_->flush();
  if (array_) {
    auto tail = array_->flush();
    out.insert(out.end(), tail.begin(), tail.end());
  }
  return out;
}

}  // namespace reordermon
