#include "reordermon/heavy_hitter.hpp"

#include <algorithm>

#include "reordermon/hash.hpp"

namespace reordermon {

HeavyHitterTable::HeavyHitterTable(const HHParams& params) : params_(params), rng_(mix64(params.rng_seed)) {
  std::vector<std::size_t> sizes = params_.stage_sizes;
  if (sizes.empty()) sizes.assign(params_.stages, params_.buckets_per_stage);
  std::erase(sizes, std::size_t{0});
  if (sizes.empty()) throw DetectorConfigError("heavy-hitter table needs at least one non-empty stage");
  if (!(params_.report_fraction > 0.0 && params_.report_fraction < 1.0)) {
    throw DetectorConfigError("R_hh must lie in (0, 1)");
  }
  if (params_.def == ReorderDef::BelowMax) {
    throw DetectorConfigError("the heavy-hitter table supports only the decrease and gap definitions");
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    stages_.emplace_back(sizes[i]);
    stage_seeds_.push_back(derive_seed(params_.hash_seed, i));
  }
}

std::size_t HeavyHitterTable::bucket_index(std::size_t stage, Prefix p) const {
  return static_cast<std::size_t>(hash_prefix(p, stage_seeds_[stage]) % stages_[stage].size());
}

std::size_t HeavyHitterTable::total_buckets() const {
  std::size_t total = 0;
  for (const auto& s : stages_) total += s.size();
  return total;
}

bool HeavyHitterTable::qualifies(const HHEntry& e) const {
  return e.occupied && e.n >= params_.min_report_packets &&
         static_cast<double>(e.o) > params_.report_fraction * static_cast<double>(e.n);
}

HHResult HeavyHitterTable::process(const PacketRecord& pkt) {
  ++counters_.packets;
  const Prefix g = prefix_of(pkt.flow);
  std::uint64_t reads = 0;
  HHEntry* victim = nullptr;

  for (std::size_t i = 0; i < stages_.size(); ++i) {
    HHEntry& e = stages_[i][bucket_index(i, g)];
    ++reads;
    if (e.occupied && e.flow == pkt.flow) {
      if (is_out_of_order(e.seq, pkt, params_.def)) ++e.o;
      ++e.n;
      ++e.count_est;
      e.seq.advance(pkt);
      counters_.reads += reads;
      ++counters_.writes;
      counters_.max_reads_per_packet = std::max(counters_.max_reads_per_packet, reads);
      counters_.max_writes_per_packet = std::max<std::uint64_t>(counters_.max_writes_per_packet, 1);
      return HHResult{true, std::nullopt};
    }
    // First minimal entry in stage order; empty entries count as zero.
    const std::uint64_t c = e.occupied ? e.count_est : 0;
    if (victim == nullptr || c < (victim->occupied ? victim->count_est : 0)) victim = &e;
  }
  counters_.reads += reads;
  counters_.max_reads_per_packet = std::max(counters_.max_reads_per_packet, reads);

  const std::uint64_t min_count = victim->occupied ? victim->count_est : 0;
  if (min_count > 0 && admission_draw(rng_) >= 1.0 / static_cast<double>(min_count + 1)) {
    return HHResult{false, std::nullopt};
  }

  HHResult result{true, std::nullopt};
  if (qualifies(*victim)) {
    result.report = Report{prefix_of(victim->flow), victim->n, victim->o, ReportSource::HhEviction};
  }
  *victim = HHEntry{pkt.flow, min_count + 1, SeqState::from_packet(pkt), 0, 0, true};
  ++counters_.writes;
  counters_.max_writes_per_packet = std::max<std::uint64_t>(counters_.max_writes_per_packet, 1);
  return result;
}

std::vector<Report> HeavyHitterTable::flush() {
  std::vector<Report> out;
  for (auto& stage : stages_) {
    for (auto& e : stage) {
      if (qualifies(e)) out.push_back(Report{prefix_of(e.flow), e.n, e.o, ReportSource::HhFlush});
      e = HHEntry{};
    }
  }
  return out;
}

bool HeavyHitterTable::contains(const FlowId& flow) const {
  const Prefix g = prefix_of(flow);
  for (std::size_t i = 0; i < stages_.size(); ++i) {
    const HHEntry& e = stages_[i][bucket_index(i, g)];
    if (e.occupied && e.flow == flow) return true;
  }
  return false;
}

bool HeavyHitterTable::contains_prefix(Prefix p) const {
  for (std::size_t i = 0; i < stages_.size(); ++i) {
    const HHEntry& e = stages_[i][bucket_index(i, p)];
    if (e.occupied && prefix_of(e.flow) == p) return true;
  }
  return false;
}

}  // namespace reordermon
