#include "reordermon/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "reordermon/hash.hpp"

namespace reordermon {

namespace {

constexpr ReorderDef kAllDefs[] = {ReorderDef::Decrease, ReorderDef::Gap, ReorderDef::BelowMax};

}  // namespace

const FlowStats* OracleStats::find_flow(const FlowId& f) const {
  auto it = index_.find(f);
  return it == index_.end() ? nullptr : &flows[it->second];
}

OracleStats compute_stats(std::span<const PacketRecord> packets) {
  OracleStats stats;
  std::vector<SeqState> states;
  stats.index_.reserve(packets.size() / 8 + 16);

  for (const auto& pkt : packets) {
    auto [it, inserted] = stats.index_.try_emplace(pkt.flow, stats.flows.size());
    if (inserted) {
      stats.flows.push_back(FlowStats{pkt.flow, 1, {}});
      states.push_back(SeqState::from_packet(pkt, /*track_max=*/true));
      continue;
    }
    auto& fs = stats.flows[it->second];
    auto& st = states[it->second];
    for (auto def : kAllDefs) {
      if (is_out_of_order(st, pkt, def)) ++fs.o_f[def];
    }
    ++fs.n_f;
    st.advance(pkt);
  }

  for (const auto& fs : stats.flows) {
    const Prefix g = prefix_of(fs.flow);
    auto& ps = stats.prefixes[g];
    ps.prefix = g;
    ps.n_g += fs.n_f;
    for (auto def : kAllDefs) ps.o_g[def] += fs.o_f[def];
    ++ps.flow_count;
  }
  stats.total_packets = packets.size();
  return stats;
}

GroundTruth ground_truth(const OracleStats& stats, double eps, std::uint64_t alpha, std::uint64_t beta,
                         ReorderDef def) {
  GroundTruth gt;
  for (const auto& [g, ps] : stats.prefixes) {
    const bool heavy_reorder = static_cast<double>(ps.o_g[def]) > eps * static_cast<double>(ps.n_g);
    if (ps.n_g >= beta && heavy_reorder) gt.heavy_set.push_back(g);
    if (ps.n_g > alpha && heavy_reorder) gt.over_alpha_set.push_back(g);
    if (ps.n_g <= alpha) gt.small_exempt_set.push_back(g);
  }
  return gt;
}

namespace {

std::vector<std::size_t> eligible_flows(const OracleStats& stats) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < stats.flows.size(); ++i) {
    const auto& ps = stats.prefixes.at(prefix_of(stats.flows[i].flow));
    if (ps.flow_count >= 2) eligible.push_back(i);
  }
  return eligible;
}

double correlation_test(const OracleStats& stats, std::span<const std::size_t> eligible, std::size_t n_samples,
                        ReorderDef def, std::uint64_t rng_seed) {
  if (eligible.empty()) throw UndefinedCorrelationError("no flow belongs to a prefix with two or more flows");
  std::mt19937_64 rng(mix64(rng_seed));
  std::vector<double> xs(n_samples), ys(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    auto pick = static_cast<std::size_t>(to_unit_interval(rng()) * static_cast<double>(eligible.size()));
    const auto& fs = stats.flows[eligible[pick]];
    const auto& ps = stats.prefixes.at(prefix_of(fs.flow));
    xs[i] = static_cast<double>(fs.o_f[def]) / static_cast<double>(fs.n_f);
    ys[i] = static_cast<double>(ps.o_g[def] - fs.o_f[def]) / static_cast<double>(ps.n_g - fs.n_f);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n_samples);
  my /= static_cast<double>(n_samples);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelationError("zero variance in sampled fractions");
  return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

}  // namespace

double pearson_correlation(const OracleStats& stats, std::size_t n_samples, ReorderDef def,
                           std::uint64_t rng_seed) {
  if (n_samples < 2) throw std::invalid_argument("pearson_correlation needs at least two samples");
  auto eligible = eligible_flows(stats);
  return correlation_test(stats, eligible, n_samples, def, rng_seed);
}

PccSummary pearson_correlation_repeated(const OracleStats& stats, std::size_t repetitions,
                                        double sample_fraction, ReorderDef def, std::uint64_t rng_seed) {
  PccSummary out;
  auto eligible = eligible_flows(stats);
  out.eligible_flows = eligible.size();
  out.samples_per_test = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::llround(sample_fraction * static_cast<double>(eligible.size()))));
  double sum = 0.0;
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    try {
      double r = correlation_test(stats, eligible, out.samples_per_test, def, derive_seed(rng_seed, rep));
      out.values.push_back(r);
      sum += r;
    } catch (const UndefinedCorrelationError&) {
      ++out.undefined_tests;
    }
  }
  if (out.values.empty()) throw UndefinedCorrelationError("every correlation test was undefined");
  out.mean = sum / static_cast<double>(out.values.size());
  return out;
}

void Log2Histogram::add(double gap) {
  ++count;
  sum += gap;
  if (gap <= 0.0) {
    ++zero_gaps;
    return;
  }
  ++bins[std::ilogb(gap)];
}

InterarrivalHistograms interarrival_histogram(std::span<const PacketRecord> packets, ReorderDef def) {
  struct State {
    SeqState seq;
    double last_ts;
  };
  InterarrivalHistograms out;
  std::unordered_map<FlowId, State> flows;
  for (const auto& pkt : packets) {
    auto it = flows.find(pkt.flow);
    if (it == flows.end()) {
      flows.emplace(pkt.flow, State{SeqState::from_packet(pkt, def == ReorderDef::BelowMax), pkt.ts});
      continue;
    }
    auto& st = it->second;
    const double gap = pkt.ts - st.last_ts;
    if (!is_out_of_order(st.seq, pkt, def)) out.in_order.add(gap);
    if (is_out_of_order(st.seq, pkt, ReorderDef::Decrease)) out.decrease.add(gap);
    if (is_out_of_order(st.seq, pkt, ReorderDef::Gap)) out.gap.add(gap);
    st.seq.advance(pkt);
    st.last_ts = pkt.ts;
  }
  return out;
}

std::vector<std::uint64_t> default_size_bins(int max_exp) {
  std::vector<std::uint64_t> edges;
  for (int e = 0; e <= max_exp; ++e) edges.push_back(std::uint64_t{1} << e);
  return edges;
}

std::vector<PrefixBreakdown> flow_size_reorder_breakdown(const OracleStats& stats, ReorderDef def,
                                                         std::span<const std::uint64_t> size_bins) {
  if (size_bins.empty() || size_bins.front() > 1 || !std::is_sorted(size_bins.begin(), size_bins.end())) {
    throw std::invalid_argument("size_bins must be ascending lower edges starting at or below 1");
  }
  std::map<Prefix, PrefixBreakdown> by_prefix;
  for (const auto& fs : stats.flows) {
    const Prefix g = prefix_of(fs.flow);
    auto [it, inserted] = by_prefix.try_emplace(g);
    auto& b = it->second;
    if (inserted) {
      b.prefix = g;
      b.flow_counts.assign(size_bins.size(), 0);
      b.reorder_counts.assign(size_bins.size(), 0);
    }
    auto bin = static_cast<std::size_t>(std::upper_bound(size_bins.begin(), size_bins.end(), fs.n_f) -
                                        size_bins.begin()) - 1;
    ++b.flow_counts[bin];
    b.reorder_counts[bin] += fs.o_f[def];
    b.n_g += fs.n_f;
    b.o_g += fs.o_f[def];
  }
  std::vector<PrefixBreakdown> out;
  out.reserve(by_prefix.size());
  for (auto& [g, b] : by_prefix) {
    if (b.o_g > 0) {
      std::vector<double> frac(size_bins.size());
      for (std::size_t i = 0; i < frac.size(); ++i) {
        frac[i] = static_cast<double>(b.reorder_counts[i]) / static_cast<double>(b.o_g);
      }
      b.reorder_fraction = std::move(frac);
    }
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace reordermon
