#include "reordermon/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_set>

#include "reordermon/hash.hpp"

namespace reordermon {

void validate(const SynthConfig& cfg) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(cfg.n_prefixes >= 1 && cfg.n_prefixes <= (1u << 20), "n_prefixes must be in [1, 2^20]");
  require(cfg.mean_flows_per_prefix >= 1.0, "mean_flows_per_prefix must be >= 1");
  require(cfg.flows_per_prefix_zipf_exponent > 1.0, "flows_per_prefix_zipf_exponent must be > 1");
  require(cfg.max_flows_per_prefix >= 1, "max_flows_per_prefix must be >= 1");
  require(cfg.mean_flow_size >= 1.0, "mean_flow_size must be >= 1");
  require(cfg.flow_size_zipf_exponent > 1.0, "flow_size_zipf_exponent must be > 1");
  require(cfg.max_flow_size >= 1, "max_flow_size must be >= 1");
  require(cfg.bad_prefix_fraction >= 0.0 && cfg.bad_prefix_fraction <= 1.0, "bad_prefix_fraction must be in [0, 1]");
  require(cfg.good_reorder_prob >= 0.0, "good_reorder_prob must be >= 0");
  require(cfg.bad_reorder_prob > cfg.good_reorder_prob, "bad_reorder_prob must exceed good_reorder_prob");
  require(cfg.bad_reorder_prob <= 1.0, "bad_reorder_prob must be <= 1");
  require(cfg.displacement_max >= 1, "displacement_max must be >= 1");
  require(cfg.reorder_cluster >= 1, "reorder_cluster must be >= 1");
  require(cfg.duration_seconds > 0.0, "duration_seconds must be > 0");
  require(cfg.mean_burst_packets >= 1.0, "mean_burst_packets must be >= 1");
  require(cfg.intra_burst_gap > 0.0 && cfg.inter_burst_gap > 0.0, "burst gaps must be > 0");
}

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  double uniform() { return to_unit_interval(engine_()); }
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }
  double exponential(double mean) { return -std::log1p(-uniform()) * mean; }
  bool bernoulli(double p) { return uniform() < p; }

  // 1 + floor(Lomax(shape, scale)), scale chosen so the mean is ~`mean`.
  std::uint64_t heavy_tailed_count(double mean, double shape, std::uint64_t cap) {
    double scale = (mean - 1.0) * (shape - 1.0);
    double y = scale * (std::pow(1.0 - uniform(), -1.0 / shape) - 1.0);
    double v = 1.0 + std::floor(y);
    return v >= static_cast<double>(cap) ? cap : static_cast<std::uint64_t>(v);
  }

 private:
  std::mt19937_64 engine_;
};

constexpr std::uint32_t kPrefixBase = 16u << 24;
constexpr std::uint32_t kMss = 1448;
constexpr std::uint16_t kServerPorts[] = {80, 443, 443, 443, 993, 8080};

double quantize_ns(double t) { return std::round(t * 1e9) / 1e9; }

}  // namespace

SyntheticTrace generate_synthetic(const SynthConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  SyntheticTrace out;

  std::unordered_set<FlowId> used;

  for (std::uint32_t g = 0; g < cfg.n_prefixes; ++g) {
    const Prefix prefix{kPrefixBase + (g << 8)};
    const bool bad = rng.bernoulli(cfg.bad_prefix_fraction);
    if (bad) out.bad_prefixes.push_back(prefix);
    const double p = bad ? cfg.bad_reorder_prob : cfg.good_reorder_prob;
    const auto n_flows = rng.heavy_tailed_count(cfg.mean_flows_per_prefix, cfg.flows_per_prefix_zipf_exponent,
                                                cfg.max_flows_per_prefix);

    for (std::uint64_t k = 0; k < n_flows; ++k) {
      FlowId flow;
      do {
        flow.src_ip = prefix.bits | static_cast<std::uint32_t>(1 + rng.below(254));
        flow.src_port = kServerPorts[rng.below(std::size(kServerPorts))];
        flow.dst_ip = (192u << 24) | (168u << 16) | static_cast<std::uint32_t>(rng.below(1u << 16));
        flow.dst_port = static_cast<std::uint16_t>(32768 + rng.below(28232));
      } while (!used.insert(flow).second);

      const auto n = static_cast<std::uint32_t>(
          rng.heavy_tailed_count(cfg.mean_flow_size, cfg.flow_size_zipf_exponent, cfg.max_flow_size));

      // In-order byte stream.
      std::vector<std::uint32_t> seqs(n), lens(n);
      std::uint32_t seq = static_cast<std::uint32_t>(rng.below(1u << 31));
      for (std::uint32_t i = 0; i < n; ++i) {
        lens[i] = (i + 1 == n) ? static_cast<std::uint32_t>(1 + rng.below(kMss)) : kMss;
        seqs[i] = seq;
        seq += lens[i];
      }

      // Arrival slots: bursts separated by longer gaps.
      std::vector<double> times(n);
      double t = 0.0;
      const double burst_end_p = 1.0 / cfg.mean_burst_packets;
      for (std::uint32_t i = 0; i < n; ++i) {
        if (i > 0) t += rng.bernoulli(burst_end_p) ? rng.exponential(cfg.inter_burst_gap)
                                                   : rng.exponential(cfg.intra_burst_gap);
        times[i] = t;
      }
      const double start = rng.uniform() * std::max(0.0, cfg.duration_seconds - t);

      // Displacement: packet i moves behind packet i + k.
      std::vector<double> key(n);
      std::vector<bool> displaced(n, false);
      std::iota(key.begin(), key.end(), 0.0);
      std::uint64_t injected = 0;
      auto displace = [&](std::uint32_t i) {
        auto k = 1 + rng.below(cfg.displacement_max);
        key[i] = static_cast<double>(i) + static_cast<double>(k) + 0.5;
        displaced[i] = true;
        if (i + 1 < n) ++injected;
      };
      if (p > 0.0) {
        if (cfg.reorder_cluster == 1) {
          for (std::uint32_t i = 0; i < n; ++i) {
            if (rng.bernoulli(p)) displace(i);
          }
        } else {
          const double start_p = p / cfg.reorder_cluster;
          for (std::uint32_t i = 0; i < n; ++i) {
            if (!rng.bernoulli(start_p)) continue;
            std::uint32_t j = i;
            for (std::uint32_t c = 0; c < cfg.reorder_cluster && j < n; ++c, j += 2) displace(j);
            i = j - 1;
          }
        }
      }
      std::vector<std::uint32_t> order(n);
      std::iota(order.begin(), order.end(), 0u);
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return key[a] < key[b]; });

      for (std::uint32_t j = 0; j < n; ++j) {
        const auto src = order[j];
        double ts = start + times[j];
        if (displaced[src]) {
          // A late packet arrives somewhere inside the gap before the next slot.
          double next_gap = (j + 1 < n) ? times[j + 1] - times[j] : cfg.intra_burst_gap;
          ts += rng.uniform() * next_gap;
          if (j + 1 < n) ts = std::min(ts, start + times[j + 1]);
        }
        out.packets.push_back(PacketRecord{flow, seqs[src], lens[src], quantize_ns(ts)});
      }
      out.sidecar.push_back(FlowInjection{flow, injected});
    }
  }

  // Interleave flows by timestamp; ties broken by generation order.
  std::vector<std::uint32_t> perm(out.packets.size());
  std::iota(perm.begin(), perm.end(), 0u);
  std::sort(perm.begin(), perm.end(), [&](std::uint32_t a, std::uint32_t b) {
    const auto& pa = out.packets[a];
    const auto& pb = out.packets[b];
    if (pa.ts != pb.ts) return pa.ts < pb.ts;
    return a < b;
  });
  std::vector<PacketRecord> merged;
  merged.reserve(perm.size());
  for (auto i : perm) merged.push_back(out.packets[i]);
  out.packets = std::move(merged);
  return out;
}

void write_sidecar(std::ostream& out, const std::vector<FlowInjection>& rows) {
  out << "flow_key,injected_displacements\n";
  for (const auto& r : rows) out << flow_key(r.flow) << ',' << r.injected_displacements << '\n';
}

void write_sidecar_file(const std::string& path, const std::vector<FlowInjection>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write sidecar '" + path + "'");
  write_sidecar(out, rows);
}

}  // namespace reordermon
