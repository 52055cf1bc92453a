#pragma once

#include <cstdint>
#include <cmath>
#include <map>
#include <random>
#include <string_view>
#include <vector>

#include "reordermon/model.hpp"

namespace reordermon::testing {

inline std::uint32_t ip(std::string_view text) { return *parse_ipv4(text); }

inline FlowId flow(std::string_view src, std::uint16_t sport = 443, std::string_view dst = "192.168.0.1",
                   std::uint16_t dport = 50000) {
  return FlowId{ip(src), ip(dst), sport, dport};
}

inline PacketRecord pkt(const FlowId& f, std::uint32_t seq, double ts, std::uint32_t len = 100) {
  return PacketRecord{f, seq, len, ts};
}

struct RandomTraceConfig {
  std::size_t packets = 1000;
  std::size_t flows = 20;
  std::size_t prefixes = 5;
  double jump_back_prob = 0.1;  // chance a packet repeats or rewinds its sequence
  double mean_gap = 1e-4;
};

/// Adversarial traces for property tests: random interleavings, random
/// payload sizes, frequent sequence rewinds and exact timestamp ties.
inline std::vector<PacketRecord> random_trace(std::uint64_t seed, const RandomTraceConfig& cfg = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<FlowId> flows;
  std::vector<std::uint32_t> next_seq;
  for (std::size_t i = 0; i < cfg.flows; ++i) {
    const auto g = static_cast<std::uint32_t>(rng() % cfg.prefixes);
    flows.push_back(FlowId{0x0A000000u | (g << 8) | static_cast<std::uint32_t>(rng() % 256),
                           0xC0A80000u | static_cast<std::uint32_t>(rng() % 65536), 443,
                           static_cast<std::uint16_t>(30000 + i)});
    next_seq.push_back(static_cast<std::uint32_t>(rng()));
  }
  std::vector<PacketRecord> out;
  double ts = 0.0;
  for (std::size_t i = 0; i < cfg.packets; ++i) {
    const std::size_t f = rng() % cfg.flows;
    const auto len = static_cast<std::uint32_t>(1 + rng() % 1500);
    std::uint32_t seq = next_seq[f];
    if (unit(rng) < cfg.jump_back_prob) seq -= static_cast<std::uint32_t>(rng() % 5000);
    if (unit(rng) < 0.05) seq += static_cast<std::uint32_t>(rng() % 5000);
    next_seq[f] = seq + len;
    if (unit(rng) > 0.1) ts += -std::log1p(-unit(rng)) * cfg.mean_gap;
    out.push_back(PacketRecord{flows[f], seq, len, ts});
  }
  return out;
}

}  // namespace reordermon::testing
