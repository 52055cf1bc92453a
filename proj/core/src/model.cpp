#include "reordermon/model.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "reordermon/hash.hpp"

namespace reordermon {

SeqState SeqState::from_packet(const PacketRecord& pkt, bool track_max) {
  SeqState s;
  s.last_seq = pkt.seq;
  s.expected_next = pkt.seq + pkt.payload_len;
  if (track_max) s.max_seq = pkt.seq;
  return s;
}

void SeqState::advance(const PacketRecord& pkt) {
  last_seq = pkt.seq;
  expected_next = pkt.seq + pkt.payload_len;
  if (max_seq) max_seq = std::max(*max_seq, pkt.seq);
}

Prefix prefix_of(const FlowId& f) { return Prefix{f.src_ip & 0xffffff00u}; }

bool is_out_of_order(const SeqState& state, const PacketRecord& pkt, ReorderDef def) {
  switch (def) {
    case ReorderDef::Decrease:
      return pkt.seq < state.last_seq;
    case ReorderDef::Gap:
      return pkt.seq > state.expected_next;
    case ReorderDef::BelowMax:
      if (!state.max_seq) throw InvalidStateError("BelowMax requires a running max sequence number");
      return pkt.seq < *state.max_seq;
  }
  throw InvalidStateError("unknown reorder definition");
}

std::string_view to_string(ReorderDef def) {
  switch (def) {
    case ReorderDef::Decrease: return "def1";
    case ReorderDef::Gap: return "def2";
    case ReorderDef::BelowMax: return "def3";
  }
  return "?";
}

std::optional<ReorderDef> parse_reorder_def(std::string_view text) {
  if (text == "1" || text == "def1") return ReorderDef::Decrease;
  if (text == "2" || text == "def2") return ReorderDef::Gap;
  if (text == "3" || text == "def3") return ReorderDef::BelowMax;
  return std::nullopt;
}

std::string format_ipv4(std::uint32_t addr) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", addr >> 24, (addr >> 16) & 0xff, (addr >> 8) & 0xff,
                addr & 0xff);
  return buf;
}

std::optional<std::uint32_t> parse_ipv4(std::string_view text) {
  std::uint32_t addr = 0;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int octet = 0; octet < 4; ++octet) {
    if (octet > 0) {
      if (p == end || *p != '.') return std::nullopt;
      ++p;
    }
    unsigned value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc{} || next == p || next - p > 3 || value > 255) return std::nullopt;
    addr = (addr << 8) | value;
    p = next;
  }
  if (p != end) return std::nullopt;
  return addr;
}

std::string to_string(Prefix p) { return format_ipv4(p.bits) + "/24"; }

std::optional<Prefix> parse_prefix(std::string_view text) {
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    if (text.substr(slash) != "/24") return std::nullopt;
    text = text.substr(0, slash);
  }
  auto addr = parse_ipv4(text);
  if (!addr) return std::nullopt;
  return Prefix{*addr & 0xffffff00u};
}

std::string flow_key(const FlowId& f) {
  return format_ipv4(f.src_ip) + ":" + std::to_string(f.src_port) + ">" + format_ipv4(f.dst_ip) + ":" +
         std::to_string(f.dst_port);
}

namespace {

std::optional<std::pair<std::uint32_t, std::uint16_t>> parse_endpoint(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto ip = parse_ipv4(text.substr(0, colon));
  auto port_text = text.substr(colon + 1);
  unsigned port = 0;
  auto [next, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (!ip || ec != std::errc{} || next != port_text.data() + port_text.size() || port > 0xffff) {
    return std::nullopt;
  }
  return std::pair{*ip, static_cast<std::uint16_t>(port)};
}

}  // namespace

std::optional<FlowId> parse_flow_key(std::string_view text) {
  auto arrow = text.find('>');
  if (arrow == std::string_view::npos) return std::nullopt;
  auto src = parse_endpoint(text.substr(0, arrow));
  auto dst = parse_endpoint(text.substr(arrow + 1));
  if (!src || !dst) return std::nullopt;
  return FlowId{src->first, dst->first, src->second, dst->second};
}

}  // namespace reordermon

std::size_t std::hash<reordermon::FlowId>::operator()(const reordermon::FlowId& f) const noexcept {
  return reordermon::hash_flow(f, 0);
}

std::size_t std::hash<reordermon::Prefix>::operator()(const reordermon::Prefix& p) const noexcept {
  return reordermon::hash_prefix(p, 0);
}
