#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace reordermon {

/// TCP connection identity (IPv4 4-tuple). Addresses are host byte order.
struct FlowId {
  std::uint32_t src_ip = 0;
  std::uint32_t dst_ip = 0;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;

  friend auto operator<=>(const FlowId&, const FlowId&) = default;
};

/// A /24 source prefix; the low 8 bits of `bits` are always zero.
struct Prefix {
  std::uint32_t bits = 0;

  friend auto operator<=>(const Prefix&, const Prefix&) = default;
};

/// One TCP data packet. `ts` is seconds relative to trace start.
struct PacketRecord {
  FlowId flow;
  std::uint32_t seq = 0;
  std::uint32_t payload_len = 0;
  double ts = 0.0;

  friend bool operator==(const PacketRecord&, const PacketRecord&) = default;
};

enum class ReorderDef : std::uint8_t {
  Decrease = 1,  // seq below the predecessor's seq
  Gap = 2,       // seq past the predecessor's expected next seq
  BelowMax = 3,  // seq below the running maximum (oracle only)
};

/// Thrown when a sequence state cannot answer the requested predicate.
class InvalidStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Per-flow sequence memory. Sequence numbers are compared as plain unsigned
/// integers; rollover is not handled.
struct SeqState {
  std::uint32_t last_seq = 0;
  std::uint32_t expected_next = 0;
  std::optional<std::uint32_t> max_seq;

  static SeqState from_packet(const PacketRecord& pkt, bool track_max = false);

  /// Moves the state past `pkt`. The running max is only kept when present.
  void advance(const PacketRecord& pkt);

  friend bool operator==(const SeqState&, const SeqState&) = default;
};

Prefix prefix_of(const FlowId& f);

bool is_out_of_order(const SeqState& state, const PacketRecord& pkt, ReorderDef def);

std::string_view to_string(ReorderDef def);
std::optional<ReorderDef> parse_reorder_def(std::string_view text);

std::string format_ipv4(std::uint32_t addr);
std::optional<std::uint32_t> parse_ipv4(std::string_view text);

/// "a.b.c.0/24"
std::string to_string(Prefix p);
std::optional<Prefix> parse_prefix(std::string_view text);

/// "src:sport>dst:dport", comma-free so it can sit in a CSV cell.
std::string flow_key(const FlowId& f);
std::optional<FlowId> parse_flow_key(std::string_view text);

}  // namespace reordermon

template <>
struct std::hash<reordermon::FlowId> {
  std::size_t operator()(const reordermon::FlowId& f) const noexcept;
};

template <>
struct std::hash<reordermon::Prefix> {
  std::size_t operator()(const reordermon::Prefix& p) const noexcept;
};
