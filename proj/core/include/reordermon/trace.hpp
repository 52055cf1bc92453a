#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reordermon/model.hpp"

namespace reordermon {

inline constexpr std::string_view kTraceHeader = "ts,src_ip,dst_ip,src_port,dst_port,seq,payload_len";

struct TraceMeta {
  std::size_t packet_count = 0;
  std::size_t flow_count = 0;
  std::size_t prefix_count = 0;
  double duration_seconds = 0.0;

  friend bool operator==(const TraceMeta&, const TraceMeta&) = default;
};

struct Trace {
  std::vector<PacketRecord> packets;
  TraceMeta meta;
};

/// Malformed trace input. `line()` is 1-based, 0 when not tied to a line.
class TraceError : public std::runtime_error {
 public:
  TraceError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Reads the canonical CSV trace. Rows with a zero payload are dropped.
Trace parse_trace(std::istream& in);
Trace read_trace_file(const std::string& path);

void write_trace(std::ostream& out, std::span<const PacketRecord> packets);
void write_trace_file(const std::string& path, std::span<const PacketRecord> packets);

TraceMeta compute_meta(std::span<const PacketRecord> packets);

/// Keeps server-to-client packets, approximated as src_port < dst_port.
std::vector<PacketRecord> filter_server_to_client(std::span<const PacketRecord> packets);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace reordermon
