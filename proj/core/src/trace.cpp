#include "reordermon/trace.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace reordermon {

TraceError::TraceError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

template <typename T>
bool parse_uint(std::string_view text, T& out) {
  auto [next, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && next == text.data() + text.size() && !text.empty();
}

// Splits exactly seven comma-separated fields; returns false on any other count.
bool split_row(std::string_view row, std::array<std::string_view, 7>& fields) {
  std::size_t field = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= row.size(); ++i) {
    if (i == row.size() || row[i] == ',') {
      if (field == fields.size()) return false;
      fields[field++] = row.substr(start, i - start);
      start = i + 1;
    }
  }
  return field == fields.size();
}

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace

Trace parse_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw TraceError(0, "empty input: missing header");
  ++line_no;
  if (trim_cr(line) != kTraceHeader) {
    throw TraceError(line_no, "unexpected header, want '" + std::string(kTraceHeader) + "'");
  }

  std::array<std::string_view, 7> f;
  double last_ts = 0.0;
  bool have_ts = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim_cr(line);
    if (row.empty()) continue;
    if (!split_row(row, f)) throw TraceError(line_no, "expected 7 comma-separated fields");

    PacketRecord pkt;
    auto [ts_end, ts_ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), pkt.ts);
    if (ts_ec != std::errc{} || ts_end != f[0].data() + f[0].size() || f[0].empty() || !(pkt.ts >= 0.0)) {
      throw TraceError(line_no, "bad timestamp '" + std::string(f[0]) + "'");
    }
    auto src = parse_ipv4(f[1]);
    auto dst = parse_ipv4(f[2]);
    if (!src) throw TraceError(line_no, "bad src_ip '" + std::string(f[1]) + "'");
    if (!dst) throw TraceError(line_no, "bad dst_ip '" + std::string(f[2]) + "'");
    pkt.flow.src_ip = *src;
    pkt.flow.dst_ip = *dst;
    if (!parse_uint(f[3], pkt.flow.src_port)) throw TraceError(line_no, "bad src_port");
    if (!parse_uint(f[4], pkt.flow.dst_port)) throw TraceError(line_no, "bad dst_port");
    if (!parse_uint(f[5], pkt.seq)) throw TraceError(line_no, "bad seq");
    if (!parse_uint(f[6], pkt.payload_len)) throw TraceError(line_no, "bad payload_len");

    if (have_ts && pkt.ts < last_ts) throw TraceError(line_no, "timestamps must be nondecreasing");
    last_ts = pkt.ts;
    have_ts = true;

    if (pkt.payload_len == 0) continue;
    trace.packets.push_back(pkt);
  }
  trace.meta = compute_meta(trace.packets);
  return trace;
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceError(0, "cannot open trace '" + path + "'");
  return parse_trace(in);
}

std::string format_double(double value) {
  std::array<char, 64> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  (void)ec;
  return std::string(buf.data(), end);
}

void write_trace(std::ostream& out, std::span<const PacketRecord> packets) {
  out << kTraceHeader << '\n';
  std::array<char, 64> num;
  for (const auto& p : packets) {
    auto [end, ec] = std::to_chars(num.data(), num.data() + num.size(), p.ts);
    (void)ec;
    out.write(num.data(), end - num.data());
    out << ',' << format_ipv4(p.flow.src_ip) << ',' << format_ipv4(p.flow.dst_ip) << ',' << p.flow.src_port
        << ',' << p.flow.dst_port << ',' << p.seq << ',' << p.payload_len << '\n';
  }
}

void write_trace_file(const std::string& path, std::span<const PacketRecord> packets) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TraceError(0, "cannot write trace '" + path + "'");
  write_trace(out, packets);
  if (!out) throw TraceError(0, "write failed for '" + path + "'");
}

TraceMeta compute_meta(std::span<const PacketRecord> packets) {
  TraceMeta meta;
  meta.packet_count = packets.size();
  if (packets.empty()) return meta;
  std::unordered_set<FlowId> flows;
  std::unordered_set<Prefix> prefixes;
  for (const auto& p : packets) {
    flows.insert(p.flow);
    prefixes.insert(prefix_of(p.flow));
  }
  meta.flow_count = flows.size();
  meta.prefix_count = prefixes.size();
  meta.duration_seconds = packets.back().ts - packets.front().ts;
  return meta;
}

std::vector<PacketRecord> filter_server_to_client(std::span<const PacketRecord> packets) {
  std::vector<PacketRecord> kept;
  kept.reserve(packets.size());
  for (const auto& p : packets) {
    if (p.flow.src_port < p.flow.dst_port) kept.push_back(p);
  }
  return kept;
}

}  // namespace reordermon
