#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "reordermon/model.hpp"

namespace reordermon {

enum class ReportSource : std::uint8_t { ArrayEviction, ArrayFlush, HhEviction, HhFlush };

std::string_view to_string(ReportSource s);

/// Data plane to control plane message: (prefix, packets monitored, out-of-order count).
struct Report {
  Prefix prefix;
  std::uint64_t n = 0;
  std::uint64_t o = 0;
  ReportSource source = ReportSource::ArrayEviction;

  friend bool operator==(const Report&, const Report&) = default;
};

/// CSV `prefix,n,o,source`.
void write_reports(std::ostream& out, std::span<const Report> reports);

/// Memory-access instrumentation shared by the detectors.
struct AccessCounters {
  std::uint64_t packets = 0;
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  std::uint64_t max_reads_per_packet = 0;
  std::uint64_t max_writes_per_packet = 0;
};

/// Thrown at detector construction for parameter violations.
class DetectorConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace reordermon
