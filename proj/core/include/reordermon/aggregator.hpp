#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "reordermon/report.hpp"

namespace reordermon {

enum class OutputMode : std::uint8_t {
  CountOnly,  // output g iff sum_n >= alpha
  Fraction,   // additionally require sum_o / sum_n > c * eps
};

struct AggregatorParams {
  std::uint64_t alpha = 16;
  double eps = 0.01;
  double c = 1.0;
  OutputMode mode = OutputMode::CountOnly;
};

struct PrefixTally {
  std::uint64_t sum_n = 0;
  std::uint64_t sum_o = 0;
  std::uint64_t report_count = 0;
};

/// Control-plane tally of data-plane reports, one entry per reported prefix.
class ReportAggregator {
 public:
  void ingest(const Report& r);
  void ingest(std::span<const Report> reports) {
    for (const auto& r : reports) ingest(r);
  }

  /// Sorted output prefixes. Pure function of the tallies.
  std::vector<Prefix> finalize(const AggregatorParams& params) const;

  const std::map<Prefix, PrefixTally>& tallies() const { return tallies_; }
  std::uint64_t total_reports() const { return total_reports_; }

 private:
  std::map<Prefix, PrefixTally> tallies_;
  std::uint64_t total_reports_ = 0;
};

void validate(const AggregatorParams& params);

/// One dotted-quad /24 per line under a `prefix` header.
void write_prefix_list(std::ostream& out, std::span<const Prefix> prefixes);

}  // namespace reordermon
