#include "reordermon/aggregator.hpp"

#include <ostream>
#include <stdexcept>

namespace reordermon {

void ReportAggregator::ingest(const Report& r) {
  auto& t = tallies_[r.prefix];
  t.sum_n += r.n;
  t.sum_o += r.o;
  ++t.report_count;
  ++total_reports_;
}

void validate(const AggregatorParams& params) {
  if (params.alpha < 1) throw std::invalid_argument("alpha must be >= 1");
  if (!(params.c > 0.0 && params.c <= 1.0)) throw std::invalid_argument("c must lie in (0, 1]");
  if (!(params.eps > 0.0 && params.eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
}

std::vector<Prefix> ReportAggregator::finalize(const AggregatorParams& params) const {
  validate(params);
  std::vector<Prefix> out;
  for (const auto& [g, t] : tallies_) {
    if (t.sum_n < params.alpha) continue;
    if (params.mode == OutputMode::Fraction &&
        !(static_cast<double>(t.sum_o) / static_cast<double>(t.sum_n) > params.c * params.eps)) {
      continue;
    }
    out.push_back(g);
  }
  return out;
}

void write_prefix_list(std::ostream& out, std::span<const Prefix> prefixes) {
  out << "prefix\n";
  for (auto p : prefixes) out << to_string(p) << '\n';
}

}  // namespace reordermon
