#include "reordermon/metrics.hpp"

#include <algorithm>
#include <iterator>
#include <vector>

namespace reordermon {

double accuracy(std::span<const Prefix> output, std::span<const Prefix> truth_beta) {
  if (truth_beta.empty()) throw UndefinedMetricError("accuracy is undefined for an empty ground-truth set");
  std::vector<Prefix> hit;
  std::set_intersection(output.begin(), output.end(), truth_beta.begin(), truth_beta.end(),
                        std::back_inserter(hit));
  return static_cast<double>(hit.size()) / static_cast<double>(truth_beta.size());
}

double false_positive_rate(std::span<const Prefix> output, std::span<const Prefix> truth_alpha) {
  if (truth_alpha.empty()) {
    throw UndefinedMetricError("false-positive rate is undefined for an empty ground-truth set");
  }
  std::vector<Prefix> miss;
  std::set_difference(output.begin(), output.end(), truth_alpha.begin(), truth_alpha.end(),
                      std::back_inserter(miss));
  return static_cast<double>(miss.size()) / static_cast<double>(truth_alpha.size());
}

double communication_overhead(std::uint64_t report_count, std::uint64_t stream_length) {
  if (stream_length == 0) throw UndefinedMetricError("communication overhead needs a non-empty stream");
  return static_cast<double>(report_count) / static_cast<double>(stream_length);
}

}  // namespace reordermon
