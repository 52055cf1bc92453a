#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "reordermon/model.hpp"

namespace reordermon {

class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Set arguments are sorted, duplicate-free prefix lists.

/// |output ∩ truth| / |truth|. Throws on empty truth.
double accuracy(std::span<const Prefix> output, std::span<const Prefix> truth_beta);

/// |output \ truth| / |truth|; may exceed 1. Throws on empty truth.
double false_positive_rate(std::span<const Prefix> output, std::span<const Prefix> truth_alpha);

/// Reports per packet; reports include those emitted at flush time.
double communication_overhead(std::uint64_t report_count, std::uint64_t stream_length);

}  // namespace reordermon
