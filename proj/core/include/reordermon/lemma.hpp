#pragma once

// Monte Carlo check of the sampling guarantee for one bucket under the
// idealized model: packets are i.i.d. draws from (p_f); only flows with
// p_{f|b} >= p_min get checked; a check consumes exactly C+1 packets of the
// checked flow, after which the next eligible packet starts a new check.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace reordermon {

struct LemmaModel {
  // Stream-wide probabilities of the flows hashed to the bucket. Their sum is
  // the bucket mass; the remaining mass belongs to other buckets.
  std::vector<double> flow_probs;
  std::vector<std::uint32_t> flow_prefix;  // prefix label per flow
  std::uint32_t target_prefix = 0;
  double p_min = 0.0;
  std::uint64_t C = 16;
  std::uint64_t stream_length = 0;  // |S|
  double eps = 0.5;
  double delta = 0.5;
};

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LemmaBound {
  double bucket_mass = 0.0;        // sum of p_g over prefixes in the bucket
  double p_target_given_b = 0.0;   // eligible target-prefix mass / bucket mass
  std::size_t eligible_flows = 0;  // F_b
  std::uint64_t t1 = 0;
  double threshold = 0.0;          // (1 - delta) * t1 * p_{g|b}
  std::array<double, 3> bound_terms{};
  double failure_bound = 0.0;
};

/// Throws ModelError on an invalid model.
LemmaBound derive(const LemmaModel& model);

struct LemmaResult {
  LemmaBound derived;
  bool skipped = false;  // failure bound >= 1: nothing to check
  std::size_t trials = 0;
  std::size_t successes = 0;  // trials with target checks >= threshold
  double empirical_fraction = 0.0;
  double mean_target_checks = 0.0;
  double mean_total_checks = 0.0;
  bool passed = false;  // !skipped && empirical_fraction >= 1 - failure_bound
};

struct CheckCounts {
  std::uint64_t total = 0;
  std::uint64_t target = 0;
};

/// One trial of the idealized process, simulated check by check with
/// geometric waiting times.
CheckCounts simulate_checks(const LemmaModel& model, std::uint64_t seed);

LemmaResult validate_lemma(const LemmaModel& model, std::size_t trials, std::uint64_t seed);

}  // namespace reordermon
