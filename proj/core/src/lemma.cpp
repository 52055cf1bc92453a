#include "reordermon/lemma.hpp"

#include <cmath>
#include <random>

#include "reordermon/hash.hpp"

namespace reordermon {

namespace {

constexpr double kMassTolerance = 1e-9;

double unit_open_closed(std::mt19937_64& rng) {
  // (0, 1]
  return static_cast<double>((rng() >> 11) + 1) * 0x1p-53;
}

// Trials up to and including the first success, support {1, 2, ...}.
std::uint64_t geometric(std::mt19937_64& rng, double p) {
  if (p >= 1.0) return 1;
  const double u = unit_open_closed(rng);
  const double k = std::ceil(std::log(u) / std::log1p(-p));
  return k < 1.0 ? 1 : static_cast<std::uint64_t>(k);
}

struct Eligible {
  std::vector<double> cond;        // p_{f|b}
  std::vector<double> cumulative;  // running sum of cond
  std::vector<bool> target;
  double mass = 0.0;  // sum of cond over eligible flows
};

Eligible eligible_flows(const LemmaModel& model, double bucket_mass) {
  Eligible e;
  for (std::size_t i = 0; i < model.flow_probs.size(); ++i) {
    const double cond = model.flow_probs[i] / bucket_mass;
    if (cond < model.p_min) continue;
    e.cond.push_back(cond);
    e.mass += cond;
    e.cumulative.push_back(e.mass);
    e.target.push_back(model.flow_prefix[i] == model.target_prefix);
  }
  return e;
}

}  // namespace

LemmaBound derive(const LemmaModel& model) {
  if (model.flow_probs.empty()) throw ModelError("the bucket needs at least one flow");
  if (model.flow_prefix.size() != model.flow_probs.size()) {
    throw ModelError("flow_prefix and flow_probs differ in length");
  }
  if (model.C == 0) throw ModelError("C must be >= 1");
  if (!(model.eps > 0.0 && model.eps < 1.0)) throw ModelError("eps must lie in (0, 1)");
  if (!(model.delta > 0.0 && model.delta < 1.0)) throw ModelError("delta must lie in (0, 1)");
  if (!(model.p_min >= 0.0 && model.p_min <= 1.0)) throw ModelError("p_min must lie in [0, 1]");

  LemmaBound d;
  for (double p : model.flow_probs) {
    if (!(p > 0.0 && p <= 1.0)) throw ModelError("flow probabilities must lie in (0, 1]");
    d.bucket_mass += p;
  }
  if (d.bucket_mass > 1.0 + kMassTolerance) throw ModelError("flow probabilities sum above 1");

  double target_mass = 0.0;
  for (std::size_t i = 0; i < model.flow_probs.size(); ++i) {
    if (model.flow_probs[i] / d.bucket_mass < model.p_min) continue;
    ++d.eligible_flows;
    if (model.flow_prefix[i] == model.target_prefix) target_mass += model.flow_probs[i];
  }
  if (d.eligible_flows == 0) throw ModelError("no flow in the bucket reaches p_min");
  d.p_target_given_b = target_mass / d.bucket_mass;

  const double S = static_cast<double>(model.stream_length);
  const double C = static_cast<double>(model.C);
  const double Fb = static_cast<double>(d.eligible_flows);
  const double eps2 = model.eps * model.eps;
  d.t1 = static_cast<std::uint64_t>(std::floor(S * d.bucket_mass / ((1.0 + model.eps / 2.0) * C * Fb)));
  const double t1 = static_cast<double>(d.t1);
  d.threshold = (1.0 - model.delta) * t1 * d.p_target_given_b;
  d.bound_terms[0] = std::exp(-model.p_min * t1 * C * Fb * eps2 / 24.0);
  d.bound_terms[1] = std::exp(-eps2 * S * d.bucket_mass / 3.0);
  d.bound_terms[2] = std::exp(-model.delta * model.delta * t1 * d.p_target_given_b / 2.0);
  d.failure_bound = d.bound_terms[0] + d.bound_terms[1] + d.bound_terms[2];
  return d;
}

CheckCounts simulate_checks(const LemmaModel& model, std::uint64_t seed) {
  const auto d = derive(model);
  const auto e = eligible_flows(model, d.bucket_mass);
  std::mt19937_64 rng(mix64(seed));

  // Substream length of the bucket.
  std::uint64_t remaining = model.stream_length;
  if (d.bucket_mass < 1.0) {
    std::binomial_distribution<std::uint64_t> split(model.stream_length, d.bucket_mass);
    remaining = split(rng);
  }

  CheckCounts counts;
  for (;;) {
    // Wait for an eligible flow to open the check; that packet is its first.
    const std::uint64_t idle = geometric(rng, e.mass);
    if (idle > remaining) break;
    remaining -= idle;
    const double pick = unit_open_closed(rng) * e.mass;
    std::size_t f = 0;
    while (f + 1 < e.cumulative.size() && e.cumulative[f] < pick) ++f;

    bool complete = true;
    for (std::uint64_t j = 0; j < model.C; ++j) {
      const std::uint64_t gap = geometric(rng, e.cond[f]);
      if (gap > remaining) {
        complete = false;
        break;
      }
      remaining -= gap;
    }
    if (!complete) break;
    ++counts.total;
    if (e.target[f]) ++counts.target;
  }
  return counts;
}

LemmaResult validate_lemma(const LemmaModel& model, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw ModelError("trials must be >= 1");
  LemmaResult result;
  result.derived = derive(model);
  result.trials = trials;
  if (result.derived.failure_bound >= 1.0) {
    result.skipped = true;
    return result;
  }
  double target_sum = 0.0;
  double total_sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto c = simulate_checks(model, derive_seed(seed, t));
    target_sum += static_cast<double>(c.target);
    total_sum += static_cast<double>(c.total);
    if (static_cast<double>(c.target) >= result.derived.threshold) ++result.successes;
  }
  const double n = static_cast<double>(trials);
  result.empirical_fraction = static_cast<double>(result.successes) / n;
  result.mean_target_checks = target_sum / n;
  result.mean_total_checks = total_sum / n;
  result.passed = result.empirical_fraction >= 1.0 - result.derived.failure_bound;
  return result;
}

}  // namespace reordermon
