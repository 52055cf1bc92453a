#include "reordermon/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "reordermon/flow_sampler.hpp"
#include "reordermon/hash.hpp"
#include "reordermon/heavy_hitter.hpp"
#include "reordermon/hybrid.hpp"
#include "reordermon/metrics.hpp"

namespace reordermon {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Array: return "array";
    case Algorithm::HeavyHitter: return "hh";
    case Algorithm::Hybrid: return "hybrid";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
  if (text == "array") return Algorithm::Array;
  if (text == "hh") return Algorithm::HeavyHitter;
  if (text == "hybrid") return Algorithm::Hybrid;
  return std::nullopt;
}

void validate(const ExperimentSpec& spec) {
  if (spec.buckets.empty()) throw std::invalid_argument("at least one bucket count is required");
  if (spec.seeds.empty()) throw std::invalid_argument("at least one seed is required");
  for (auto b : spec.buckets) {
    if (b == 0) throw std::invalid_argument("bucket counts must be >= 1");
  }
  if (spec.detector.algo == Algorithm::Hybrid) {
    if (spec.hh_fractions.empty()) throw std::invalid_argument("hybrid needs at least one hh_fraction");
    for (auto x : spec.hh_fractions) {
      if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("hh_fraction must lie in [0, 1]");
    }
  }
  if (spec.detector.def == ReorderDef::BelowMax) {
    throw std::invalid_argument("detectors support only definitions 1 and 2");
  }
  const auto& d = spec.detector;
  if (!(d.staleness_seconds > 0.0)) throw std::invalid_argument("T must be > 0");
  if (d.count_threshold < 1) throw std::invalid_argument("C must be >= 1");
  if (d.report_threshold < 1) throw std::invalid_argument("R must be >= 1");
  if (d.hh_stages < 1) throw std::invalid_argument("d must be >= 1");
  if (!(d.hh_report_fraction > 0.0 && d.hh_report_fraction < 1.0)) {
    throw std::invalid_argument("R_hh must lie in (0, 1)");
  }
  if (spec.alpha >= spec.beta) throw std::invalid_argument("alpha must be below beta");
  validate(AggregatorParams{spec.alpha, spec.eps, spec.c, spec.mode});
}

namespace {

SamplerParams sampler_params(const DetectorParams& p, std::size_t buckets, std::uint64_t seed) {
  SamplerParams sp;
  sp.buckets = buckets;
  sp.staleness_seconds = p.staleness_seconds;
  sp.count_threshold = p.count_threshold;
  sp.report_threshold = p.report_threshold;
  sp.def = p.def;
  sp.report_all = p.report_all;
  sp.hash_seed = derive_seed(seed, 1);
  return sp;
}

HHParams hh_params(const DetectorParams& p, std::size_t buckets, std::uint64_t seed) {
  HHParams hp;
  hp.stages = p.hh_stages;
  hp.stage_sizes = split_stage_sizes(buckets, std::max<std::size_t>(1, p.hh_stages));
  hp.report_fraction = p.hh_report_fraction;
  hp.min_report_packets = p.hh_min_report_packets;
  hp.hash_seed = derive_seed(seed, 2);
  hp.rng_seed = derive_seed(seed, 3);
  hp.def = p.def;
  return hp;
}

}  // namespace

DetectorRun run_detector(std::span<const PacketRecord> packets, const DetectorParams& params,
                         std::size_t buckets, double hh_fraction, std::uint64_t seed,
                         const AggregatorParams& aggregation) {
  DetectorRun run;
  switch (params.algo) {
    case Algorithm::Array: {
      FlowSampler sampler(sampler_params(params, buckets, seed));
      for (const auto& pkt : packets) {
        if (auto r = sampler.process(pkt)) run.reports.push_back(*r);
      }
      auto tail = sampler.flush();
      run.reports.insert(run.reports.end(), tail.begin(), tail.end());
      run.counters = sampler.counters();
      break;
    }
    case Algorithm::HeavyHitter: {
      HeavyHitterTable table(hh_params(params, buckets, seed));
      for (const auto& pkt : packets) {
        if (auto r = table.process(pkt); r.report) run.reports.push_back(*r.report);
      }
      auto tail = table.flush();
      run.reports.insert(run.reports.end(), tail.begin(), tail.end());
      run.counters = table.counters();
      break;
    }
    case Algorithm::Hybrid: {
      HybridParams hp;
      hp.total_buckets = buckets;
      hp.hh_fraction = hh_fraction;
      hp.sampler = sampler_params(params, buckets, seed);
      hp.hh = hh_params(params, buckets, seed);
      hp.filter_by_prefix = params.hybrid_filter_by_prefix;
      HybridDetector detector(hp);
      for (const auto& pkt : packets) detector.process(pkt, run.reports);
      auto tail = detector.flush();
      run.reports.insert(run.reports.end(), tail.begin(), tail.end());
      run.counters = detector.counters();
      break;
    }
  }
  ReportAggregator aggregator;
  aggregator.ingest(run.reports);
  run.output = aggregator.finalize(aggregation);
  run.tallied_reports = aggregator.total_reports();
  return run;
}

namespace {

struct Job {
  std::size_t buckets;
  double hh_fraction;
  std::uint64_t seed;
};

template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr failure;
  std::mutex failure_mu;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<EvalResult> run_experiment(std::span<const PacketRecord> packets, const OracleStats& stats,
                                       const ExperimentSpec& spec) {
  validate(spec);
  const auto truth = ground_truth(stats, spec.eps, spec.alpha, spec.beta, spec.detector.def);
  const AggregatorParams aggregation{spec.alpha, spec.eps, spec.c, spec.mode};

  std::vector<Job> jobs;
  const std::vector<double> no_split{0.0};
  const auto& fractions = spec.detector.algo == Algorithm::Hybrid ? spec.hh_fractions : no_split;
  for (auto b : spec.buckets) {
    for (auto x : fractions) {
      for (auto s : spec.seeds) jobs.push_back(Job{b, x, s});
    }
  }

  std::vector<EvalResult> rows(jobs.size());
  parallel_for(jobs.size(), spec.jobs, [&](std::size_t i) {
    const Job& job = jobs[i];
    auto run = run_detector(packets, spec.detector, job.buckets, job.hh_fraction, job.seed, aggregation);
    EvalResult r;
    r.algo = spec.detector.algo;
    r.def = spec.detector.def;
    r.buckets = job.buckets;
    r.hh_fraction = job.hh_fraction;
    r.seed = job.seed;
    if (!truth.heavy_set.empty()) r.accuracy = accuracy(run.output, truth.heavy_set);
    if (!truth.over_alpha_set.empty()) r.false_positive_rate = false_positive_rate(run.output, truth.over_alpha_set);
    r.communication_overhead = packets.empty() ? 0.0 : communication_overhead(run.reports.size(), packets.size());
    r.report_count = run.reports.size();
    r.output_count = run.output.size();
    r.truth_beta_count = truth.heavy_set.size();
    r.truth_alpha_count = truth.over_alpha_set.size();
    r.packets = packets.size();
    r.max_reads_per_packet = run.counters.max_reads_per_packet;
    r.max_writes_per_packet = run.counters.max_writes_per_packet;
    rows[i] = r;
  });
  return rows;
}

std::vector<double> default_hybrid_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
  return grid;
}

std::vector<GridChoice> grid_search_hybrid(std::span<const PacketRecord> packets, const OracleStats& stats,
                                           const ExperimentSpec& spec) {
  if (spec.detector.algo != Algorithm::Hybrid) throw std::invalid_argument("grid search requires the hybrid algorithm");
  auto rows = run_experiment(packets, stats, spec);

  std::vector<GridChoice> out;
  for (auto b : spec.buckets) {
    GridChoice choice;
    choice.buckets = b;
    for (auto x : spec.hh_fractions) {
      double sum = 0.0;
      std::size_t count = 0;
      for (const auto& r : rows) {
        if (r.buckets == b && r.hh_fraction == x && r.accuracy) {
          sum += *r.accuracy;
          ++count;
        }
      }
      choice.curve.push_back(GridPoint{x, count ? sum / static_cast<double>(count) : 0.0});
    }
    auto sorted = choice.curve;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const GridPoint& a, const GridPoint& b) { return a.hh_fraction < b.hh_fraction; });
    const GridPoint* best = nullptr;
    for (const auto& p : sorted) {
      if (best == nullptr || p.mean_accuracy > best->mean_accuracy) best = &p;
    }
    choice.best_fraction = best->hh_fraction;
    choice.best_accuracy = best->mean_accuracy;
    out.push_back(std::move(choice));
  }
  return out;
}

AnalysisBundle analyze(std::span<const PacketRecord> packets, const AnalysisParams& params) {
  if (packets.empty()) throw std::invalid_argument("nothing to characterize: the trace is empty");
  AnalysisBundle bundle;
  bundle.stats = compute_stats(packets);
  bundle.truth = ground_truth(bundle.stats, params.eps, params.alpha, params.beta, params.def);
  try {
    bundle.pcc = pearson_correlation_repeated(bundle.stats, params.pcc_repetitions, params.pcc_sample_fraction,
                                              params.def, params.seed);
  } catch (const UndefinedCorrelationError&) {
    bundle.pcc.reset();
  }
  bundle.interarrival = interarrival_histogram(packets, params.def);
  bundle.size_bins = default_size_bins();
  bundle.breakdown = flow_size_reorder_breakdown(bundle.stats, params.def, bundle.size_bins);
  return bundle;
}

}  // namespace reordermon
