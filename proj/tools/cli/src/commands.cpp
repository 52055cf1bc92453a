#include "reordermon/cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "reordermon/cli/lemma_models.hpp"
#include "reordermon/cli/writers.hpp"
#include "reordermon/experiment.hpp"
#include "reordermon/lemma.hpp"
#include "reordermon/synth.hpp"
#include "reordermon/trace.hpp"

namespace reordermon::cli {

namespace {

namespace fs = std::filesystem;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw DataError("cannot create output directory " + dir);
}

std::string path_in(const Options& o, const std::string& name) { return (fs::path(o.out) / name).string(); }

std::ofstream open_in(const Options& o, const std::string& name) {
  try {
    return open_output(path_in(o, name));
  } catch (const std::runtime_error& e) {
    throw DataError(e.what());
  }
}

std::vector<PacketRecord> load_trace(const Options& o) {
  if (o.trace.empty()) throw UsageError("--trace is required");
  Trace trace;
  try {
    trace = read_trace_file(o.trace);
  } catch (const TraceError& e) {
    throw DataError(o.trace + ": " + e.what());
  }
  if (o.server_to_client) return filter_server_to_client(trace.packets);
  return std::move(trace.packets);
}

ReorderDef def_of(const Options& o) { return o.def == 2 ? ReorderDef::Gap : ReorderDef::Decrease; }

ExperimentSpec spec_of(const Options& o) {
  ExperimentSpec spec;
  auto algo = parse_algorithm(o.algo);
  if (!algo) throw UsageError("unknown algorithm " + o.algo);
  auto& d = spec.detector;
  d.algo = *algo;
  d.def = def_of(o);
  d.staleness_seconds = o.T;
  d.count_threshold = o.C;
  d.report_threshold = o.R;
  d.report_all = o.report_all;
  d.hh_stages = o.d;
  d.hh_report_fraction = o.r_hh;
  d.hh_min_report_packets = o.min_hh_packets;
  d.hybrid_filter_by_prefix = o.filter_by_prefix;
  if (!o.buckets.empty()) spec.buckets = o.buckets;
  if (!o.hh_fractions.empty()) spec.hh_fractions = o.hh_fractions;
  spec.seeds = o.seeds;
  spec.eps = o.eps;
  spec.alpha = o.alpha;
  spec.beta = o.beta;
  spec.c = o.c;
  spec.mode = o.mode == "fraction" ? OutputMode::Fraction : OutputMode::CountOnly;
  spec.jobs = o.jobs;
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

std::uint64_t as_count(double v, const char* what) {
  if (!(v >= 0.0) || v != std::floor(v)) throw UsageError(std::string(what) + " values must be whole numbers");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

void cmd_generate(const Options& o) {
  try {
    validate(o.synth);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  ensure_dir(o.out);
  auto synth = generate_synthetic(o.synth);
  {
    auto out = open_in(o, "trace.csv");
    write_trace(out, synth.packets);
  }
  {
    auto out = open_in(o, "injections.csv");
    write_sidecar(out, synth.sidecar);
  }
  {
    auto out = open_in(o, "bad_prefixes.csv");
    write_prefix_list(out, synth.bad_prefixes);
  }
  std::cout << "wrote " << synth.packets.size() << " packets, " << synth.sidecar.size() << " flows to " << o.out
            << '\n';
}

void cmd_analyze(const Options& o) {
  AnalysisParams p;
  p.def = def_of(o);
  p.eps = o.eps;
  p.alpha = o.alpha;
  p.beta = o.beta;
  p.pcc_repetitions = o.pcc_repetitions;
  p.pcc_sample_fraction = o.pcc_fraction;
  p.seed = o.seeds.empty() ? 1 : o.seeds.front();
  auto packets = load_trace(o);
  if (packets.empty()) throw DataError("nothing to characterize: the trace is empty");
  ensure_dir(o.out);
  auto bundle = analyze(packets, p);
  write_analysis(o.out, bundle, p.def);
  std::cout << "analyzed " << packets.size() << " packets; " << bundle.truth.heavy_set.size()
            << " heavy out-of-order prefixes\n";
}

void cmd_run(const Options& o) {
  auto spec = spec_of(o);
  if (spec.buckets.size() != 1) throw UsageError("run takes a single --buckets value; use sweep for several");
  if (spec.detector.algo == Algorithm::Hybrid && spec.hh_fractions.size() != 1) {
    throw UsageError("run takes a single --hh-fraction value; use grid-hybrid for several");
  }
  auto packets = load_trace(o);
  ensure_dir(o.out);
  auto stats = compute_stats(packets);
  auto rows = run_experiment(packets, stats, spec);
  {
    auto out = open_in(o, "results.csv");
    write_results_csv(out, rows);
  }
  if (o.write_reports) {
    const AggregatorParams agg{spec.alpha, spec.eps, spec.c, spec.mode};
    for (auto seed : spec.seeds) {
      auto run = run_detector(packets, spec.detector, spec.buckets.front(), spec.hh_fractions.front(), seed, agg);
      auto reports = open_in(o, "reports_seed" + std::to_string(seed) + ".csv");
      write_reports(reports, run.reports);
      auto output = open_in(o, "output_seed" + std::to_string(seed) + ".csv");
      write_prefix_list(output, run.output);
    }
  }
  std::cout << "wrote " << rows.size() << " result rows to " << path_in(o, "results.csv") << '\n';
}

void cmd_sweep(const Options& o) {
  auto base = spec_of(o);
  std::vector<double> values = o.sweep_values;
  if (values.empty()) {
    if (o.sweep_param != "buckets") throw UsageError("--sweep-values is required for --sweep-param " + o.sweep_param);
    for (int e = 5; e <= 15; ++e) values.push_back(std::ldexp(1.0, e));
  }
  auto packets = load_trace(o);
  ensure_dir(o.out);
  auto stats = compute_stats(packets);

  std::vector<SweepRow> rows;
  for (double v : values) {
    auto spec = base;
    auto& d = spec.detector;
    if (o.sweep_param == "buckets") {
      spec.buckets = {as_count(v, "buckets")};
      if (spec.buckets.front() == 0) throw UsageError("buckets values must be >= 1");
    } else if (o.sweep_param == "T") {
      if (!(v >= 0.0)) throw UsageError("T values must be >= 0");
      d.staleness_seconds = v;
    } else if (o.sweep_param == "C") {
      d.count_threshold = as_count(v, "C");
    } else if (o.sweep_param == "R") {
      if (d.algo == Algorithm::HeavyHitter) {
        d.hh_report_fraction = v;
      } else {
        d.report_threshold = as_count(v, "R");
      }
    } else if (o.sweep_param == "d") {
      d.hh_stages = as_count(v, "d");
      if (d.hh_stages == 0) throw UsageError("d values must be >= 1");
    } else {
      if (d.algo != Algorithm::Hybrid) throw UsageError("hh-fraction sweeps need --algo hybrid");
      spec.hh_fractions = {v};
    }
    try {
      validate(spec);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    for (auto& r : run_experiment(packets, stats, spec)) rows.push_back(SweepRow{o.sweep_param, v, r});
  }
  auto out = open_in(o, "sweep.csv");
  write_sweep_csv(out, rows);
  std::cout << "wrote " << rows.size() << " sweep rows to " << path_in(o, "sweep.csv") << '\n';
}

void cmd_grid_hybrid(const Options& o) {
  auto opts = o;
  opts.algo = "hybrid";
  if (opts.hh_fractions.empty()) opts.hh_fractions = default_hybrid_grid();
  auto spec = spec_of(opts);
  auto packets = load_trace(o);
  ensure_dir(o.out);
  auto stats = compute_stats(packets);
  auto choices = grid_search_hybrid(packets, stats, spec);
  {
    auto out = open_in(o, "grid.csv");
    write_grid_csv(out, choices);
  }
  {
    auto out = open_in(o, "grid_best.csv");
    write_grid_best_csv(out, choices);
  }
  for (const auto& c : choices) {
    std::cout << "B=" << c.buckets << " best x=" << format_double(c.best_fraction)
              << " accuracy=" << format_double(c.best_accuracy) << '\n';
  }
}

void cmd_validate_lemma(const Options& o) {
  std::vector<NamedModel> models;
  if (o.model.empty()) {
    models = lemma_presets();
  } else {
    std::ifstream in(o.model);
    if (!in) throw DataError("cannot read " + o.model);
    try {
      models = parse_lemma_models(in);
    } catch (const std::runtime_error& e) {
      throw DataError(e.what());
    }
  }
  const std::uint64_t seed = o.seeds.empty() ? 1 : o.seeds.front();
  std::vector<NamedLemmaResult> results;
  for (const auto& [name, model] : models) {
    try {
      results.push_back(NamedLemmaResult{name, model, validate_lemma(model, o.trials, seed)});
    } catch (const ModelError& e) {
      throw DataError(name + ": " + e.what());
    }
    const auto& r = results.back().result;
    if (r.skipped) {
      std::cout << name << ": skipped, failure bound " << format_double(r.derived.failure_bound)
                << " >= 1 gives no guarantee\n";
    } else {
      std::cout << name << ": " << (r.passed ? "ok" : "VIOLATED") << " empirical "
                << format_double(r.empirical_fraction) << " vs required "
                << format_double(1.0 - r.derived.failure_bound) << '\n';
    }
  }
  ensure_dir(o.out);
  auto out = open_in(o, "lemma.json");
  write_lemma_json(out, results);
}

int main_entry(int argc, const char* const* argv) {
  CLI::App app{"TCP reordering detection experiments", "reordermon"};
  Options opts;
  register_options(app, opts);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "generate") cmd_generate(opts);
    else if (cmd == "analyze") cmd_analyze(opts);
    else if (cmd == "run") cmd_run(opts);
    else if (cmd == "sweep") cmd_sweep(opts);
    else if (cmd == "grid-hybrid") cmd_grid_hybrid(opts);
    else cmd_validate_lemma(opts);
  } catch (const UsageError& e) {
    std::cerr << "reordermon " << cmd << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "reordermon " << cmd << ": " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace reordermon::cli
