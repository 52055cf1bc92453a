#include "reordermon/cli/options.hpp"

#include <CLI11.hpp>

namespace reordermon::cli {

void register_options(CLI::App& app, Options& o) {
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  app.add_subcommand("generate", "Write a seeded synthetic trace and its injection sidecar");
  app.add_subcommand("analyze", "Characterize a trace: per-prefix stats, ground truth, PCC, histograms");
  app.add_subcommand("run", "Run one detector configuration over a trace");
  app.add_subcommand("sweep", "Sweep memory or one detector parameter");
  app.add_subcommand("grid-hybrid", "Grid-search the hybrid HH fraction per memory size");
  app.add_subcommand("validate-lemma", "Monte Carlo check of the per-bucket check-count guarantee");

  const char* io = "Input/output";
  app.add_option("--trace", o.trace, "Trace CSV")->group(io);
  app.add_option("--out", o.out, "Output directory")->capture_default_str()->group(io);
  app.add_flag("--server-to-client", o.server_to_client, "Keep only packets with src_port < dst_port")->group(io);

  const char* det = "Detector";
  app.add_option("--algo", o.algo, "Detector")
      ->check(CLI::IsMember({"array", "hh", "hybrid"}))
      ->capture_default_str()
      ->group(det);
  app.add_option("--def", o.def, "Out-of-order definition")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str()
      ->group(det);
  app.add_option("--buckets", o.buckets, "Total bucket budget(s) B")->check(CLI::PositiveNumber)->group(det);
  app.add_option("--hh-fraction", o.hh_fractions, "Hybrid HH share(s) x")->check(CLI::Range(0.0, 1.0))->group(det);
  app.add_option("--T", o.T, "Staleness threshold in seconds")->check(CLI::NonNegativeNumber)->capture_default_str()->group(det);
  app.add_option("--C", o.C, "Eviction packet count")->capture_default_str()->group(det);
  app.add_option("--R", o.R, "Array report threshold on o")->capture_default_str()->group(det);
  app.add_option("--r-hh", o.r_hh, "HH report threshold on o/n")->check(CLI::NonNegativeNumber)->capture_default_str()->group(det);
  app.add_option("--d", o.d, "HH stages")->check(CLI::PositiveNumber)->capture_default_str()->group(det);
  app.add_option("--min-hh-packets", o.min_hh_packets, "HH minimum n for a report")->capture_default_str()->group(det);
  app.add_flag("--filter-by-prefix", o.filter_by_prefix, "Hybrid: skip the array for any prefix resident in HH")->group(det);
  app.add_flag("--report-all", o.report_all, "Report every eviction and flush")->group(det);

  const char* cp = "Control plane and metrics";
  app.add_option("--alpha", o.alpha, "Minimum sampled packets for output")->capture_default_str()->group(cp);
  app.add_option("--beta", o.beta, "Heavy-prefix size threshold")->capture_default_str()->group(cp);
  app.add_option("--eps", o.eps, "Out-of-order fraction threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str()->group(cp);
  app.add_option("--c", o.c, "Fraction-mode multiplier")->check(CLI::NonNegativeNumber)->capture_default_str()->group(cp);
  app.add_option("--mode", o.mode, "Output rule")
      ->check(CLI::IsMember({"count", "fraction"}))
      ->capture_default_str()
      ->group(cp);

  const char* ex = "Experiment";
  app.add_option("--seeds", o.seeds, "Seeds, one run each")->capture_default_str()->group(ex);
  app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str()->group(ex);
  app.add_flag("--write-reports", o.write_reports, "run: also write each seed's report stream and output set")->group(ex);
  app.add_option("--sweep-param", o.sweep_param, "sweep: parameter to vary")
      ->check(CLI::IsMember({"buckets", "T", "C", "R", "d", "hh-fraction"}))
      ->capture_default_str()
      ->group(ex);
  app.add_option("--sweep-values", o.sweep_values, "sweep: values (default 2^5..2^15 for buckets)")->group(ex);
  app.add_option("--pcc-repetitions", o.pcc_repetitions, "analyze: correlation tests")->capture_default_str()->group(ex);
  app.add_option("--pcc-fraction", o.pcc_fraction, "analyze: flows sampled per test, as a fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str()
      ->group(ex);

  const char* gen = "Synthetic workload (generate)";
  auto& s = o.synth;
  app.add_option("--seed", s.seed, "Generator seed")->capture_default_str()->group(gen);
  app.add_option("--prefixes", s.n_prefixes, "Number of /24 prefixes")->capture_default_str()->group(gen);
  app.add_option("--flows-per-prefix", s.mean_flows_per_prefix, "Mean flows per prefix")->capture_default_str()->group(gen);
  app.add_option("--flows-per-prefix-exponent", s.flows_per_prefix_zipf_exponent, "Tail exponent of flows per prefix")
      ->capture_default_str()
      ->group(gen);
  app.add_option("--mean-flow-size", s.mean_flow_size, "Mean packets per flow")->capture_default_str()->group(gen);
  app.add_option("--flow-size-exponent", s.flow_size_zipf_exponent, "Tail exponent of flow sizes")
      ->capture_default_str()
      ->group(gen);
  app.add_option("--bad-fraction", s.bad_prefix_fraction, "Share of prefixes on a bad path")->capture_default_str()->group(gen);
  app.add_option("--bad-prob", s.bad_reorder_prob, "Per-packet displacement probability on bad paths")
      ->capture_default_str()
      ->group(gen);
  app.add_option("--good-prob", s.good_reorder_prob, "Per-packet displacement probability elsewhere")
      ->capture_default_str()
      ->group(gen);
  app.add_option("--displacement-max", s.displacement_max, "Maximum displacement in positions")->capture_default_str()->group(gen);
  app.add_option("--reorder-cluster", s.reorder_cluster, "Displaced packets per episode")->capture_default_str()->group(gen);
  app.add_option("--duration", s.duration_seconds, "Trace duration in seconds")->capture_default_str()->group(gen);

  const char* lem = "Lemma validation (validate-lemma)";
  app.add_option("--model", o.model, "Model JSON; default: built-in presets")->group(lem);
  app.add_option("--trials", o.trials, "Monte Carlo trials per model")->check(CLI::PositiveNumber)->capture_default_str()->group(lem);
}

}  // namespace reordermon::cli
