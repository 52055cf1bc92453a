#include "reordermon/cli/writers.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "reordermon/trace.hpp"

namespace reordermon::cli {

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

constexpr const char* kResultColumns =
    "algo,def,buckets,hh_fraction,seed,accuracy,false_positive_rate,communication_overhead,"
    "report_count,output_count,truth_beta_count,truth_alpha_count,packets,max_reads_per_packet,"
    "max_writes_per_packet";

void write_result_fields(std::ostream& out, const EvalResult& r) {
  out << to_string(r.algo) << ',' << static_cast<int>(r.def) << ',' << r.buckets << ','
      << format_double(r.hh_fraction) << ',' << r.seed << ',' << opt(r.accuracy) << ','
      << opt(r.false_positive_rate) << ',' << format_double(r.communication_overhead) << ','
      << r.report_count << ',' << r.output_count << ',' << r.truth_beta_count << ','
      << r.truth_alpha_count << ',' << r.packets << ',' << r.max_reads_per_packet << ','
      << r.max_writes_per_packet;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

}  // namespace

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void write_results_csv(std::ostream& out, std::span<const EvalResult> rows) {
  out << kResultColumns << '\n';
  for (const auto& r : rows) {
    write_result_fields(out, r);
    out << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "param,value," << kResultColumns << '\n';
  for (const auto& r : rows) {
    out << r.param << ',' << format_double(r.value) << ',';
    write_result_fields(out, r.result);
    out << '\n';
  }
}

void write_grid_csv(std::ostream& out, std::span<const GridChoice> choices) {
  out << "buckets,hh_fraction,mean_accuracy\n";
  for (const auto& c : choices) {
    for (const auto& p : c.curve) {
      out << c.buckets << ',' << format_double(p.hh_fraction) << ',' << format_double(p.mean_accuracy) << '\n';
    }
  }
}

void write_grid_best_csv(std::ostream& out, std::span<const GridChoice> choices) {
  out << "buckets,best_hh_fraction,best_accuracy\n";
  for (const auto& c : choices) {
    out << c.buckets << ',' << format_double(c.best_fraction) << ',' << format_double(c.best_accuracy) << '\n';
  }
}

void write_lemma_json(std::ostream& out, std::span<const NamedLemmaResult> results) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    const auto& d = r.result.derived;
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["flows"] = r.model.flow_probs.size();
    j["p_min"] = r.model.p_min;
    j["C"] = r.model.C;
    j["stream_length"] = r.model.stream_length;
    j["eps"] = r.model.eps;
    j["delta"] = r.model.delta;
    j["bucket_mass"] = d.bucket_mass;
    j["p_target_given_b"] = d.p_target_given_b;
    j["eligible_flows"] = d.eligible_flows;
    j["t1"] = d.t1;
    j["threshold"] = d.threshold;
    j["bound_terms"] = d.bound_terms;
    j["failure_bound"] = d.failure_bound;
    j["trials"] = r.result.trials;
    j["skipped"] = r.result.skipped;
    if (!r.result.skipped) {
      j["successes"] = r.result.successes;
      j["empirical_fraction"] = r.result.empirical_fraction;
      j["required_fraction"] = 1.0 - d.failure_bound;
      j["mean_target_checks"] = r.result.mean_target_checks;
      j["mean_total_checks"] = r.result.mean_total_checks;
      j["passed"] = r.result.passed;
    }
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << '\n';
}

void write_analysis(const std::string& dir, const AnalysisBundle& b, ReorderDef def) {
  {
    auto out = open_output(dir + "/prefix_stats.csv");
    out << "prefix,n_g,o_def1,o_def2,o_def3,flow_count\n";
    for (const auto& [prefix, s] : b.stats.prefixes) {
      out << to_string(prefix) << ',' << s.n_g << ',' << s.o_g[ReorderDef::Decrease] << ','
          << s.o_g[ReorderDef::Gap] << ',' << s.o_g[ReorderDef::BelowMax] << ',' << s.flow_count << '\n';
    }
  }
  {
    auto out = open_output(dir + "/ground_truth.csv");
    out << "set,prefix\n";
    auto emit = [&](const char* name, const std::vector<Prefix>& set) {
      for (const auto& p : set) out << name << ',' << to_string(p) << '\n';
    };
    emit("heavy", b.truth.heavy_set);
    emit("over_alpha", b.truth.over_alpha_set);
    emit("small_exempt", b.truth.small_exempt_set);
  }
  {
    nlohmann::ordered_json j;
    j["defined"] = b.pcc.has_value();
    if (b.pcc) {
      j["mean"] = b.pcc->mean;
      j["undefined_tests"] = b.pcc->undefined_tests;
      j["eligible_flows"] = b.pcc->eligible_flows;
      j["samples_per_test"] = b.pcc->samples_per_test;
      j["values"] = b.pcc->values;
    }
    write_json(dir + "/pcc.json", j);
  }
  {
    auto out = open_output(dir + "/interarrival.csv");
    out << "class,bin_log2,count\n";
    auto emit = [&](const char* name, const Log2Histogram& h) {
      if (h.zero_gaps) out << name << ",zero," << h.zero_gaps << '\n';
      for (const auto& [bin, count] : h.bins) out << name << ',' << bin << ',' << count << '\n';
    };
    emit("in_order", b.interarrival.in_order);
    emit("decrease", b.interarrival.decrease);
    emit("gap", b.interarrival.gap);
  }
  {
    auto out = open_output(dir + "/size_breakdown.csv");
    out << "prefix,n_g,o_g,size_bin,flows,reorders,reorder_fraction\n";
    for (const auto& row : b.breakdown) {
      for (std::size_t i = 0; i < b.size_bins.size(); ++i) {
        if (row.flow_counts[i] == 0) continue;
        out << to_string(row.prefix) << ',' << row.n_g << ',' << row.o_g << ',' << b.size_bins[i] << ','
            << row.flow_counts[i] << ',' << row.reorder_counts[i] << ','
            << (row.reorder_fraction ? format_double((*row.reorder_fraction)[i]) : std::string()) << '\n';
      }
    }
  }
  {
    nlohmann::ordered_json j;
    j["def"] = static_cast<int>(def);
    j["packets"] = b.stats.total_packets;
    j["flows"] = b.stats.flows.size();
    j["prefixes"] = b.stats.prefixes.size();
    j["heavy_prefixes"] = b.truth.heavy_set.size();
    j["over_alpha_prefixes"] = b.truth.over_alpha_set.size();
    j["small_exempt_prefixes"] = b.truth.small_exempt_set.size();
    std::uint64_t ooo = 0;
    for (const auto& [prefix, s] : b.stats.prefixes) ooo += s.o_g[def];
    j["out_of_order_packets"] = ooo;
    j["mean_gap_in_order"] = b.interarrival.in_order.mean();
    j["mean_gap_decrease"] = b.interarrival.decrease.mean();
    j["mean_gap_gap"] = b.interarrival.gap.mean();
    if (b.pcc) j["pcc_mean"] = b.pcc->mean;
    write_json(dir + "/summary.json", j);
  }
}

}  // namespace reordermon::cli
