#include "reordermon/cli/lemma_models.hpp"

#include <istream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace reordermon::cli {

namespace {

void add_flows(LemmaModel& m, std::size_t count, double p, std::uint32_t prefix) {
  for (std::size_t i = 0; i < count; ++i) {
    m.flow_probs.push_back(p);
    m.flow_prefix.push_back(prefix);
  }
}

}  // namespace

std::vector<NamedModel> lemma_presets() {
  std::vector<NamedModel> out;

  // Ten equal flows, one per prefix; the bucket holds 1% of the stream.
  LemmaModel uniform;
  for (std::uint32_t g = 0; g < 10; ++g) add_flows(uniform, 1, 0.001, g);
  uniform.target_prefix = 0;
  uniform.p_min = 0.05;
  uniform.stream_length = 5'000'000;
  uniform.eps = 0.5;
  uniform.delta = 0.5;
  out.emplace_back("uniform-10", uniform);

  // One heavy flow holding half the bucket, twenty light flows in pairs per
  // prefix, and ten flows too light to be checked.
  LemmaModel heavy;
  add_flows(heavy, 1, 0.01, 1);
  for (std::uint32_t i = 0; i < 20; ++i) add_flows(heavy, 1, 0.0005, 2 + i / 2);
  add_flows(heavy, 10, 0.00002, 12);
  heavy.target_prefix = 2;
  heavy.p_min = 0.02;
  heavy.stream_length = 5'000'000;
  heavy.eps = 0.5;
  heavy.delta = 0.5;
  out.emplace_back("heavy-plus-light", heavy);

  // Five prefixes of six flows with graded rates.
  LemmaModel graded;
  for (std::uint32_t g = 0; g < 5; ++g) {
    for (int k = 0; k < 6; ++k) add_flows(graded, 1, 0.0004 * (1 + k), g);
  }
  graded.target_prefix = 3;
  graded.p_min = 0.009;
  graded.stream_length = 2'000'000;
  graded.eps = 0.5;
  graded.delta = 0.4;
  out.emplace_back("graded-5x6", graded);

  // Two prefixes sharing a bucket with the whole stream, C = 8.
  LemmaModel pair;
  add_flows(pair, 3, 0.2, 0);
  add_flows(pair, 2, 0.2, 1);
  pair.target_prefix = 1;
  pair.p_min = 0.1;
  pair.C = 8;
  pair.stream_length = 20'000;
  pair.eps = 0.3;
  pair.delta = 0.3;
  out.emplace_back("whole-stream-5", pair);

  return out;
}

std::vector<NamedModel> parse_lemma_models(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model file: ") + e.what());
  }
  if (!doc.is_array()) doc = nlohmann::json::array({doc});

  std::vector<NamedModel> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& j = doc[i];
    try {
      LemmaModel m;
      for (const auto& f : j.at("flows")) {
        m.flow_probs.push_back(f.at("p").get<double>());
        m.flow_prefix.push_back(f.value("prefix", 0u));
      }
      m.target_prefix = j.value("target_prefix", 0u);
      m.p_min = j.value("p_min", 0.0);
      m.C = j.value("C", std::uint64_t{16});
      m.stream_length = j.at("stream_length").get<std::uint64_t>();
      m.eps = j.value("eps", 0.5);
      m.delta = j.value("delta", 0.5);
      out.emplace_back(j.value("name", "model-" + std::to_string(i)), std::move(m));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("model " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace reordermon::cli
