#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "reordermon/lemma.hpp"

namespace reordermon::cli {

using NamedModel = std::pair<std::string, LemmaModel>;

/// Hand-built bucket configurations whose failure bound is below 0.5.
std::vector<NamedModel> lemma_presets();

/// Reads models from JSON: either one model object or an array of them.
/// Object keys: name, flows [{p, prefix}], target_prefix, p_min, C,
/// stream_length, eps, delta. Throws std::runtime_error on malformed input.
std::vector<NamedModel> parse_lemma_models(std::istream& in);

}  // namespace reordermon::cli
