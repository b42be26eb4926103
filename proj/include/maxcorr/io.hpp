#pragma once

#include <string>

#include "json.hpp"
#include "maxcorr/discrete_core.hpp"
#include "maxcorr/stable_levy.hpp"
#include "maxcorr/subset_schemes.hpp"

namespace maxcorr::io {

using nlohmann::json;

// Parses text; malformed input raises ParseError.
json parse_text(const std::string& text);
json read_file(const std::string& path);

/// {"x_labels":[...], "y_labels":[...], "probs":[[...],...]}; labels may be
/// strings or numbers on input and are written back as strings.
FiniteJoint joint_from_json(const json& j);
json to_json(const FiniteJoint& joint);

json to_json(const CorrelationReport& report);
CorrelationReport report_from_json(const json& j);

/// {"atoms":[{"theta":..,"weight":..}], "pieces":[{"from":..,"to":..,"level":..}]}
stable_levy::SpectralMeasure measure_from_json(const json& j);
json to_json(const stable_levy::SpectralMeasure& tau);

/// {"drift":[b1,b2], "sigma":[[..],[..]], "jumps":{"kind":"none"} |
///  {"kind":"stable","alpha":..,"tau":{...}} | {"kind":"atoms","atoms":[{"x","y","weight"}]}}
stable_levy::LevyTriple triple_from_json(const json& j);

/// {"n":3, "pairs":[{"s":[1,2], "t":[1,2,3], "p":0.1}, ...]} with 1-based elements.
subsets::SubsetPairScheme scheme_from_json(const json& j);
json to_json(const subsets::SubsetPairScheme& scheme);

}  // namespace maxcorr::io
