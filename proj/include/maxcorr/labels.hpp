#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace maxcorr {

using Label = std::string;

// Parses a label as a real number; the whole string must be consumed.
std::optional<double> parse_number(const Label& label);

// Canonical rendering of numeric labels: integral values print without a
// fractional part (exact for |v| < 2^53), everything else with 12
// significant digits so that float partial sums collide deterministically.
Label format_number(double value);

// "(a,b,c)"
Label tuple_label(std::span<const Label> parts);

std::vector<Label> index_labels(std::size_t count);

}  // namespace maxcorr
