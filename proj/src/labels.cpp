#include "maxcorr/labels.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace maxcorr {

std::optional<double> parse_number(const Label& label) {
  if (label.empty()) return std::nullopt;
  const char* begin = label.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end != begin + label.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

Label format_number(double value) {
  char buf[64];
  if (value == 0.0) return "0";
  if (std::abs(value) < 9.0e15 && value == std::nearbyint(value)) {
    std::snprintf(buf, sizeof buf, "%.0f", value);
  } else {
    std::snprintf(buf, sizeof buf, "%.12g", value);
  }
  return buf;
}

Label tuple_label(std::span<const Label> parts) {
  Label out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  out += ')';
  return out;
}

std::vector<Label> index_labels(std::size_t count) {
  std::vector<Label> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace maxcorr
