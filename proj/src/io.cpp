#include "maxcorr/io.hpp"

#include <fstream>
#include <sstream>

#include "maxcorr/error.hpp"

namespace maxcorr::io {
namespace {

Label label_of(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return format_number(v.get<double>());
  throw Error(ErrorKind::ParseError, "label must be a string or a number");
}

std::vector<Label> labels_of(const json& arr) {
  if (!arr.is_array()) throw Error(ErrorKind::ParseError, "labels must be an array");
  std::vector<Label> out;
  for (const auto& v : arr) out.push_back(label_of(v));
  return out;
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw Error(ErrorKind::ParseError, std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

double number(const json& v, const char* what) {
  if (!v.is_number()) throw Error(ErrorKind::ParseError, std::string(what) + " must be a number");
  return v.get<double>();
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

}  // namespace

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

FiniteJoint joint_from_json(const json& j) {
  return guarded([&] {
    auto xl = labels_of(field(j, "x_labels"));
    auto yl = labels_of(field(j, "y_labels"));
    const json& probs = field(j, "probs");
    if (!probs.is_array()) throw Error(ErrorKind::ParseError, "probs must be an array of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& row : probs) {
      if (!row.is_array()) throw Error(ErrorKind::ParseError, "probs must be an array of rows");
      std::vector<double> r;
      for (const auto& v : row) r.push_back(number(v, "probability"));
      rows.push_back(std::move(r));
    }
    return validate_joint(rows, std::move(xl), std::move(yl));
  });
}

json to_json(const FiniteJoint& joint) {
  json probs = json::array();
  for (Eigen::Index i = 0; i < joint.probs().rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < joint.probs().cols(); ++k) row.push_back(joint.probs()(i, k));
    probs.push_back(std::move(row));
  }
  return {{"x_labels", joint.x_labels()}, {"y_labels", joint.y_labels()}, {"probs", probs}};
}

json to_json(const CorrelationReport& report) {
  json notes = json::object();
  for (const auto& [k, v] : report.notes) {
    if (const auto* d = std::get_if<double>(&v)) notes[k] = *d;
    else notes[k] = std::get<std::string>(v);
  }
  return {{"value", report.value},
          {"method", std::string(to_string(report.method))},
          {"spectrum", report.spectrum},
          {"tolerance", report.tolerance},
          {"notes", notes}};
}

CorrelationReport report_from_json(const json& j) {
  return guarded([&] {
    CorrelationReport r;
    r.value = number(field(j, "value"), "value");
    r.method = parse_method(field(j, "method").get<std::string>());
    if (j.contains("spectrum")) r.spectrum = j.at("spectrum").get<std::vector<double>>();
    if (j.contains("tolerance")) r.tolerance = number(j.at("tolerance"), "tolerance");
    if (j.contains("notes")) {
      for (const auto& [k, v] : j.at("notes").items()) {
        if (v.is_number()) r.notes[k] = v.get<double>();
        else if (v.is_string()) r.notes[k] = v.get<std::string>();
        else r.notes[k] = v.dump();
      }
    }
    return r;
  });
}

stable_levy::SpectralMeasure measure_from_json(const json& j) {
  return guarded([&] {
    if (!j.is_object()) throw Error(ErrorKind::ParseError, "spectral measure must be an object");
    std::vector<stable_levy::SpectralAtom> atoms;
    std::vector<stable_levy::DensityPiece> pieces;
    if (j.contains("atoms")) {
      for (const auto& a : j.at("atoms")) {
        atoms.push_back({number(field(a, "theta"), "theta"), number(field(a, "weight"), "weight")});
      }
    }
    if (j.contains("pieces")) {
      for (const auto& p : j.at("pieces")) {
        pieces.push_back({number(field(p, "from"), "from"), number(field(p, "to"), "to"),
                          number(field(p, "level"), "level")});
      }
    }
    return stable_levy::SpectralMeasure::make(std::move(atoms), std::move(pieces));
  });
}

json to_json(const stable_levy::SpectralMeasure& tau) {
  json atoms = json::array(), pieces = json::array();
  for (const auto& a : tau.atoms()) atoms.push_back({{"theta", a.theta}, {"weight", a.weight}});
  for (const auto& p : tau.pieces()) pieces.push_back({{"from", p.from}, {"to", p.to}, {"level", p.level}});
  return {{"atoms", atoms}, {"pieces", pieces}};
}

stable_levy::LevyTriple triple_from_json(const json& j) {
  return guarded([&] {
    stable_levy::LevyTriple t;
    if (j.contains("drift")) {
      const auto d = j.at("drift").get<std::vector<double>>();
      if (d.size() != 2) throw Error(ErrorKind::ParseError, "drift must have two entries");
      t.drift = Eigen::Vector2d(d[0], d[1]);
    }
    if (j.contains("sigma")) {
      const auto s = j.at("sigma").get<std::vector<std::vector<double>>>();
      if (s.size() != 2 || s[0].size() != 2 || s[1].size() != 2) {
        throw Error(ErrorKind::ParseError, "sigma must be 2x2");
      }
      t.sigma << s[0][0], s[0][1], s[1][0], s[1][1];
    }
    if (j.contains("jumps")) {
      const json& jumps = j.at("jumps");
      const std::string kind = field(jumps, "kind").get<std::string>();
      if (kind == "none") {
        t.jumps = stable_levy::NoJumps{};
      } else if (kind == "stable") {
        t.jumps = stable_levy::StableJumps{number(field(jumps, "alpha"), "alpha"),
                                           measure_from_json(field(jumps, "tau"))};
      } else if (kind == "atoms") {
        stable_levy::AtomJumps a;
        for (const auto& at : field(jumps, "atoms")) {
          a.atoms.push_back({number(field(at, "x"), "x"), number(field(at, "y"), "y"),
                             number(field(at, "weight"), "weight")});
        }
        t.jumps = std::move(a);
      } else {
        throw Error(ErrorKind::UnsupportedMeasure, "jump measure kind '" + kind + "' is not supported");
      }
    }
    stable_levy::validate(t);
    return t;
  });
}

subsets::SubsetPairScheme scheme_from_json(const json& j) {
  return guarded([&] {
    const int n = field(j, "n").get<int>();
    if (n < 1 || n > subsets::kMaxGround) throw Error(ErrorKind::BadIndices, "n must lie in [1, 12]");
    auto mask_of = [n](const json& arr) {
      subsets::Mask m = 0;
      for (const auto& v : arr) {
        const int e = v.get<int>();
        if (e < 1 || e > n) throw Error(ErrorKind::BadIndices, "subset element outside [1, n]");
        m |= subsets::Mask{1} << (e - 1);
      }
      return m;
    };
    subsets::PairTable table;
    for (const auto& pair : field(j, "pairs")) {
      table[{mask_of(field(pair, "s")), mask_of(field(pair, "t"))}] += number(field(pair, "p"), "p");
    }
    return subsets::SubsetPairScheme::make(n, std::move(table));
  });
}

json to_json(const subsets::SubsetPairScheme& scheme) {
  auto elems = [](subsets::Mask m) {
    json arr = json::array();
    for (int i = 0; i < subsets::kMaxGround; ++i)
      if (m & (subsets::Mask{1} << i)) arr.push_back(i + 1);
    return arr;
  };
  json pairs = json::array();
  for (const auto& [st, p] : scheme.table()) {
    pairs.push_back({{"s", elems(st.first)}, {"t", elems(st.second)}, {"p", p}});
  }
  return {{"n", scheme.n()}, {"pairs", pairs}};
}

}  // namespace maxcorr::io
