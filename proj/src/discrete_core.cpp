#include "maxcorr/discrete_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_set>

#include "maxcorr/error.hpp"

namespace maxcorr {
namespace {

void check_unique(const std::vector<Label>& labels, const char* axis) {
  std::unordered_set<Label> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw Error(ErrorKind::DuplicateLabel, std::string(axis) + " label '" + l + "' repeated");
    }
  }
}

// Saturating power used for state-space size checks.
std::size_t checked_pow(std::size_t base, int exponent, std::size_t cap) {
  std::size_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && result > cap / base) return cap + 1;
    result *= base;
  }
  return result;
}

struct NumericAxis {
  std::vector<double> values;
};

NumericAxis numeric_axis(const std::vector<Label>& labels, const char* axis) {
  NumericAxis out;
  out.values.reserve(labels.size());
  for (const auto& l : labels) {
    auto v = parse_number(l);
    if (!v) {
      throw Error(ErrorKind::ParseError,
                  std::string(axis) + " label '" + l + "' is not numeric");
    }
    out.values.push_back(*v);
  }
  return out;
}

}  // namespace

FiniteJoint FiniteJoint::transposed() const {
  return FiniteJoint(y_labels_, x_labels_, probs_.transpose());
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::SvdExact: return "svd-exact";
    case Method::ClosedForm: return "closed-form";
    case Method::SpectralNorm: return "spectral-norm";
    case Method::Truncation: return "truncation";
    case Method::BinnedEmpirical: return "binned-empirical";
  }
  return "unknown";
}

Method parse_method(std::string_view tag) {
  for (Method m : {Method::SvdExact, Method::ClosedForm, Method::SpectralNorm,
                   Method::Truncation, Method::BinnedEmpirical}) {
    if (to_string(m) == tag) return m;
  }
  throw Error(ErrorKind::ParseError, "unknown method tag '" + std::string(tag) + "'");
}

CorrelationReport closed_form_report(double value) {
  CorrelationReport r;
  r.value = value;
  r.method = Method::ClosedForm;
  r.tolerance = 0.0;
  return r;
}

FiniteJoint validate_joint(const Eigen::MatrixXd& raw, std::vector<Label> x_labels,
                           std::vector<Label> y_labels) {
  if (static_cast<std::size_t>(raw.rows()) != x_labels.size() ||
      static_cast<std::size_t>(raw.cols()) != y_labels.size()) {
    throw Error(ErrorKind::ParseError, "table is " + std::to_string(raw.rows()) + "x" +
                                           std::to_string(raw.cols()) + " but labels are " +
                                           std::to_string(x_labels.size()) + "x" +
                                           std::to_string(y_labels.size()));
  }
  check_unique(x_labels, "x");
  check_unique(y_labels, "y");

  Eigen::MatrixXd p = raw;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      const double v = p(i, j);
      if (!std::isfinite(v)) throw Error(ErrorKind::ParseError, "non-finite entry");
      if (v < tol::kNegativeEntry) {
        throw Error(ErrorKind::NegativeMass, "entry (" + std::to_string(i) + "," +
                                                 std::to_string(j) + ") = " + std::to_string(v));
      }
      if (v < 0.0) p(i, j) = 0.0;
    }
  }
  const double total = p.sum();
  if (std::abs(total - 1.0) > tol::kMassNormalize) {
    throw Error(ErrorKind::MassNotOne, "total mass " + std::to_string(total));
  }
  p /= total;

  std::vector<Eigen::Index> rows, cols;
  const Eigen::VectorXd rs = p.rowwise().sum();
  const Eigen::VectorXd cs = p.colwise().sum().transpose();
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    if (rs(i) > 0.0) rows.push_back(i);
  for (Eigen::Index j = 0; j < p.cols(); ++j)
    if (cs(j) > 0.0) cols.push_back(j);
  if (rows.empty() || cols.empty()) throw Error(ErrorKind::EmptySupport, "no mass left");

  Eigen::MatrixXd pruned(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(cols.size()));
  std::vector<Label> xs, ys;
  xs.reserve(rows.size());
  ys.reserve(cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    xs.push_back(std::move(x_labels[static_cast<std::size_t>(rows[a])]));
    for (std::size_t b = 0; b < cols.size(); ++b) {
      pruned(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = p(rows[a], cols[b]);
    }
  }
  for (auto c : cols) ys.push_back(std::move(y_labels[static_cast<std::size_t>(c)]));
  return FiniteJoint(std::move(xs), std::move(ys), std::move(pruned));
}

FiniteJoint validate_joint(const std::vector<std::vector<double>>& raw,
                           std::vector<Label> x_labels, std::vector<Label> y_labels) {
  const auto rows = static_cast<Eigen::Index>(raw.size());
  const auto cols = raw.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(raw[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = raw[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorKind::ParseError, "ragged table");
    }
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  return validate_joint(m, std::move(x_labels), std::move(y_labels));
}

FiniteJoint validate_joint(const Eigen::MatrixXd& raw) {
  return validate_joint(raw, index_labels(static_cast<std::size_t>(raw.rows())),
                        index_labels(static_cast<std::size_t>(raw.cols())));
}

CorrelationReport max_corr(const FiniteJoint& joint) {
  const Eigen::VectorXd px = joint.x_marginal();
  const Eigen::VectorXd py = joint.y_marginal();
  const Eigen::MatrixXd q = px.cwiseSqrt().cwiseInverse().asDiagonal() * joint.probs() *
                            py.cwiseSqrt().cwiseInverse().asDiagonal();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(q);
  const Eigen::VectorXd sv = svd.singularValues();

  CorrelationReport report;
  report.method = Method::SvdExact;
  report.spectrum.assign(sv.data(), sv.data() + sv.size());

  const double top = report.spectrum.front();
  if (std::abs(top - 1.0) > tol::kTopSingular) {
    throw Error(ErrorKind::SpectrumAnomaly, "top singular value " + std::to_string(top));
  }
  const bool degenerate = joint.x_size() < 2 || joint.y_size() < 2;
  report.value = degenerate ? 0.0 : std::clamp(report.spectrum[1], 0.0, 1.0);
  const double scale = static_cast<double>(std::max(q.rows(), q.cols()));
  report.tolerance = std::max(std::abs(top - 1.0), scale * std::numeric_limits<double>::epsilon());
  report.notes["x_states"] = static_cast<double>(joint.x_size());
  report.notes["y_states"] = static_cast<double>(joint.y_size());
  report.notes["top_singular"] = top;
  return report;
}

void JointAccumulator::add(const Label& x, const Label& y, double mass) {
  const auto i = index_of(x_index_, x_order_, x);
  const auto j = index_of(y_index_, y_order_, y);
  cells_[{i, j}] += mass;
}

std::size_t JointAccumulator::index_of(std::map<Label, std::size_t>& index,
                                       std::vector<Label>& order, const Label& label) {
  auto [it, inserted] = index.try_emplace(label, order.size());
  if (inserted) order.push_back(label);
  return it->second;
}

FiniteJoint JointAccumulator::build() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(x_order_.size()),
                                            static_cast<Eigen::Index>(y_order_.size()));
  for (const auto& [ij, mass] : cells_) {
    m(static_cast<Eigen::Index>(ij.first), static_cast<Eigen::Index>(ij.second)) += mass;
  }
  return validate_joint(m, x_order_, y_order_);
}

FiniteJoint product_joint(const FiniteJoint& first, const FiniteJoint& second,
                          std::size_t cell_cap) {
  const std::size_t rows = first.x_size() * second.x_size();
  const std::size_t cols = first.y_size() * second.y_size();
  if (rows == 0 || cols > cell_cap / rows) {
    throw Error(ErrorKind::SizeOverflow,
                std::to_string(rows) + "x" + std::to_string(cols) + " exceeds cap");
  }
  Eigen::MatrixXd p(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::vector<Label> xs, ys;
  for (const auto& a : first.x_labels())
    for (const auto& b : second.x_labels()) xs.push_back(tuple_label(std::vector{a, b}));
  for (const auto& a : first.y_labels())
    for (const auto& b : second.y_labels()) ys.push_back(tuple_label(std::vector{a, b}));

  const auto n2x = static_cast<Eigen::Index>(second.x_size());
  const auto n2y = static_cast<Eigen::Index>(second.y_size());
  for (Eigen::Index x1 = 0; x1 < first.probs().rows(); ++x1)
    for (Eigen::Index x2 = 0; x2 < n2x; ++x2)
      for (Eigen::Index y1 = 0; y1 < first.probs().cols(); ++y1)
        for (Eigen::Index y2 = 0; y2 < n2y; ++y2)
          p(x1 * n2x + x2, y1 * n2y + y2) = first.probs()(x1, y1) * second.probs()(x2, y2);
  return validate_joint(p, std::move(xs), std::move(ys));
}

MarkovTripleSpec make_markov_triple(FiniteJoint joint_xy, Eigen::MatrixXd kernel_yz,
                                    std::vector<Label> z_labels) {
  if (static_cast<std::size_t>(kernel_yz.rows()) != joint_xy.y_size()) {
    throw Error(ErrorKind::BadIndices, "kernel has " + std::to_string(kernel_yz.rows()) +
                                           " rows, joint has " +
                                           std::to_string(joint_xy.y_size()) + " Y states");
  }
  if (z_labels.empty()) z_labels = index_labels(static_cast<std::size_t>(kernel_yz.cols()));
  if (static_cast<Eigen::Index>(z_labels.size()) != kernel_yz.cols()) {
    throw Error(ErrorKind::BadIndices, "z label count does not match kernel columns");
  }
  check_unique(z_labels, "z");
  if ((kernel_yz.array() < 0.0).any()) {
    throw Error(ErrorKind::NegativeMass, "kernel has a negative entry");
  }
  for (Eigen::Index r = 0; r < kernel_yz.rows(); ++r) {
    if (std::abs(kernel_yz.row(r).sum() - 1.0) > tol::kMassExact) {
      throw Error(ErrorKind::MassNotOne, "kernel row " + std::to_string(r) + " sums to " +
                                             std::to_string(kernel_yz.row(r).sum()));
    }
  }
  return MarkovTripleSpec{std::move(joint_xy), std::move(kernel_yz), std::move(z_labels)};
}

MarkovJoints markov_triple_joint(const MarkovTripleSpec& spec) {
  const Eigen::MatrixXd xz = spec.joint_xy.probs() * spec.kernel_yz;
  const Eigen::MatrixXd yz = spec.joint_xy.y_marginal().asDiagonal() * spec.kernel_yz;
  return MarkovJoints{validate_joint(xz, spec.joint_xy.x_labels(), spec.z_labels),
                      validate_joint(yz, spec.joint_xy.y_labels(), spec.z_labels)};
}

FiniteJoint map_states(const FiniteJoint& joint, const LabelMap& f_x, const LabelMap& f_y) {
  std::vector<Label> fx, fy;
  for (const auto& l : joint.x_labels()) fx.push_back(f_x(l));
  for (const auto& l : joint.y_labels()) fy.push_back(f_y(l));
  JointAccumulator acc;
  for (std::size_t i = 0; i < fx.size(); ++i)
    for (std::size_t j = 0; j < fy.size(); ++j)
      acc.add(fx[i], fy[j],
              joint.probs()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  return acc.build();
}

FiniteJoint random_walk_path_joint(const FiniteJoint& increments, int steps,
                                   std::size_t cell_cap) {
  if (steps < 1) throw Error(ErrorKind::OutOfRange, "steps must be positive");
  const std::size_t cells = increments.x_size() * increments.y_size();
  if (checked_pow(cells, steps, cell_cap) > cell_cap) {
    throw Error(ErrorKind::SizeOverflow, "(" + std::to_string(cells) + ")^" +
                                             std::to_string(steps) + " exceeds cap");
  }
  const auto xv = numeric_axis(increments.x_labels(), "x").values;
  const auto yv = numeric_axis(increments.y_labels(), "y").values;

  struct Cell {
    double dx, dy, p;
  };
  std::vector<Cell> support;
  for (std::size_t i = 0; i < xv.size(); ++i)
    for (std::size_t j = 0; j < yv.size(); ++j) {
      const double p =
          increments.probs()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (p > 0.0) support.push_back({xv[i], yv[j], p});
    }

  JointAccumulator acc;
  std::vector<Label> sx(static_cast<std::size_t>(steps)), sy(static_cast<std::size_t>(steps));
  // Depth-first over step tuples, carrying running sums.
  auto walk = [&](auto&& self, int depth, double cx, double cy, double mass) -> void {
    if (depth == steps) {
      acc.add(tuple_label(sx), tuple_label(sy), mass);
      return;
    }
    for (const auto& c : support) {
      const double nx = cx + c.dx;
      const double ny = cy + c.dy;
      sx[static_cast<std::size_t>(depth)] = format_number(nx);
      sy[static_cast<std::size_t>(depth)] = format_number(ny);
      self(self, depth + 1, nx, ny, mass * c.p);
    }
  };
  walk(walk, 0, 0.0, 0.0, 1.0);
  return acc.build();
}

FiniteJoint sum_pair_joint(const FiniteJoint& increments, int steps, std::size_t cell_cap) {
  if (steps < 1) throw Error(ErrorKind::OutOfRange, "steps must be positive");
  const auto xv = numeric_axis(increments.x_labels(), "x").values;
  const auto yv = numeric_axis(increments.y_labels(), "y").values;

  struct Entry {
    double sx, sy, p;
  };
  using Key = std::pair<Label, Label>;
  std::map<Key, Entry> current{{{"0", "0"}, {0.0, 0.0, 1.0}}};
  for (int step = 0; step < steps; ++step) {
    std::map<Key, Entry> next;
    std::set<Label> xs, ys;
    for (const auto& [key, e] : current) {
      for (std::size_t i = 0; i < xv.size(); ++i)
        for (std::size_t j = 0; j < yv.size(); ++j) {
          const double p =
              increments.probs()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          if (p <= 0.0) continue;
          const double nx = e.sx + xv[i];
          const double ny = e.sy + yv[j];
          Key k{format_number(nx), format_number(ny)};
          xs.insert(k.first);
          ys.insert(k.second);
          auto [it, inserted] = next.try_emplace(k, Entry{nx, ny, 0.0});
          it->second.p += e.p * p;
        }
    }
    if (xs.size() > cell_cap / std::max<std::size_t>(ys.size(), 1)) {
      throw Error(ErrorKind::SizeOverflow, "sum support exceeds cap");
    }
    current = std::move(next);
  }
  // Order states numerically so tables read naturally.
  std::vector<const Entry*> entries;
  for (const auto& kv : current) entries.push_back(&kv.second);
  std::sort(entries.begin(), entries.end(), [](const Entry* a, const Entry* b) {
    return a->sx != b->sx ? a->sx < b->sx : a->sy < b->sy;
  });
  std::vector<double> xsorted, ysorted;
  for (auto* e : entries) {
    xsorted.push_back(e->sx);
    ysorted.push_back(e->sy);
  }
  std::sort(xsorted.begin(), xsorted.end());
  std::sort(ysorted.begin(), ysorted.end());
  JointAccumulator acc;
  // Seed label order.
  for (double x : xsorted) acc.add(format_number(x), format_number(ysorted.front()), 0.0);
  for (double y : ysorted) acc.add(format_number(xsorted.front()), format_number(y), 0.0);
  for (auto* e : entries) acc.add(format_number(e->sx), format_number(e->sy), e->p);
  return acc.build();
}

FiniteJoint independent_joint(const Eigen::VectorXd& px, const Eigen::VectorXd& py) {
  return validate_joint(Eigen::MatrixXd(px * py.transpose()));
}

}  // namespace maxcorr
