#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "maxcorr/labels.hpp"
#include "maxcorr/tolerances.hpp"

namespace maxcorr {

/// Joint law of (X, Y) over finite labeled state spaces.
///
/// Instances are only produced by validate_joint (or by operations that call
/// it), so every FiniteJoint has nonnegative entries summing to 1, strictly
/// positive row and column sums, and unique labels on each axis.
class FiniteJoint {
 public:
  const std::vector<Label>& x_labels() const noexcept { return x_labels_; }
  const std::vector<Label>& y_labels() const noexcept { return y_labels_; }
  const Eigen::MatrixXd& probs() const noexcept { return probs_; }

  std::size_t x_size() const noexcept { return x_labels_.size(); }
  std::size_t y_size() const noexcept { return y_labels_.size(); }

  Eigen::VectorXd x_marginal() const { return probs_.rowwise().sum(); }
  Eigen::VectorXd y_marginal() const { return probs_.colwise().sum().transpose(); }

  FiniteJoint transposed() const;

 private:
  FiniteJoint(std::vector<Label> x, std::vector<Label> y, Eigen::MatrixXd p)
      : x_labels_(std::move(x)), y_labels_(std::move(y)), probs_(std::move(p)) {}

  friend FiniteJoint validate_joint(const Eigen::MatrixXd&, std::vector<Label>,
                                    std::vector<Label>);

  std::vector<Label> x_labels_;
  std::vector<Label> y_labels_;
  Eigen::MatrixXd probs_;
};

enum class Method { SvdExact, ClosedForm, SpectralNorm, Truncation, BinnedEmpirical };

std::string_view to_string(Method method);
Method parse_method(std::string_view tag);

using NoteValue = std::variant<double, std::string>;

struct CorrelationReport {
  double value = 0.0;
  Method method = Method::SvdExact;
  std::vector<double> spectrum;  // descending; empty for closed forms
  double tolerance = 0.0;
  std::map<std::string, NoteValue> notes;
};

CorrelationReport closed_form_report(double value);

/// Normalizes (when within tol::kMassNormalize of 1), prunes zero-mass rows
/// and columns, and checks label uniqueness.
FiniteJoint validate_joint(const Eigen::MatrixXd& raw, std::vector<Label> x_labels,
                           std::vector<Label> y_labels);

FiniteJoint validate_joint(const std::vector<std::vector<double>>& raw,
                           std::vector<Label> x_labels, std::vector<Label> y_labels);

// Labels default to "0", "1", ...
FiniteJoint validate_joint(const Eigen::MatrixXd& raw);

/// Maximal correlation as the second singular value of
/// diag(p_X)^{-1/2} P diag(p_Y)^{-1/2}. The top singular value is checked
/// against 1 (SpectrumAnomaly otherwise). A single-state axis gives 0.
CorrelationReport max_corr(const FiniteJoint& joint);

/// Joint of ((X1,X2),(Y1,Y2)) for independent pairs; labels are "(x1,x2)".
FiniteJoint product_joint(const FiniteJoint& first, const FiniteJoint& second,
                          std::size_t cell_cap = tol::kDefaultCellCap);

struct MarkovTripleSpec {
  FiniteJoint joint_xy;
  Eigen::MatrixXd kernel_yz;  // |Y| x |Z|, row-stochastic
  std::vector<Label> z_labels;
};

// Checks the kernel shape and row sums; z labels default to indices.
MarkovTripleSpec make_markov_triple(FiniteJoint joint_xy, Eigen::MatrixXd kernel_yz,
                                    std::vector<Label> z_labels = {});

struct MarkovJoints {
  FiniteJoint xz;
  FiniteJoint yz;
};

MarkovJoints markov_triple_joint(const MarkovTripleSpec& spec);

using LabelMap = std::function<Label(const Label&)>;

FiniteJoint map_states(const FiniteJoint& joint, const LabelMap& f_x, const LabelMap& f_y);

/// Joint law of the partial-sum paths ((S_1..S_m), (T_1..T_m)) of the walk
/// whose i.i.d. increments have law `increments` (numeric labels required).
FiniteJoint random_walk_path_joint(const FiniteJoint& increments, int steps,
                                   std::size_t cell_cap = tol::kDefaultCellCap);

/// Joint law of the terminal sums (S_m, T_m).
FiniteJoint sum_pair_joint(const FiniteJoint& increments, int steps,
                           std::size_t cell_cap = tol::kDefaultCellCap);

/// Accumulates (x, y, mass) triples keyed by label, keeping first-seen label
/// order, then builds a validated joint. Repeated label pairs add up.
class JointAccumulator {
 public:
  void add(const Label& x, const Label& y, double mass);
  std::size_t x_count() const noexcept { return x_order_.size(); }
  std::size_t y_count() const noexcept { return y_order_.size(); }
  FiniteJoint build() const;

 private:
  std::size_t index_of(std::map<Label, std::size_t>& index, std::vector<Label>& order,
                       const Label& label);

  std::map<Label, std::size_t> x_index_;
  std::map<Label, std::size_t> y_index_;
  std::vector<Label> x_order_;
  std::vector<Label> y_order_;
  std::map<std::pair<std::size_t, std::size_t>, double> cells_;
};

/// Product law p_X (x) p_Y; convenience for callers building reference joints.
FiniteJoint independent_joint(const Eigen::VectorXd& px, const Eigen::VectorXd& py);

}  // namespace maxcorr
