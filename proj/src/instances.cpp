#include "maxcorr/instances.hpp"

#include <cmath>

namespace maxcorr::instances {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Eigen::MatrixXd random_table(Rng& rng, int rows, int cols, double zero_prob) {
  Eigen::MatrixXd t(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t(i, j) = uniform(rng, 1e-3, 1.0);
  if (zero_prob > 0.0) {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (uniform(rng) < zero_prob) t(i, j) = 0.0;
    for (int i = 0; i < rows; ++i)
      if (t.row(i).sum() == 0.0) t(i, uniform_int(rng, 0, cols - 1)) = uniform(rng, 1e-3, 1.0);
    for (int j = 0; j < cols; ++j)
      if (t.col(j).sum() == 0.0) t(uniform_int(rng, 0, rows - 1), j) = uniform(rng, 1e-3, 1.0);
  }
  return t / t.sum();
}

FiniteJoint random_joint(Rng& rng, int rows, int cols, double zero_prob) {
  return validate_joint(random_table(rng, rows, cols, zero_prob));
}

FiniteJoint bernoulli_joint(const closed_forms::Bernoulli2x2Params& p, std::vector<Label> x_labels,
                            std::vector<Label> y_labels) {
  Eigen::MatrixXd t(2, 2);
  t << p.p_ac, p.p_ad, p.p_bc, p.p_bd;
  return validate_joint(t, std::move(x_labels), std::move(y_labels));
}

double bernoulli_max_r(double pa, double pc) {
  const double pb = 1.0 - pa, pd = 1.0 - pc;
  return std::min(pa * pd, pb * pc) / std::sqrt(pa * pb * pc * pd);
}

closed_forms::Bernoulli2x2Params bernoulli_params(double pa, double pc, double r) {
  const double pb = 1.0 - pa, pd = 1.0 - pc;
  const double delta = r * std::sqrt(pa * pb * pc * pd);
  return {pa * pc + delta, pa * pd - delta, pb * pc - delta, pb * pd + delta};
}

closed_forms::Bernoulli2x2Params random_bernoulli(Rng& rng) {
  const double pa = uniform(rng, 0.2, 0.8);
  const double pc = uniform(rng, 0.2, 0.8);
  const double r = uniform(rng, 0.05, 0.95 * bernoulli_max_r(pa, pc));
  return bernoulli_params(pa, pc, r);
}

subsets::SubsetPairScheme random_scheme(Rng& rng, int n, int pairs) {
  const int limit = (1 << n) - 1;
  subsets::PairTable table;
  for (int i = 0; i < pairs; ++i) {
    const auto s = static_cast<subsets::Mask>(uniform_int(rng, 0, limit));
    const auto t = static_cast<subsets::Mask>(uniform_int(rng, 0, limit));
    table[{s, t}] += uniform(rng, 0.05, 1.0);
  }
  double total = 0.0;
  for (const auto& [k, p] : table) total += p;
  for (auto& [k, p] : table) p /= total;
  return subsets::SubsetPairScheme::make(n, std::move(table));
}

subsets::SubsetPairScheme random_nested_scheme(Rng& rng, int n, int pairs) {
  const int limit = (1 << n) - 1;
  subsets::PairTable table;
  for (int i = 0; i < pairs; ++i) {
    const auto t = static_cast<subsets::Mask>(uniform_int(rng, 1, limit));
    subsets::Mask s = 0;
    while (s == 0) s = t & static_cast<subsets::Mask>(uniform_int(rng, 1, limit));
    table[{s, t}] += uniform(rng, 0.05, 1.0);
  }
  double total = 0.0;
  for (const auto& [k, p] : table) total += p;
  for (auto& [k, p] : table) p /= total;
  return subsets::SubsetPairScheme::make(n, std::move(table));
}

}  // namespace maxcorr::instances
