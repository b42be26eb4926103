#pragma once

#include <random>

#include "maxcorr/closed_forms.hpp"
#include "maxcorr/discrete_core.hpp"
#include "maxcorr/subset_schemes.hpp"

// Seeded random instances shared by the verification registry and the tests.
namespace maxcorr::instances {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive

/// Table with i.i.d. uniform(0,1] entries; each entry is zeroed with
/// probability zero_prob (at least one entry per row and column survives).
Eigen::MatrixXd random_table(Rng& rng, int rows, int cols, double zero_prob = 0.0);

FiniteJoint random_joint(Rng& rng, int rows, int cols, double zero_prob = 0.0);

/// 2x2 joint over labels (x_labels, y_labels) with the given cells, in the
/// order (ac, ad, bc, bd).
FiniteJoint bernoulli_joint(const closed_forms::Bernoulli2x2Params& p,
                            std::vector<Label> x_labels = {"0", "1"},
                            std::vector<Label> y_labels = {"0", "1"});

/// Cells with marginals P(X=a) = pa, P(Y=c) = pc and |rho| = r; requires
/// r at most the feasible maximum for those marginals.
closed_forms::Bernoulli2x2Params bernoulli_params(double pa, double pc, double r);

// Largest r for which bernoulli_params(pa, pc, r) has nonnegative cells.
double bernoulli_max_r(double pa, double pc);

/// Random marginals in [0.2, 0.8] and r uniform in [0.05, 0.95 r_max].
closed_forms::Bernoulli2x2Params random_bernoulli(Rng& rng);

/// Random explicit scheme on [n] with `pairs` support cells.
subsets::SubsetPairScheme random_scheme(Rng& rng, int n, int pairs);

/// Random scheme supported on nested pairs S subset T with S non-empty.
subsets::SubsetPairScheme random_nested_scheme(Rng& rng, int n, int pairs);

}  // namespace maxcorr::instances
