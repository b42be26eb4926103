#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "maxcorr/discrete_core.hpp"

namespace maxcorr::subsets {

// Bit i of a mask stands for element i + 1 of the ground set [n].
using Mask = std::uint32_t;
inline constexpr int kMaxGround = 12;

using SubsetLaw = std::map<Mask, double>;
using PairTable = std::map<std::pair<Mask, Mask>, double>;

// Probabilities over the values 0, 1, ..., K-1 of one coordinate.
using FiniteLaw = std::vector<double>;

/// Law of a pair (S, T) of random subsets of [n].
class SubsetPairScheme {
 public:
  /// Drops zero cells; rejects negative mass, masks >= 2^n and total mass
  /// away from 1 (normalizing within tol::kMassNormalize).
  static SubsetPairScheme make(int n, PairTable table);

  int n() const noexcept { return n_; }
  const PairTable& table() const noexcept { return table_; }

  SubsetLaw s_law() const;
  SubsetLaw t_law() const;

 private:
  int n_ = 0;
  PairTable table_;
};

/// T uniform among m-subsets of [n], then S uniform among k-subsets of T;
/// each admissible pair gets 1 / (C(n,m) C(m,k)).
SubsetPairScheme uniform_nested(int n, int m, int k);

SubsetPairScheme independent_scheme(int n, const SubsetLaw& law_s, const SubsetLaw& law_t);

Label subset_label(Mask mask);

// Joint of (S, T) over subset labels.
FiniteJoint scheme_joint(const SubsetPairScheme& scheme);

/// R(S, T), by SVD of the normalized kernel.
CorrelationReport subset_pair_mc(const SubsetPairScheme& scheme);

/// Top singular value of P(S=s,T=t) / sqrt(P(S=s) P(T=t)) restricted to
/// s and t that both contain u (0/0 read as 0). Empty restriction gives 0.
double restricted_norm(const SubsetPairScheme& scheme, Mask u);

/// r_j for element index j in [0, n): restricted_norm on the singleton {j}.
double rj(const SubsetPairScheme& scheme, int j);

/// max(R(S,T), max_j r_j): maximal correlation of the coordinate-tagged
/// subvectors (S, X_S) and (T, X_T) for independent non-degenerate X_i.
CorrelationReport subsample_mc(const SubsetPairScheme& scheme);

/// Exact joint of ((S, X_S), (T, X_T)); states are labeled
/// "{subset}:(values on subset)", so the outside symbol never enters the
/// alphabet.
FiniteJoint brute_force_subvector_joint(const SubsetPairScheme& scheme,
                                        const std::vector<FiniteLaw>& x_laws,
                                        std::size_t cell_cap = tol::kDefaultCellCap);

/// Joint of the count vectors of X_1..X_m and X_{l+1}..X_n for i.i.d.
/// X_i with the given alphabet law.
FiniteJoint empirical_measure_joint(int n, int m, int l, const FiniteLaw& alphabet_law,
                                    std::size_t cell_cap = tol::kDefaultCellCap);

/// Function on a product of finite supports. Coordinate 0 varies fastest.
struct ProductTable {
  std::vector<std::size_t> dims;
  std::vector<double> values;

  std::size_t size() const;
  std::size_t flat_index(std::span<const std::size_t> coords) const;
  std::vector<std::size_t> coords_of(std::size_t flat) const;
};

struct AnovaComponent {
  Mask coords = 0;    // the subset u
  ProductTable table; // indexed by the coordinates in u, in increasing order
};

struct AnovaDecomposition {
  std::vector<std::size_t> dims;
  std::map<Mask, AnovaComponent> components;

  // Component u as a function on the full product space.
  std::vector<double> expand(Mask u) const;
  std::vector<double> reconstruct() const;
};

/// All 2^n projections prod_{j in u} (I - E_j) prod_{k not in u} E_k psi,
/// with E_j averaging coordinate j under x_laws[j]. SizeOverflow for n > 10.
AnovaDecomposition anova_decompose(const ProductTable& psi, const std::vector<FiniteLaw>& x_laws);

// E_j applied to a full table.
std::vector<double> average_out(const ProductTable& psi, const FiniteLaw& law, std::size_t j);

struct FisherGap {
  double lhs = 0.0;
  double rhs = 0.0;
  double r = 0.0;
};

/// Both sides of the Fisher-information inequality for Gaussian X_i, where
/// I(sum_{i in s} X_i) = 1 / sum_{i in s} var_i. The scheme must put all
/// mass on nested pairs S subset T with S non-empty.
FisherGap fisher_gap_gaussian(const SubsetPairScheme& scheme, std::span<const double> variances,
                              const std::map<Mask, double>& lambda);

}  // namespace maxcorr::subsets
