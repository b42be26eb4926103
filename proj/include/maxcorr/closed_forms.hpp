#pragma once

#include <span>

namespace maxcorr::closed_forms {

// Cells of a 2x2 table with rows {a, b} and columns {c, d}.
struct Bernoulli2x2Params {
  double p_ac = 0.25;
  double p_ad = 0.25;
  double p_bc = 0.25;
  double p_bd = 0.25;
};

// Every evaluator rejects inputs outside its domain with OutOfRange or
// BadIndices instead of clamping. 0/0 is taken as 0 wherever it can occur.

/// Jointly Gaussian pair: R = |rho|.
double gaussian_mc(double rho);

/// |p_ac p_bd - p_ad p_bc| / sqrt(p_a p_b p_c p_d); 0 for a degenerate margin.
double bernoulli_2x2_mc(const Bernoulli2x2Params& p);

/// Overlapping partial sums of i.i.d. variables, windows [1,m] and (l,n]:
/// (m - l) / sqrt(m (n - l)), for 1 <= l + 1 <= m <= n.
double dksy_mc(int l, int m, int n);

/// sqrt(max_i P(i in T)).
double mb_bound(std::span<const double> p_in_t);

/// T uniform of size m in [n], S uniform of size k inside T:
/// sqrt(k (n - m) / (m (n - k))).
double nested_subsets_mc(int n, int m, int k);

/// Uniform nested pair U in S with |U| = a, |S| = b, tagged with the
/// coordinates they select: sqrt(a / b).
double uniform_nested_tag_mc(int a, int b);

/// R(X, X + lambda Z) for i.i.d. alpha-stable X, Z with Levy density
/// c_minus |x|^{-1-alpha} on x < 0 and c_plus |x|^{-1-alpha} on x > 0.
double bdk_mc(double alpha, double lambda, double c_minus, double c_plus);

/// Bivariate Marshall-Olkin exponential: l3 / sqrt((l1 + l3)(l2 + l3)).
double marshall_olkin_mc(double l1, double l2, double l3);

/// Upper bound for R(min of first m, min of last n - l); same value as dksy_mc.
double min_window_bound(int l, int m, int n);

/// r_j for independent S and T: sqrt(P(j in S) P(j in T)).
double independent_rj(double p_j_in_s, double p_j_in_t);

}  // namespace maxcorr::closed_forms
