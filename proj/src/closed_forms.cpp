#include "maxcorr/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maxcorr/error.hpp"
#include "maxcorr/tolerances.hpp"

namespace maxcorr::closed_forms {
namespace {

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, std::string(name) + " = " + std::to_string(p));
  }
}

void require_window(int l, int m, int n) {
  if (!(l >= 0 && l + 1 <= m && m <= n)) {
    throw Error(ErrorKind::BadIndices, "need 1 <= l+1 <= m <= n, got l=" + std::to_string(l) +
                                           " m=" + std::to_string(m) + " n=" + std::to_string(n));
  }
}

}  // namespace

double gaussian_mc(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "rho = " + std::to_string(rho));
  }
  return std::abs(rho);
}

double bernoulli_2x2_mc(const Bernoulli2x2Params& p) {
  for (double v : {p.p_ac, p.p_ad, p.p_bc, p.p_bd}) require_probability(v, "cell");
  const double total = p.p_ac + p.p_ad + p.p_bc + p.p_bd;
  if (std::abs(total - 1.0) > tol::kMassExact) {
    throw Error(ErrorKind::MassNotOne, "cells sum to " + std::to_string(total));
  }
  const double pa = p.p_ac + p.p_ad;
  const double pb = p.p_bc + p.p_bd;
  const double pc = p.p_ac + p.p_bc;
  const double pd = p.p_ad + p.p_bd;
  const double denom = pa * pb * pc * pd;
  if (denom == 0.0) return 0.0;
  return std::min(1.0, std::abs(p.p_ac * p.p_bd - p.p_ad * p.p_bc) / std::sqrt(denom));
}

double dksy_mc(int l, int m, int n) {
  require_window(l, m, n);
  return static_cast<double>(m - l) / std::sqrt(static_cast<double>(m) * (n - l));
}

double mb_bound(std::span<const double> p_in_t) {
  double best = 0.0;
  for (double p : p_in_t) {
    require_probability(p, "P(i in T)");
    best = std::max(best, p);
  }
  return std::sqrt(best);
}

double nested_subsets_mc(int n, int m, int k) {
  if (!(0 <= k && k <= m && m <= n)) {
    throw Error(ErrorKind::BadIndices, "need 0 <= k <= m <= n");
  }
  const double num = static_cast<double>(k) * (n - m);
  if (num == 0.0) return 0.0;
  return std::sqrt(num / (static_cast<double>(m) * (n - k)));
}

double uniform_nested_tag_mc(int a, int b) {
  if (!(0 < a && a <= b)) throw Error(ErrorKind::BadIndices, "need 0 < a <= b");
  return std::sqrt(static_cast<double>(a) / b);
}

double bdk_mc(double alpha, double lambda, double c_minus, double c_plus) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw Error(ErrorKind::OutOfRange, "alpha must lie in (0,2)");
  }
  if (!(c_minus >= 0.0 && c_plus >= 0.0 && c_minus + c_plus > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::OutOfRange, "need c_minus, c_plus >= 0 with positive sum");
  }
  const double scale = std::pow(std::abs(lambda), alpha);
  if (lambda >= 0.0) return 1.0 / std::sqrt(1.0 + scale);
  const double ratio = std::min(c_minus, c_plus) / std::max(c_minus, c_plus);
  return 1.0 / std::sqrt(1.0 + ratio * scale);
}

double marshall_olkin_mc(double l1, double l2, double l3) {
  if (!(l1 > 0.0 && l2 > 0.0 && l3 > 0.0)) {
    throw Error(ErrorKind::OutOfRange, "rates must be positive");
  }
  return l3 / std::sqrt((l1 + l3) * (l2 + l3));
}

double min_window_bound(int l, int m, int n) { return dksy_mc(l, m, n); }

double independent_rj(double p_j_in_s, double p_j_in_t) {
  require_probability(p_j_in_s, "P(j in S)");
  require_probability(p_j_in_t, "P(j in T)");
  return std::sqrt(p_j_in_s * p_j_in_t);
}

}  // namespace maxcorr::closed_forms
