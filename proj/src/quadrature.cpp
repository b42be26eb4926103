#include "maxcorr/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <algorithm>
#include <string>
#include <vector>

#include "maxcorr/error.hpp"

namespace maxcorr {
namespace {

constexpr int kOrder = 15;

struct Rule {
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};
};

// Newton iteration on P_15 from the Chebyshev guesses.
Rule make_rule() {
  Rule rule;
  for (int i = 0; i < kOrder; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= kOrder; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const Rule& rule() {
  static const Rule r = make_rule();
  return r;
}

double gauss(const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  const auto& r = rule();
  for (int i = 0; i < kOrder; ++i) {
    sum += r.weights[static_cast<std::size_t>(i)] * f(mid + half * r.nodes[static_cast<std::size_t>(i)]);
  }
  return sum * half;
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel make_panel(const std::function<double(double)>& f, double a, double b) {
  const double m = 0.5 * (a + b);
  const double coarse = gauss(f, a, b);
  const double fine = gauss(f, a, m) + gauss(f, m, b);
  return Panel{a, b, fine, std::abs(fine - coarse)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, std::size_t panel_budget) {
  QuadratureResult out;
  if (a == b) return out;
  std::vector<Panel> heap{make_panel(f, a, b)};
  double total_error = heap.front().error;
  std::size_t since_resync = 0;
  while (total_error > abs_tol) {
    if (heap.size() >= panel_budget) {
      throw Error(ErrorKind::QuadratureFailure,
                  "error estimate " + std::to_string(total_error) + " after " +
                      std::to_string(heap.size()) + " panels");
    }
    std::pop_heap(heap.begin(), heap.end());
    const Panel worst = heap.back();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(worst.a < m && m < worst.b)) {
      heap.push_back(worst);  // panel already at machine resolution
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    const Panel left = make_panel(f, worst.a, m);
    const Panel right = make_panel(f, m, worst.b);
    heap.back() = left;
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
    total_error += left.error + right.error - worst.error;
    // Periodic re-sum so incremental rounding cannot drift.
    if (++since_resync == 64) {
      since_resync = 0;
      total_error = 0.0;
      for (const auto& p : heap) total_error += p.error;
    }
  }
  out.panels = heap.size();
  for (const auto& p : heap) {
    out.value += p.value;
    out.error += p.error;
  }
  return out;
}

}  // namespace maxcorr
