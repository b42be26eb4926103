#pragma once

#include <cstddef>
#include <functional>

#include "maxcorr/tolerances.hpp"

namespace maxcorr {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // sum of per-panel error estimates
  std::size_t panels = 0;
};

/// Globally adaptive 15-point Gauss-Legendre quadrature on [a, b].
///
/// Each panel is scored by comparing the one-panel rule with the sum over its
/// two halves; the worst panel is bisected until the summed estimate drops
/// below abs_tol. Exceeding panel_budget raises QuadratureFailure.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = tol::kQuadratureAbs,
                           std::size_t panel_budget = tol::kQuadraturePanels);

}  // namespace maxcorr
