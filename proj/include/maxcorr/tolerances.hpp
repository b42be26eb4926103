#pragma once

#include <cstddef>

namespace maxcorr::tol {

// Probability tables.
inline constexpr double kMassExact = 1e-12;
inline constexpr double kMassNormalize = 1e-9;
inline constexpr double kNegativeEntry = -1e-15;

// Top singular value of the normalized kernel must be 1 to this accuracy.
inline constexpr double kTopSingular = 1e-8;

// Angular comparisons (axis snapping, antipodal symmetry checks).
inline constexpr double kAngle = 1e-12;
inline constexpr double kSymmetry = 1e-12;

// Adaptive quadrature.
inline constexpr double kQuadratureAbs = 1e-10;
inline constexpr std::size_t kQuadraturePanels = 10000;

// Monotone ladders.
inline constexpr double kLadder = 1e-9;

// Default cap on the number of cells in any enumerated state space.
inline constexpr std::size_t kDefaultCellCap = 1000000;

}  // namespace maxcorr::tol
