#pragma once

#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "maxcorr/discrete_core.hpp"

namespace maxcorr::stable_levy {

struct SpectralAtom {
  double theta = 0.0;  // radians, reduced to [0, 2pi)
  double weight = 0.0;
};

// Constant density `level` on [from, to) with 0 <= from < to <= 2pi.
struct DensityPiece {
  double from = 0.0;
  double to = 0.0;
  double level = 0.0;
};

/// Finite measure tau on the circle: atoms plus a piecewise-constant density.
/// The Levy measure of the stable law is r^{-1-alpha} dr tau(dtheta).
class SpectralMeasure {
 public:
  /// Reduces atom angles mod 2pi, merges atoms closer than tol::kAngle, and
  /// checks positivity, piece bounds, piece disjointness, and total mass.
  static SpectralMeasure make(std::vector<SpectralAtom> atoms,
                              std::vector<DensityPiece> pieces = {});

  static SpectralMeasure uniform(double level = 1.0);

  const std::vector<SpectralAtom>& atoms() const noexcept { return atoms_; }
  const std::vector<DensityPiece>& pieces() const noexcept { return pieces_; }

  double total_mass() const;
  double density_at(double theta) const;

  SpectralMeasure scaled(double factor) const;
  // theta -> pi/2 - theta, i.e. the measure of (Y, X).
  SpectralMeasure swapped_coordinates() const;

 private:
  std::vector<SpectralAtom> atoms_;
  std::vector<DensityPiece> pieces_;
};

struct CDSet {
  double c_pp = 0.0, c_pm = 0.0, c_mp = 0.0, c_mm = 0.0;
  double dx_p = 0.0, dx_m = 0.0, dy_p = 0.0, dy_m = 0.0;
  double quadrature_error = 0.0;  // summed estimate over density pieces
  int axis_atoms = 0;             // atoms sitting on a coordinate axis
};

/// Quadrant integrals of |cos sin|^{alpha/2}, |cos|^alpha and |sin|^alpha
/// against tau. The subscripts give the signs of (cos, sin); the D terms
/// split by the sign of cos (x) or sin (y). Atoms within tol::kAngle of a
/// multiple of pi/2 are snapped onto the axis, where the vanishing factors
/// make the closed/open endpoint choice immaterial.
CDSet cd_integrals(const SpectralMeasure& tau, double alpha);

/// 2x2 matrix with entries C/sqrt(D^x D^y), 0/0 read as 0.
Eigen::Matrix2d op_matrix(const CDSet& cd);

/// Largest singular value of a 2x2 matrix, from the characteristic
/// polynomial of A^T A.
double spectral_norm_2x2(const Eigen::Matrix2d& a);

/// Op(nu) of the alpha-stable Levy measure with spectral measure tau, which
/// is also R(X, Y) for the stable vector.
CorrelationReport opnu_stable(const SpectralMeasure& tau, double alpha);

/// Spectral measure of (X, X + lambda Z) for i.i.d. alpha-stable X, Z with
/// one-dimensional Levy density c_minus on the negative and c_plus on the
/// positive half-line.
SpectralMeasure bdk_tau(double alpha, double lambda, double c_minus, double c_plus);

struct JumpAtom {
  double x = 0.0;
  double y = 0.0;
  double weight = 0.0;
};

/// Op(nu) for a finitely supported jump measure: top singular value of
/// nu({(x,y)}) / sqrt(nu_X(x) nu_Y(y)) over nonzero x and nonzero y, where
/// nu_X keeps the atoms with y = 0 (and symmetrically). No deflation.
CorrelationReport opnu_atoms(const std::vector<JumpAtom>& atoms);

/// Scalar formula valid for antipodally symmetric tau (tau(theta + pi) =
/// tau(theta)). Throws NotSymmetric otherwise.
double hilbert_hardy_symmetric(const SpectralMeasure& tau, double alpha);

bool is_antipodally_symmetric(const SpectralMeasure& tau);

struct NoJumps {};

struct StableJumps {
  double alpha = 1.0;
  SpectralMeasure tau;
};

struct AtomJumps {
  std::vector<JumpAtom> atoms;
};

using JumpMeasure = std::variant<NoJumps, StableJumps, AtomJumps>;

struct LevyTriple {
  Eigen::Vector2d drift = Eigen::Vector2d::Zero();
  Eigen::Matrix2d sigma = Eigen::Matrix2d::Zero();
  JumpMeasure jumps = NoJumps{};
};

// Checks symmetry/PSD of sigma, alpha in (0,2), and atoms off the origin.
void validate(const LevyTriple& triple);

/// Gaussian correlation of sigma, 0 when either variance vanishes.
double diffusion_rho(const Eigen::Matrix2d& sigma);

/// max(|rho|, Op(nu)) for the whole-path maximal correlation.
CorrelationReport levy_mc(const LevyTriple& triple);

}  // namespace maxcorr::stable_levy
