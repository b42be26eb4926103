#include "maxcorr/stable_levy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "maxcorr/error.hpp"
#include "maxcorr/quadrature.hpp"

namespace maxcorr::stable_levy {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

double reduce_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Distance on the circle.
double angle_gap(double a, double b) {
  const double d = std::abs(reduce_angle(a) - reduce_angle(b));
  return std::min(d, kTwoPi - d);
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw Error(ErrorKind::OutOfRange, "alpha must lie in (0,2), got " + std::to_string(alpha));
  }
}

struct AxisSnap {
  double c, s;
  bool on_axis;
};

// Exact cos/sin for angles on a coordinate axis.
AxisSnap snapped(double theta) {
  const double q = theta / kHalfPi;
  const double k = std::nearbyint(q);
  if (std::abs(theta - k * kHalfPi) <= tol::kAngle) {
    switch (static_cast<int>(k) & 3) {
      case 0: return {1.0, 0.0, true};
      case 1: return {0.0, 1.0, true};
      case 2: return {-1.0, 0.0, true};
      default: return {0.0, -1.0, true};
    }
  }
  return {std::cos(theta), std::sin(theta), false};
}

double safe_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (den <= 0.0) return 0.0;
  return num / den;
}

}  // namespace

SpectralMeasure SpectralMeasure::make(std::vector<SpectralAtom> atoms,
                                      std::vector<DensityPiece> pieces) {
  SpectralMeasure out;
  for (auto& a : atoms) {
    if (!(a.weight > 0.0) || !std::isfinite(a.weight) || !std::isfinite(a.theta)) {
      throw Error(ErrorKind::OutOfRange, "atom weights must be positive and finite");
    }
    a.theta = reduce_angle(a.theta);
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const SpectralAtom& l, const SpectralAtom& r) { return l.theta < r.theta; });
  for (const auto& a : atoms) {
    if (!out.atoms_.empty() && angle_gap(out.atoms_.back().theta, a.theta) <= tol::kAngle) {
      out.atoms_.back().weight += a.weight;
    } else if (!out.atoms_.empty() && angle_gap(out.atoms_.front().theta, a.theta) <= tol::kAngle) {
      out.atoms_.front().weight += a.weight;
    } else {
      out.atoms_.push_back(a);
    }
  }

  for (const auto& p : pieces) {
    if (!(p.from >= 0.0 && p.from < p.to && p.to <= kTwoPi + tol::kAngle)) {
      throw Error(ErrorKind::OutOfRange, "density piece must satisfy 0 <= from < to <= 2pi");
    }
    if (!(p.level >= 0.0) || !std::isfinite(p.level)) {
      throw Error(ErrorKind::OutOfRange, "density level must be nonnegative");
    }
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const DensityPiece& l, const DensityPiece& r) { return l.from < r.from; });
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (pieces[i].from < pieces[i - 1].to) {
      throw Error(ErrorKind::OutOfRange, "density pieces overlap");
    }
  }
  for (auto& p : pieces) {
    p.to = std::min(p.to, kTwoPi);
    if (p.level > 0.0) out.pieces_.push_back(p);
  }
  if (!(out.total_mass() > 0.0)) {
    throw Error(ErrorKind::EmptySupport, "spectral measure has zero mass");
  }
  return out;
}

SpectralMeasure SpectralMeasure::uniform(double level) {
  return make({}, {DensityPiece{0.0, kTwoPi, level}});
}

double SpectralMeasure::total_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.weight;
  for (const auto& p : pieces_) m += p.level * (p.to - p.from);
  return m;
}

double SpectralMeasure::density_at(double theta) const {
  const double t = reduce_angle(theta);
  for (const auto& p : pieces_) {
    if (t >= p.from && t < p.to) return p.level;
  }
  return 0.0;
}

SpectralMeasure SpectralMeasure::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error(ErrorKind::OutOfRange, "scale factor must be positive");
  auto atoms = atoms_;
  auto pieces = pieces_;
  for (auto& a : atoms) a.weight *= factor;
  for (auto& p : pieces) p.level *= factor;
  return make(std::move(atoms), std::move(pieces));
}

SpectralMeasure SpectralMeasure::swapped_coordinates() const {
  std::vector<SpectralAtom> atoms;
  for (const auto& a : atoms_) atoms.push_back({kHalfPi - a.theta, a.weight});
  std::vector<DensityPiece> pieces;
  for (const auto& p : pieces_) {
    // [from, to) maps to (pi/2 - to, pi/2 - from]; endpoints carry no mass.
    double lo = kHalfPi - p.to;
    double hi = kHalfPi - p.from;
    if (lo < 0.0 && hi <= 0.0) {
      lo += kTwoPi;
      hi += kTwoPi;
    }
    if (lo < 0.0) {
      pieces.push_back({lo + kTwoPi, kTwoPi, p.level});
      pieces.push_back({0.0, hi, p.level});
    } else {
      pieces.push_back({lo, hi, p.level});
    }
  }
  return make(std::move(atoms), std::move(pieces));
}

CDSet cd_integrals(const SpectralMeasure& tau, double alpha) {
  require_alpha(alpha);
  CDSet cd;
  auto add_cross = [&cd](double c, double s, double v) {
    if (c > 0.0 && s > 0.0) cd.c_pp += v;
    else if (c > 0.0 && s < 0.0) cd.c_pm += v;
    else if (c < 0.0 && s > 0.0) cd.c_mp += v;
    else if (c < 0.0 && s < 0.0) cd.c_mm += v;
  };

  for (const auto& a : tau.atoms()) {
    const auto [c, s, on_axis] = snapped(a.theta);
    if (on_axis) ++cd.axis_atoms;
    add_cross(c, s, a.weight * std::pow(std::abs(c * s), 0.5 * alpha));
    const double cx = a.weight * std::pow(std::abs(c), alpha);
    const double sy = a.weight * std::pow(std::abs(s), alpha);
    if (c > 0.0) cd.dx_p += cx;
    if (c < 0.0) cd.dx_m += cx;
    if (s > 0.0) cd.dy_p += sy;
    if (s < 0.0) cd.dy_m += sy;
  }

  const auto cross = [alpha](double t) {
    return std::pow(std::abs(std::cos(t) * std::sin(t)), 0.5 * alpha);
  };
  const auto cos_pow = [alpha](double t) { return std::pow(std::abs(std::cos(t)), alpha); };
  const auto sin_pow = [alpha](double t) { return std::pow(std::abs(std::sin(t)), alpha); };

  for (const auto& p : tau.pieces()) {
    // Integrand kinks sit at multiples of pi/2; integrate quadrant by quadrant.
    for (int q = 0; q < 4; ++q) {
      const double lo = std::max(p.from, q * kHalfPi);
      const double hi = std::min(p.to, (q + 1) * kHalfPi);
      if (!(lo < hi)) continue;
      const auto ic = integrate(cross, lo, hi);
      const auto ix = integrate(cos_pow, lo, hi);
      const auto iy = integrate(sin_pow, lo, hi);
      cd.quadrature_error += p.level * (ic.error + ix.error + iy.error);
      const double vc = p.level * ic.value;
      const double vx = p.level * ix.value;
      const double vy = p.level * iy.value;
      // Quadrant q has cos sign (+,-,-,+) and sin sign (+,+,-,-).
      const double cs = (q == 0 || q == 3) ? 1.0 : -1.0;
      const double ss = (q <= 1) ? 1.0 : -1.0;
      add_cross(cs, ss, vc);
      (cs > 0 ? cd.dx_p : cd.dx_m) += vx;
      (ss > 0 ? cd.dy_p : cd.dy_m) += vy;
    }
  }
  return cd;
}

Eigen::Matrix2d op_matrix(const CDSet& cd) {
  Eigen::Matrix2d a;
  a(0, 0) = safe_ratio(cd.c_pp, std::sqrt(cd.dx_p * cd.dy_p));
  a(0, 1) = safe_ratio(cd.c_pm, std::sqrt(cd.dx_p * cd.dy_m));
  a(1, 0) = safe_ratio(cd.c_mp, std::sqrt(cd.dx_m * cd.dy_p));
  a(1, 1) = safe_ratio(cd.c_mm, std::sqrt(cd.dx_m * cd.dy_m));
  return a;
}

double spectral_norm_2x2(const Eigen::Matrix2d& a) {
  const Eigen::Matrix2d g = a.transpose() * a;
  const double half_trace = 0.5 * (g(0, 0) + g(1, 1));
  const double half_gap = 0.5 * (g(0, 0) - g(1, 1));
  const double disc = std::sqrt(half_gap * half_gap + g(0, 1) * g(1, 0));
  return std::sqrt(std::max(0.0, half_trace + disc));
}

CorrelationReport opnu_stable(const SpectralMeasure& tau, double alpha) {
  const CDSet cd = cd_integrals(tau, alpha);
  const Eigen::Matrix2d a = op_matrix(cd);
  CorrelationReport r;
  r.method = Method::SpectralNorm;
  r.value = spectral_norm_2x2(a);
  const double min_d = std::min({cd.dx_p + cd.dx_m, cd.dy_p + cd.dy_m});
  r.tolerance = std::max(std::numeric_limits<double>::epsilon(),
                         min_d > 0.0 ? cd.quadrature_error / min_d : 0.0);
  r.notes["alpha"] = alpha;
  r.notes["C++"] = cd.c_pp;
  r.notes["C+-"] = cd.c_pm;
  r.notes["C-+"] = cd.c_mp;
  r.notes["C--"] = cd.c_mm;
  r.notes["Dx+"] = cd.dx_p;
  r.notes["Dx-"] = cd.dx_m;
  r.notes["Dy+"] = cd.dy_p;
  r.notes["Dy-"] = cd.dy_m;
  r.notes["axis_atoms"] = static_cast<double>(cd.axis_atoms);
  if (cd.axis_atoms > 0) {
    r.notes["axis_convention"] =
        std::string("atoms on an axis assigned by the sign of cos/sin; they add nothing to C");
  }
  return r;
}

SpectralMeasure bdk_tau(double alpha, double lambda, double c_minus, double c_plus) {
  require_alpha(alpha);
  if (!(c_minus >= 0.0 && c_plus >= 0.0 && c_minus + c_plus > 0.0)) {
    throw Error(ErrorKind::OutOfRange, "need c_minus, c_plus >= 0 with positive sum");
  }
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    throw Error(ErrorKind::OutOfRange, "lambda must be finite and nonzero");
  }
  const double lam = std::pow(std::abs(lambda), alpha);
  const double diag = std::pow(std::numbers::sqrt2, alpha);
  // Jumps of Z land on the y-axis with sign(lambda) flipping which tail
  // goes up; jumps of X sit on the diagonal.
  const double up = lambda < 0.0 ? c_minus : c_plus;
  const double down = lambda < 0.0 ? c_plus : c_minus;
  std::vector<SpectralAtom> atoms;
  auto push = [&atoms](double theta, double w) {
    if (w > 0.0) atoms.push_back({theta, w});
  };
  push(kHalfPi, up * lam);
  push(3.0 * kHalfPi, down * lam);
  push(0.25 * kPi, c_plus * diag);
  push(1.25 * kPi, c_minus * diag);
  return SpectralMeasure::make(std::move(atoms));
}

CorrelationReport opnu_atoms(const std::vector<JumpAtom>& atoms) {
  std::map<std::pair<double, double>, double> mass;
  std::map<double, double> nu_x, nu_y;
  for (const auto& a : atoms) {
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw Error(ErrorKind::OutOfRange, "jump atom weights must be positive");
    }
    if (a.x == 0.0 && a.y == 0.0) {
      throw Error(ErrorKind::OutOfRange, "jump atoms must avoid the origin");
    }
    mass[{a.x, a.y}] += a.weight;
    if (a.x != 0.0) nu_x[a.x] += a.weight;
    if (a.y != 0.0) nu_y[a.y] += a.weight;
  }

  CorrelationReport r;
  r.method = Method::SpectralNorm;
  r.notes["x_values"] = static_cast<double>(nu_x.size());
  r.notes["y_values"] = static_cast<double>(nu_y.size());
  if (nu_x.empty() || nu_y.empty()) return r;

  std::map<double, Eigen::Index> xi, yi;
  for (const auto& [x, w] : nu_x) xi.emplace(x, static_cast<Eigen::Index>(xi.size()));
  for (const auto& [y, w] : nu_y) yi.emplace(y, static_cast<Eigen::Index>(yi.size()));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(xi.size()),
                                            static_cast<Eigen::Index>(yi.size()));
  for (const auto& [xy, w] : mass) {
    if (xy.first == 0.0 || xy.second == 0.0) continue;
    m(xi.at(xy.first), yi.at(xy.second)) = w / std::sqrt(nu_x.at(xy.first) * nu_y.at(xy.second));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd sv = svd.singularValues();
  r.spectrum.assign(sv.data(), sv.data() + sv.size());
  r.value = r.spectrum.empty() ? 0.0 : r.spectrum.front();
  r.tolerance = static_cast<double>(std::max(m.rows(), m.cols())) *
                std::numeric_limits<double>::epsilon();
  return r;
}

bool is_antipodally_symmetric(const SpectralMeasure& tau) {
  const auto& atoms = tau.atoms();
  for (const auto& a : atoms) {
    const double target = reduce_angle(a.theta + kPi);
    const auto partner = std::find_if(atoms.begin(), atoms.end(), [&](const SpectralAtom& b) {
      return angle_gap(b.theta, target) <= tol::kAngle;
    });
    if (partner == atoms.end()) return false;
    if (std::abs(partner->weight - a.weight) > tol::kSymmetry * std::max(1.0, a.weight)) {
      return false;
    }
  }
  // Compare the step function with its half-turn on every cell between
  // breakpoints of either.
  std::vector<double> cuts{0.0, kTwoPi};
  for (const auto& p : tau.pieces()) {
    for (double e : {p.from, p.to}) {
      cuts.push_back(reduce_angle(e));
      cuts.push_back(reduce_angle(e + kPi));
    }
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= tol::kAngle) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (std::abs(tau.density_at(mid) - tau.density_at(mid + kPi)) > tol::kSymmetry) return false;
  }
  return true;
}

double hilbert_hardy_symmetric(const SpectralMeasure& tau, double alpha) {
  if (!is_antipodally_symmetric(tau)) {
    throw Error(ErrorKind::NotSymmetric, "tau is not invariant under theta -> theta + pi");
  }
  const CDSet cd = cd_integrals(tau, alpha);
  const double num = cd.c_pp + cd.c_pm + cd.c_mp + cd.c_mm;
  const double den = std::sqrt((cd.dx_p + cd.dx_m) * (cd.dy_p + cd.dy_m));
  return safe_ratio(num, den);
}

void validate(const LevyTriple& triple) {
  const auto& s = triple.sigma;
  if (!s.allFinite() || !triple.drift.allFinite()) {
    throw Error(ErrorKind::OutOfRange, "non-finite drift or covariance");
  }
  if (std::abs(s(0, 1) - s(1, 0)) > tol::kMassExact) {
    throw Error(ErrorKind::OutOfRange, "covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(s);
  if (eig.eigenvalues().minCoeff() < -tol::kMassExact) {
    throw Error(ErrorKind::OutOfRange, "covariance is not positive semidefinite");
  }
  if (const auto* st = std::get_if<StableJumps>(&triple.jumps)) require_alpha(st->alpha);
  if (const auto* at = std::get_if<AtomJumps>(&triple.jumps)) {
    for (const auto& a : at->atoms) {
      if (a.x == 0.0 && a.y == 0.0) {
        throw Error(ErrorKind::OutOfRange, "jump atoms must avoid the origin");
      }
      if (!(a.weight > 0.0)) throw Error(ErrorKind::OutOfRange, "jump weights must be positive");
    }
  }
}

double diffusion_rho(const Eigen::Matrix2d& sigma) {
  const double v = sigma(0, 0) * sigma(1, 1);
  if (!(v > 0.0)) return 0.0;
  return sigma(0, 1) / std::sqrt(v);
}

CorrelationReport levy_mc(const LevyTriple& triple) {
  validate(triple);
  const double rho = diffusion_rho(triple.sigma);
  CorrelationReport jump;
  jump.method = Method::SpectralNorm;
  std::string kind = "none";
  if (const auto* st = std::get_if<StableJumps>(&triple.jumps)) {
    jump = opnu_stable(st->tau, st->alpha);
    kind = "stable";
  } else if (const auto* at = std::get_if<AtomJumps>(&triple.jumps)) {
    jump = opnu_atoms(at->atoms);
    kind = "atoms";
  }
  CorrelationReport r = jump;
  r.method = Method::SpectralNorm;
  r.value = std::max(std::abs(rho), jump.value);
  r.notes["rho"] = rho;
  r.notes["op_nu"] = jump.value;
  r.notes["jumps"] = kind;
  return r;
}

}  // namespace maxcorr::stable_levy
