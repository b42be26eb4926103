#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "maxcorr/discrete_core.hpp"

namespace maxcorr::estimators {

/// Exact joint of (M - N, M) for independent Poisson(rate) M and N, with
/// both coordinates censored to [-trunc, trunc]. Censored cells keep the
/// full tail mass. Requires rate > 0 and 0 <= trunc <= 60.
FiniteJoint skellam_poisson_joint(double rate, int trunc);

// P(|M - N| > trunc or M > trunc): mass moved by the censoring.
double skellam_censored_mass(double rate, int trunc);

/// Joint of (B + N, N) with B standard normal and N Poisson(rate): N is
/// censored at trunc, B + N is cut at the half-integers of [-trunc, 2 trunc]
/// with the two outer tails kept as single cells.
FiniteJoint gauss_poisson_joint(double rate, int trunc);

/// P(X <= h, Y <= k) for standard bivariate normal with correlation rho,
/// through Phi(h) Phi(k) + (1/2pi) int_0^{asin rho} exp(-(h^2 + k^2 -
/// 2hk sin t) / (2 cos^2 t)) dt. Infinite arguments are allowed.
double bivariate_normal_cdf(double h, double k, double rho);

/// Exact cell probabilities of the standard bivariate normal on the grid of
/// `bins` equal-probability intervals per axis.
FiniteJoint binned_gaussian_joint(double rho, int bins);

struct LadderRung {
  FiniteJoint joint;
  double tail_mass = 0.0;
};

using LadderGenerator = std::function<LadderRung(int level)>;

struct TruncationLadder {
  std::vector<int> levels;
  std::vector<CorrelationReport> reports;
  std::vector<double> tail_mass;
};

/// max_corr at each (strictly increasing) level. Values must be
/// non-decreasing within tol::kLadder, else MonotonicityViolation.
TruncationLadder truncation_ladder(const LadderGenerator& generator, std::span<const int> levels);

LadderGenerator skellam_family(double rate);
// 2^level equal-probability bins per axis.
LadderGenerator gaussian_binning_family(double rho);
LadderGenerator gauss_poisson_family(double rate);

struct BivariateGaussian {
  double rho = 0.0;
};

struct MarshallOlkin {
  double l1 = 1.0, l2 = 1.0, l3 = 1.0;
};

struct RandomWalkPair {
  FiniteJoint increments;
  int steps = 1;
};

struct StableCms {
  double alpha = 1.0;
  double beta = 0.0;
  double scale = 1.0;
};

using SamplerTag = std::variant<BivariateGaussian, MarshallOlkin, RandomWalkPair, StableCms>;

std::string sampler_name(const SamplerTag& tag);

struct SampleBatch {
  std::vector<std::pair<double, double>> pairs;
  std::uint64_t seed = 0;
  std::string generator;  // sampler name plus the engine, e.g. "marshall_olkin/mt19937_64"
};

/// Seed of substream `task`: splitmix64 applied to seed, then mixed with
/// the task index through a second splitmix64 round.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t task);

/// Draws from std::mt19937_64 seeded with derive_seed(seed, 0).
///
/// Uniforms are (word >> 11) * 2^-53 in [0, 1); logarithms use 1 - u.
/// bivariate_gaussian: Box-Muller on (u1, u2), z1 = r cos(2 pi u2),
///   z2 = r sin(2 pi u2), pair (z1, rho z1 + sqrt(1 - rho^2) z2).
/// marshall_olkin: W_i = -log(1 - u_i) / l_i for i = 1, 2, 3 in order,
///   pair (min(W1, W3), min(W2, W3)).
/// random_walk_pair: `count` independent walks, each emitting the partial
///   sums (S_i, T_i) for i = 1..steps, so count * steps pairs walk-major;
///   an increment is the first cell (row-major) whose cumulative mass
///   exceeds u.
/// stable_cms: two independent Chambers-Mallows-Stuck draws per pair,
///   each from (u_V, u_W), multiplied by scale.
SampleBatch sample(const SamplerTag& tag, std::size_t count, std::uint64_t seed);

/// Equal-frequency binning per axis (ties share a bin), then max_corr of
/// the empirical table. DegenerateAxis if an axis ends up with one bin.
CorrelationReport binned_empirical_mc(const SampleBatch& batch, int bins_x, int bins_y);

// Bin index per sample: floor(rank of first tied value * bins / n).
std::vector<int> quantile_bins(std::span<const double> values, int bins);

void write_csv(std::ostream& out, const SampleBatch& batch, bool header = true);
// Two columns x,y; a non-numeric first line is read as a header.
std::vector<std::pair<double, double>> read_csv(std::istream& in);

}  // namespace maxcorr::estimators
