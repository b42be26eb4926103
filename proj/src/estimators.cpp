#include "maxcorr/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "maxcorr/error.hpp"
#include "maxcorr/quadrature.hpp"

namespace maxcorr::estimators {
namespace {

constexpr double kPi = std::numbers::pi;

void require_rate(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorKind::OutOfRange, "rate must be positive and finite");
  }
}

void require_trunc(int trunc) {
  if (trunc < 0 || trunc > 60) {
    throw Error(ErrorKind::OutOfRange, "truncation level must lie in [0, 60]");
  }
}

// Poisson pmf on 0..K with K far enough out that the tail is below 1e-17.
std::vector<double> poisson_pmf(double rate, int at_least) {
  const int k_max =
      std::max(at_least, static_cast<int>(std::ceil(rate + 12.0 * std::sqrt(rate) + 30.0)));
  std::vector<double> pmf(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    pmf[static_cast<std::size_t>(k)] = std::exp(k * std::log(rate) - rate - std::lgamma(k + 1.0));
  }
  return pmf;
}

double phi(double x) {
  if (std::isinf(x)) return x < 0 ? 0.0 : 1.0;
  return boost::math::cdf(boost::math::normal_distribution<double>(), x);
}

double phi_inv(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double exponential() { return -std::log(1.0 - uniform()); }

  std::pair<double, double> normal_pair() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
  }

 private:
  std::mt19937_64 engine_;
};

double cms_draw(Stream& rng, double alpha, double beta) {
  const double v = kPi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  if (alpha == 1.0) {
    const double half = kPi / 2.0;
    return (2.0 / kPi) *
           ((half + beta * v) * std::tan(v) - beta * std::log(half * w * std::cos(v) / (half + beta * v)));
  }
  const double t = beta * std::tan(kPi * alpha / 2.0);
  const double b = std::atan(t) / alpha;
  const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
  return s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
}

}  // namespace

FiniteJoint skellam_poisson_joint(double rate, int trunc) {
  require_rate(rate);
  require_trunc(trunc);
  const auto pmf = poisson_pmf(rate, trunc);
  const int k_max = static_cast<int>(pmf.size()) - 1;
  Eigen::MatrixXd cells = Eigen::MatrixXd::Zero(2 * trunc + 1, trunc + 1);
  double total = 0.0;
  for (int m = 0; m <= k_max; ++m) {
    for (int n = 0; n <= k_max; ++n) {
      const double p = pmf[static_cast<std::size_t>(m)] * pmf[static_cast<std::size_t>(n)];
      const int x = std::clamp(m - n, -trunc, trunc);
      const int y = std::min(m, trunc);
      cells(x + trunc, y) += p;
      total += p;
    }
  }
  cells /= total;
  std::vector<Label> xl, yl;
  for (int x = -trunc; x <= trunc; ++x) xl.push_back(format_number(x));
  for (int y = 0; y <= trunc; ++y) yl.push_back(format_number(y));
  return validate_joint(cells, std::move(xl), std::move(yl));
}

double skellam_censored_mass(double rate, int trunc) {
  require_rate(rate);
  require_trunc(trunc);
  const auto pmf = poisson_pmf(rate, trunc);
  const int k_max = static_cast<int>(pmf.size()) - 1;
  double moved = 0.0, total = 0.0;
  for (int m = 0; m <= k_max; ++m) {
    for (int n = 0; n <= k_max; ++n) {
      const double p = pmf[static_cast<std::size_t>(m)] * pmf[static_cast<std::size_t>(n)];
      total += p;
      if (std::abs(m - n) > trunc || m > trunc) moved += p;
    }
  }
  return moved / total;
}

FiniteJoint gauss_poisson_joint(double rate, int trunc) {
  require_rate(rate);
  require_trunc(trunc);
  const auto pmf = poisson_pmf(rate, trunc);
  const int k_max = static_cast<int>(pmf.size()) - 1;

  std::vector<double> edges{-std::numeric_limits<double>::infinity()};
  for (int i = 0; i <= 6 * trunc; ++i) edges.push_back(-trunc + 0.5 * i);
  edges.push_back(std::numeric_limits<double>::infinity());
  const auto cells_x = static_cast<Eigen::Index>(edges.size() - 1);

  Eigen::MatrixXd cells = Eigen::MatrixXd::Zero(cells_x, trunc + 1);
  double total = 0.0;
  for (int n = 0; n <= k_max; ++n) {
    const double pn = pmf[static_cast<std::size_t>(n)];
    total += pn;
    for (Eigen::Index c = 0; c < cells_x; ++c) {
      const auto lo = edges[static_cast<std::size_t>(c)];
      const auto hi = edges[static_cast<std::size_t>(c) + 1];
      // Upper-tail form keeps right-hand cells accurate.
      const double mass = hi - n <= 0.0 ? phi(hi - n) - phi(lo - n) : phi(n - lo) - phi(n - hi);
      cells(c, std::min(n, trunc)) += pn * mass;
    }
  }
  cells /= total;
  std::vector<Label> xl, yl;
  for (Eigen::Index c = 0; c < cells_x; ++c) {
    xl.push_back("[" + format_number(edges[static_cast<std::size_t>(c)]) + "," +
                 format_number(edges[static_cast<std::size_t>(c) + 1]) + ")");
  }
  for (int y = 0; y <= trunc; ++y) yl.push_back(format_number(y));
  return validate_joint(cells, std::move(xl), std::move(yl));
}

double bivariate_normal_cdf(double h, double k, double rho) {
  if (!(std::abs(rho) <= 1.0)) throw Error(ErrorKind::OutOfRange, "correlation outside [-1, 1]");
  if (h == -std::numeric_limits<double>::infinity() || k == -std::numeric_limits<double>::infinity())
    return 0.0;
  if (std::isinf(h)) return phi(k);
  if (std::isinf(k)) return phi(h);
  if (rho == 1.0) return phi(std::min(h, k));
  if (rho == -1.0) return std::max(0.0, phi(h) - phi(-k));
  const double hk = h * k;
  const double hs = h * h + k * k;
  auto f = [&](double t) {
    const double s = std::sin(t);
    const double c2 = 1.0 - s * s;
    return std::exp(-(hs - 2.0 * hk * s) / (2.0 * c2));
  };
  const double upper = std::asin(rho);
  double extra = 0.0;
  if (upper != 0.0) {
    const auto q = upper > 0.0 ? integrate(f, 0.0, upper, 1e-14) : integrate(f, upper, 0.0, 1e-14);
    extra = (upper > 0.0 ? q.value : -q.value) / (2.0 * kPi);
  }
  return std::clamp(phi(h) * phi(k) + extra, 0.0, 1.0);
}

FiniteJoint binned_gaussian_joint(double rho, int bins) {
  if (!(std::abs(rho) < 1.0)) throw Error(ErrorKind::OutOfRange, "need |rho| < 1");
  if (bins < 1 || bins > 1024) throw Error(ErrorKind::OutOfRange, "bins must lie in [1, 1024]");
  const auto b = static_cast<std::size_t>(bins);
  std::vector<double> edges(b + 1);
  edges.front() = -std::numeric_limits<double>::infinity();
  edges.back() = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < b; ++i) edges[i] = phi_inv(static_cast<double>(i) / bins);

  Eigen::MatrixXd cdf(bins + 1, bins + 1);
  for (std::size_t i = 0; i <= b; ++i)
    for (std::size_t j = 0; j <= b; ++j)
      cdf(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          bivariate_normal_cdf(edges[i], edges[j], rho);

  Eigen::MatrixXd cells(bins, bins);
  for (Eigen::Index i = 0; i < bins; ++i) {
    for (Eigen::Index j = 0; j < bins; ++j) {
      double v = cdf(i + 1, j + 1) - cdf(i, j + 1) - cdf(i + 1, j) + cdf(i, j);
      if (v < 0.0 && v > -1e-13) v = 0.0;
      cells(i, j) = v;
    }
  }
  return validate_joint(cells / cells.sum(), index_labels(b), index_labels(b));
}

TruncationLadder truncation_ladder(const LadderGenerator& generator, std::span<const int> levels) {
  TruncationLadder out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i > 0 && levels[i] <= levels[i - 1]) {
      throw Error(ErrorKind::BadIndices, "ladder levels must be strictly increasing");
    }
    const LadderRung rung = generator(levels[i]);
    CorrelationReport report = max_corr(rung.joint);
    report.method = Method::Truncation;
    report.notes["level"] = static_cast<double>(levels[i]);
    report.notes["tail_mass"] = rung.tail_mass;
    if (!out.reports.empty() && report.value < out.reports.back().value - tol::kLadder) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "ladder drops from %.12g at level %d to %.12g at level %d",
                    out.reports.back().value, levels[i - 1], report.value, levels[i]);
      throw Error(ErrorKind::MonotonicityViolation, buf);
    }
    out.levels.push_back(levels[i]);
    out.tail_mass.push_back(rung.tail_mass);
    out.reports.push_back(std::move(report));
  }
  return out;
}

LadderGenerator skellam_family(double rate) {
  return [rate](int level) {
    return LadderRung{skellam_poisson_joint(rate, level), skellam_censored_mass(rate, level)};
  };
}

LadderGenerator gaussian_binning_family(double rho) {
  return [rho](int level) {
    if (level < 0 || level > 10) throw Error(ErrorKind::OutOfRange, "binning level must lie in [0, 10]");
    return LadderRung{binned_gaussian_joint(rho, 1 << level), 0.0};
  };
}

LadderGenerator gauss_poisson_family(double rate) {
  return [rate](int level) {
    const auto pmf = poisson_pmf(rate, level);
    double tail = 0.0;
    for (std::size_t n = static_cast<std::size_t>(level) + 1; n < pmf.size(); ++n) tail += pmf[n];
    return LadderRung{gauss_poisson_joint(rate, level), tail};
  };
}

std::string sampler_name(const SamplerTag& tag) {
  struct Visitor {
    std::string operator()(const BivariateGaussian&) const { return "bivariate_gaussian"; }
    std::string operator()(const MarshallOlkin&) const { return "marshall_olkin"; }
    std::string operator()(const RandomWalkPair&) const { return "random_walk_pair"; }
    std::string operator()(const StableCms&) const { return "stable_cms"; }
  };
  return std::visit(Visitor{}, tag);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t task) {
  return splitmix64(splitmix64(seed) ^ task);
}

SampleBatch sample(const SamplerTag& tag, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw Error(ErrorKind::OutOfRange, "count must be at least 1");
  SampleBatch batch;
  batch.seed = seed;
  batch.generator = sampler_name(tag) + "/mt19937_64";
  Stream rng(derive_seed(seed, 0));

  if (const auto* g = std::get_if<BivariateGaussian>(&tag)) {
    if (!(std::abs(g->rho) <= 1.0)) throw Error(ErrorKind::OutOfRange, "rho outside [-1, 1]");
    const double c = std::sqrt(1.0 - g->rho * g->rho);
    batch.pairs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto [z1, z2] = rng.normal_pair();
      batch.pairs.emplace_back(z1, g->rho * z1 + c * z2);
    }
  } else if (const auto* mo = std::get_if<MarshallOlkin>(&tag)) {
    if (!(mo->l1 > 0.0 && mo->l2 > 0.0 && mo->l3 > 0.0)) {
      throw Error(ErrorKind::OutOfRange, "Marshall-Olkin rates must be positive");
    }
    batch.pairs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double w1 = rng.exponential() / mo->l1;
      const double w2 = rng.exponential() / mo->l2;
      const double w3 = rng.exponential() / mo->l3;
      batch.pairs.emplace_back(std::min(w1, w3), std::min(w2, w3));
    }
  } else if (const auto* rw = std::get_if<RandomWalkPair>(&tag)) {
    if (rw->steps < 1) throw Error(ErrorKind::OutOfRange, "steps must be at least 1");
    const auto& inc = rw->increments;
    std::vector<double> xs, ys, cumulative;
    for (const auto& l : inc.x_labels()) {
      const auto v = parse_number(l);
      if (!v) throw Error(ErrorKind::ParseError, "increment label '" + l + "' is not numeric");
      xs.push_back(*v);
    }
    for (const auto& l : inc.y_labels()) {
      const auto v = parse_number(l);
      if (!v) throw Error(ErrorKind::ParseError, "increment label '" + l + "' is not numeric");
      ys.push_back(*v);
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < inc.probs().rows(); ++i)
      for (Eigen::Index j = 0; j < inc.probs().cols(); ++j) cumulative.push_back(acc += inc.probs()(i, j));
    const auto cols = static_cast<std::size_t>(inc.probs().cols());
    batch.pairs.reserve(count * static_cast<std::size_t>(rw->steps));
    for (std::size_t walk = 0; walk < count; ++walk) {
      double s = 0.0, t = 0.0;
      for (int step = 0; step < rw->steps; ++step) {
        const double u = rng.uniform();
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) --it;
        const auto cell = static_cast<std::size_t>(it - cumulative.begin());
        s += xs[cell / cols];
        t += ys[cell % cols];
        batch.pairs.emplace_back(s, t);
      }
    }
  } else {
    const auto& st = std::get<StableCms>(tag);
    if (!(st.alpha > 0.0 && st.alpha <= 2.0) || !(std::abs(st.beta) <= 1.0) || !(st.scale > 0.0)) {
      throw Error(ErrorKind::OutOfRange, "stable parameters need alpha in (0,2], |beta| <= 1, scale > 0");
    }
    batch.pairs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double x = cms_draw(rng, st.alpha, st.beta);
      const double y = cms_draw(rng, st.alpha, st.beta);
      batch.pairs.emplace_back(st.scale * x, st.scale * y);
    }
  }
  return batch;
}

std::vector<int> quantile_bins(std::span<const double> values, int bins) {
  if (bins < 1) throw Error(ErrorKind::OutOfRange, "bins must be positive");
  const std::size_t n = values.size();
  for (double v : values) {
    if (std::isnan(v)) throw Error(ErrorKind::OutOfRange, "sample contains NaN");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<int> out(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start;
    while (end < n && values[order[end]] == values[order[start]]) ++end;
    const int bin = static_cast<int>(static_cast<double>(start) * bins / static_cast<double>(n));
    for (std::size_t r = start; r < end; ++r) out[order[r]] = bin;
    start = end;
  }
  return out;
}

CorrelationReport binned_empirical_mc(const SampleBatch& batch, int bins_x, int bins_y) {
  const std::size_t n = batch.pairs.size();
  if (n == 0) throw Error(ErrorKind::EmptySupport, "empty sample");
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = batch.pairs[i].first;
    ys[i] = batch.pairs[i].second;
  }
  const auto bx = quantile_bins(xs, bins_x);
  const auto by = quantile_bins(ys, bins_y);
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(bins_x, bins_y);
  for (std::size_t i = 0; i < n; ++i) counts(bx[i], by[i]) += 1.0;

  const auto used_x = (counts.rowwise().sum().array() > 0.0).count();
  const auto used_y = (counts.colwise().sum().array() > 0.0).count();
  if (used_x < 2 || used_y < 2) {
    throw Error(ErrorKind::DegenerateAxis, "binning leaves an axis with a single state");
  }
  const auto joint = validate_joint(Eigen::MatrixXd(counts / static_cast<double>(n)),
                                    index_labels(static_cast<std::size_t>(bins_x)),
                                    index_labels(static_cast<std::size_t>(bins_y)));
  CorrelationReport report = max_corr(joint);
  report.method = Method::BinnedEmpirical;
  // Edge of the noise spectrum of an independent table with this many cells.
  report.tolerance = (std::sqrt(static_cast<double>(used_x)) + std::sqrt(static_cast<double>(used_y))) /
                     std::sqrt(static_cast<double>(n));
  report.notes["sample_size"] = static_cast<double>(n);
  report.notes["bins_x"] = static_cast<double>(used_x);
  report.notes["bins_y"] = static_cast<double>(used_y);
  report.notes["generator"] = batch.generator;
  return report;
}

void write_csv(std::ostream& out, const SampleBatch& batch, bool header) {
  if (header) out << "x,y\n";
  char buf[64];
  for (const auto& [x, y] : batch.pairs) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, y);
    out << buf;
  }
}

std::vector<std::pair<double, double>> read_csv(std::istream& in) {
  std::vector<std::pair<double, double>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    auto field = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    const std::string a = comma == std::string::npos ? line : field(line.substr(0, comma));
    const std::string b = comma == std::string::npos ? std::string{} : field(line.substr(comma + 1));
    const auto x = parse_number(a);
    const auto y = parse_number(b);
    if (!x || !y) {
      if (out.empty() && line_no == 1) continue;  // header
      throw Error(ErrorKind::ParseError, "CSV line " + std::to_string(line_no) + " is not x,y");
    }
    out.emplace_back(*x, *y);
  }
  return out;
}

}  // namespace maxcorr::estimators
