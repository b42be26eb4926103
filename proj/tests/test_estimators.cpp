#include <cmath>
#include <sstream>

#include "maxcorr/closed_forms.hpp"
#include "maxcorr/estimators.hpp"
#include "maxcorr/instances.hpp"
#include "support.hpp"

using namespace maxcorr;
using namespace maxcorr::estimators;
using doctest::Approx;

namespace {

double mc(const FiniteJoint& j) { return max_corr(j).value; }

}  // namespace

TEST_CASE("skellam_poisson_joint") {
  const auto zero = skellam_poisson_joint(1.0, 0);
  CHECK(zero.x_size() == 1);
  CHECK(zero.y_size() == 1);
  CHECK(mc(zero) == 0.0);

  // Frozen from an independent dense-matrix computation.
  const double ladder[] = {0.73019957, 0.811421, 0.82841084, 0.83166316, 0.83210291};
  for (int i = 0; i < 5; ++i) {
    const auto j = skellam_poisson_joint(1.0, 2 * (i + 1));
    CHECK(j.probs().sum() == Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(mc(j) - ladder[i]) < 5e-7);
  }
  CHECK(skellam_censored_mass(1.0, 10) < 1e-7);
  CHECK(skellam_censored_mass(1.0, 2) > skellam_censored_mass(1.0, 4));
  CHECK(skellam_censored_mass(1.0, 2) == Approx(0.1175).epsilon(1e-3));
  CHECK_ERROR(skellam_poisson_joint(0.0, 3), OutOfRange);
  CHECK_ERROR(skellam_poisson_joint(1.0, 61), OutOfRange);
}

TEST_CASE("bivariate_normal_cdf") {
  // mpmath references
  CHECK(std::abs(bivariate_normal_cdf(0.3, -0.7, 0.5) - 0.206523779785739010) < 1e-12);
  CHECK(std::abs(bivariate_normal_cdf(1.2, 0.4, 0.5) - 0.619758958826261460) < 1e-12);
  CHECK(std::abs(bivariate_normal_cdf(-1.0, 2.0, -0.8) - 0.137795669999201510) < 1e-12);
  CHECK(bivariate_normal_cdf(0.0, 0.0, 0.0) == Approx(0.25));
  CHECK(bivariate_normal_cdf(0.0, 0.0, 0.5) == Approx(0.25 + std::asin(0.5) / (2 * M_PI)));
  const double inf = INFINITY;
  CHECK(bivariate_normal_cdf(inf, inf, 0.3) == Approx(1.0));
  CHECK(bivariate_normal_cdf(-inf, 1.0, 0.3) == 0.0);
  CHECK(bivariate_normal_cdf(inf, 0.0, 0.3) == Approx(0.5));
}

TEST_CASE("binned_gaussian_joint") {
  // scipy references
  CHECK(std::abs(mc(binned_gaussian_joint(0.5, 4)) - 0.43910073061339344) < 1e-9);
  CHECK(std::abs(mc(binned_gaussian_joint(0.5, 8)) - 0.4761591972502102) < 1e-9);
  const auto two = binned_gaussian_joint(0.5, 2);
  CHECK(std::abs(mc(two) - 1.0 / 3.0) < 1e-10);
  const auto j = binned_gaussian_joint(0.3, 16);
  CHECK(j.probs().sum() == Approx(1.0).epsilon(1e-14));
  for (Eigen::Index r = 0; r < j.probs().rows(); ++r) CHECK(j.probs().row(r).sum() == Approx(1.0 / 16).epsilon(1e-9));
  CHECK(mc(binned_gaussian_joint(0.0, 8)) < 1e-9);
  CHECK_ERROR(binned_gaussian_joint(0.5, 2000), OutOfRange);
}

TEST_CASE("truncation ladders") {
  const std::vector<int> levels{1, 2, 3, 4, 5, 6, 7};
  const auto g = truncation_ladder(gaussian_binning_family(0.5), levels);
  const double expect[] = {0.333333, 0.439101, 0.476159, 0.490215, 0.495854, 0.498203, 0.499208};
  for (std::size_t i = 0; i < levels.size(); ++i) {
    CHECK(std::abs(g.reports[i].value - expect[i]) < 1e-6);
    CHECK(g.reports[i].value < 0.5);
    CHECK(g.reports[i].method == Method::Truncation);
  }

  const std::vector<int> even{2, 4, 6, 8, 10};
  const auto s = truncation_ladder(skellam_family(1.0), even);
  for (std::size_t i = 1; i < even.size(); ++i) {
    CHECK(s.reports[i].value >= s.reports[i - 1].value - 1e-9);
    CHECK(s.tail_mass[i] <= s.tail_mass[i - 1]);
  }

  const auto gp = truncation_ladder(gauss_poisson_family(1.0), even);
  for (const auto& r : gp.reports) CHECK(r.value <= 0.999);
  CHECK(std::abs(gp.reports.back().value - 0.740991) < 1e-5);
  for (int t : {2, 5}) CHECK(gauss_poisson_joint(1.0, t).probs().sum() == Approx(1.0).epsilon(1e-14));

  // A family whose value drops from level 1 to level 2.
  LadderGenerator bad = [](int level) {
    const double r = level == 1 ? 0.6 : 0.2;
    return LadderRung{instances::bernoulli_joint(instances::bernoulli_params(0.5, 0.5, r)), 0.0};
  };
  const std::vector<int> two{1, 2};
  CHECK_ERROR(truncation_ladder(bad, two), MonotonicityViolation);
  const std::vector<int> unsorted{2, 1};
  CHECK_ERROR(truncation_ladder(skellam_family(1.0), unsorted), BadIndices);
}

TEST_CASE("samplers are reproducible") {
  const auto a = sample(MarshallOlkin{1, 1, 1}, 1000, 42);
  const auto b = sample(MarshallOlkin{1, 1, 1}, 1000, 42);
  const auto c = sample(MarshallOlkin{1, 1, 1}, 1000, 43);
  CHECK(a.pairs == b.pairs);
  CHECK(a.pairs != c.pairs);
  CHECK(a.generator == "marshall_olkin/mt19937_64");
  CHECK(a.seed == 42);
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}

TEST_CASE("sampler distributions") {
  SUBCASE("independent gaussians") {
    const std::size_t n = 100000;
    const auto s = sample(BivariateGaussian{0.0}, n, 1);
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (auto [x, y] : s.pairs) {
      sx += x, sy += y, sxy += x * y, sxx += x * x, syy += y * y;
    }
    const double mx = sx / n, my = sy / n;
    const double corr = (sxy / n - mx * my) / std::sqrt((sxx / n - mx * mx) * (syy / n - my * my));
    CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(sxx / n - 1.0) < 0.03);
  }
  SUBCASE("marshall-olkin ties") {
    const std::size_t n = 200000;
    const auto s = sample(MarshallOlkin{1, 1, 1}, n, 2);
    std::size_t ties = 0;
    for (auto [x, y] : s.pairs) ties += x == y;
    CHECK(std::abs(static_cast<double>(ties) / n - 1.0 / 3.0) < 0.005);
  }
  SUBCASE("random walk increments") {
    const auto inc = instances::bernoulli_joint({0.1, 0.2, 0.3, 0.4});
    const std::size_t n = 100000;
    const auto s = sample(RandomWalkPair{inc, 1}, n, 3);
    REQUIRE(s.pairs.size() == n);
    double counts[2][2] = {{0, 0}, {0, 0}};
    for (auto [x, y] : s.pairs) counts[static_cast<int>(x)][static_cast<int>(y)] += 1;
    const double p[2][2] = {{0.1, 0.2}, {0.3, 0.4}};
    double chi2 = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) chi2 += std::pow(counts[i][k] - n * p[i][k], 2) / (n * p[i][k]);
    CHECK(chi2 < 16.27);  // 3 degrees of freedom, 0.1% level

    const auto walk = sample(RandomWalkPair{inc, 5}, 10, 3);
    CHECK(walk.pairs.size() == 50);
    for (std::size_t w = 0; w < 10; ++w)
      for (std::size_t i = 1; i < 5; ++i) CHECK(walk.pairs[w * 5 + i].first >= walk.pairs[w * 5 + i - 1].first);
  }
  SUBCASE("stable draws are finite") {
    for (double alpha : {0.5, 1.0, 1.5}) {
      const auto s = sample(StableCms{alpha, 0.0, 1.0}, 1000, 4);
      for (auto [x, y] : s.pairs) CHECK((std::isfinite(x) && std::isfinite(y)));
    }
  }
}

TEST_CASE("quantile_bins") {
  const std::vector<double> v{5, 1, 3, 3, 3, 2, 4, 0};
  const auto b = quantile_bins(v, 4);
  CHECK(b[7] == 0);
  CHECK(b[1] == 0);
  CHECK(b[2] == b[3]);
  CHECK(b[3] == b[4]);
  CHECK(b[0] == 3);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t k = 0; k < v.size(); ++k)
      if (v[i] < v[k]) CHECK(b[i] <= b[k]);
}

TEST_CASE("binned_empirical_mc") {
  SampleBatch constant{std::vector<std::pair<double, double>>(100, {1.0, 2.0}), 0, "manual"};
  CHECK_ERROR(binned_empirical_mc(constant, 10, 10), DegenerateAxis);

  SampleBatch uniforms;
  instances::Rng rng(5);
  for (int i = 0; i < 100000; ++i) uniforms.pairs.emplace_back(instances::uniform(rng), instances::uniform(rng));
  const auto u = binned_empirical_mc(uniforms, 20, 20);
  CHECK(u.value <= 0.05);
  CHECK(u.method == Method::BinnedEmpirical);

  const auto g = binned_empirical_mc(sample(BivariateGaussian{0.5}, 1000000, 6), 50, 50);
  CHECK(std::abs(g.value - 0.5) < 0.02);
  CHECK(std::get<double>(g.notes.at("sample_size")) == 1000000.0);

  const auto m = binned_empirical_mc(sample(MarshallOlkin{1, 1, 1}, 1000000, 42), 50, 50);
  CHECK(std::abs(m.value - closed_forms::marshall_olkin_mc(1, 1, 1)) < m.tolerance);
}

TEST_CASE("csv round trip") {
  const auto s = sample(BivariateGaussian{0.3}, 50, 7);
  std::stringstream buf;
  write_csv(buf, s);
  CHECK(read_csv(buf) == s.pairs);

  std::stringstream bare;
  write_csv(bare, s, false);
  CHECK(read_csv(bare) == s.pairs);

  std::stringstream bad("x,y\n1,2\n3,oops\n");
  CHECK_ERROR(read_csv(bad), ParseError);
}
