#include "maxcorr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "maxcorr/closed_forms.hpp"
#include "maxcorr/discrete_core.hpp"
#include "maxcorr/error.hpp"
#include "maxcorr/estimators.hpp"
#include "maxcorr/instances.hpp"
#include "maxcorr/stable_levy.hpp"
#include "maxcorr/subset_schemes.hpp"

namespace maxcorr::verify {
namespace {

using instances::Rng;
namespace cf = closed_forms;
namespace sl = stable_levy;
namespace ss = subsets;
namespace est = estimators;

constexpr double kPi = std::numbers::pi;

VerifyCase make_case(std::string id, std::string source, double expected, double computed,
                     double tolerance) {
  VerifyCase c;
  c.id = std::move(id);
  c.source = std::move(source);
  c.expected = expected;
  c.computed = computed;
  c.tolerance = tolerance;
  return c;
}

// Violation cases: expected 0, computed is the worst excess.
VerifyCase at_most(std::string id, double worst_excess, double tolerance) {
  return make_case(std::move(id), "oracle", 0.0, std::max(0.0, worst_excess), tolerance);
}

// [lo, hi] encoded as midpoint plus half-width.
VerifyCase within(std::string id, std::string source, double lo, double hi, double computed) {
  return make_case(std::move(id), std::move(source), 0.5 * (lo + hi), computed, 0.5 * (hi - lo));
}

double mc(const FiniteJoint& j) { return max_corr(j).value; }

std::vector<VerifyCase> determinant_grid() {
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    for (int k = 0; k < 20; ++k) {
      const double pa = 0.05 + 0.9 * i / 19.0;
      const double pc = 0.05 + 0.9 * k / 19.0;
      const double r = ((i + 3 * k) % 10 + 0.5) / 10.0 * instances::bernoulli_max_r(pa, pc);
      auto p = instances::bernoulli_params(pa, pc, r);
      if ((i + k) % 2 == 1) p = {p.p_ad, p.p_ac, p.p_bd, p.p_bc};
      worst = std::max(worst, std::abs(mc(instances::bernoulli_joint(p)) - cf::bernoulli_2x2_mc(p)));
    }
  }
  const cf::Bernoulli2x2Params fixed{0.4, 0.1, 0.2, 0.3};
  return {at_most("svd-vs-determinant-400", worst, 1e-10),
          make_case("table-0.4-0.1-0.2-0.3", "oracle", cf::bernoulli_2x2_mc(fixed),
                    mc(instances::bernoulli_joint(fixed)), 1e-10)};
}

std::vector<VerifyCase> x_bx_joint() {
  Eigen::MatrixXd t(2, 2);
  t << 0.5, 0.0, 0.25, 0.25;
  const double v = mc(validate_joint(t));
  return {make_case("x-bx-value", "reference", 1.0 / std::sqrt(3.0), v, 1e-9),
          at_most("x-bx-below-sqrt-p", v - std::sqrt(0.5) + 1e-6, 0.0)};
}

std::vector<VerifyCase> csaki_fischer() {
  Rng rng(2023);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto a = instances::random_joint(rng, instances::uniform_int(rng, 2, 5),
                                           instances::uniform_int(rng, 2, 5), 0.2);
    const auto b = instances::random_joint(rng, instances::uniform_int(rng, 2, 5),
                                           instances::uniform_int(rng, 2, 5), 0.2);
    worst = std::max(worst, std::abs(mc(product_joint(a, b)) - std::max(mc(a), mc(b))));
  }
  return {at_most("product-equals-max-200", worst, 1e-9)};
}

std::vector<VerifyCase> random_walks() {
  Rng rng(7);
  double worst_path = 0.0, worst_sum = -1.0;
  for (int i = 0; i < 20; ++i) {
    const auto inc = instances::bernoulli_joint(instances::random_bernoulli(rng));
    const double r = mc(inc);
    for (int m : {2, 3}) worst_path = std::max(worst_path, std::abs(mc(random_walk_path_joint(inc, m)) - r));
    for (int m = 1; m <= 8; ++m) worst_sum = std::max(worst_sum, mc(sum_pair_joint(inc, m)) - r);
  }
  const auto centered = instances::bernoulli_joint(instances::bernoulli_params(0.5, 0.5, 0.5),
                                                   {"-1", "1"}, {"-1", "1"});
  std::vector<double> trend;
  for (int m : {1, 2, 4, 8}) trend.push_back(mc(sum_pair_joint(centered, m)));
  const double top = *std::max_element(trend.begin(), trend.end());
  return {at_most("path-equals-increment-20x2", worst_path, 1e-9),
          at_most("sum-pair-below-increment", worst_sum, 1e-9),
          at_most("centered-sum-pair-below-rho", top - 0.5, 1e-9),
          at_most("centered-m8-not-below-m1", trend.front() - trend.back(), 1e-9)};
}

std::vector<VerifyCase> nested_brute_force() {
  double worst = 0.0;
  int count = 0;
  for (int n = 1; n <= 6; ++n)
    for (int m = 0; m <= n; ++m)
      for (int k = 0; k <= m; ++k) {
        const double v = ss::subset_pair_mc(ss::uniform_nested(n, m, k)).value;
        worst = std::max(worst, std::abs(v - cf::nested_subsets_mc(n, m, k)));
        ++count;
      }
  return {at_most("nested-all-" + std::to_string(count), worst, 1e-9),
          make_case("nested-3-2-1", "reference", 0.5, ss::subset_pair_mc(ss::uniform_nested(3, 2, 1)).value,
                    1e-9)};
}

std::vector<VerifyCase> subvector_oracle() {
  Rng rng(11);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int n = instances::uniform_int(rng, 1, 3);
    const auto scheme = instances::random_scheme(rng, n, instances::uniform_int(rng, 1, 6));
    const double p = i % 2 == 0 ? 0.5 : 1.0 / 3.0;
    const std::vector<ss::FiniteLaw> laws(static_cast<std::size_t>(n), ss::FiniteLaw{1.0 - p, p});
    const double brute = mc(ss::brute_force_subvector_joint(scheme, laws));
    worst = std::max(worst, std::abs(brute - ss::subsample_mc(scheme).value));
  }
  // U uniform 1-subset of S, S uniform 2-subset of [3].
  const double tagged = ss::subsample_mc(ss::uniform_nested(3, 2, 1)).value;
  return {at_most("brute-force-equals-max-formula-50", worst, 1e-9),
          make_case("tagged-nested-1-in-2", "reference", std::sqrt(0.5), tagged, 1e-9)};
}

std::vector<VerifyCase> empirical_measures() {
  std::vector<VerifyCase> out;
  const std::vector<std::pair<std::string, ss::FiniteLaw>> laws{
      {"bern-1/2", {0.5, 0.5}}, {"bern-1/3", {2.0 / 3.0, 1.0 / 3.0}}, {"ternary", {1 / 3.0, 1 / 3.0, 1 / 3.0}}};
  for (auto [n, m, l] : {std::tuple{3, 2, 1}, std::tuple{4, 2, 1}, std::tuple{4, 3, 1}}) {
    for (const auto& [name, law] : laws) {
      char id[64];
      std::snprintf(id, sizeof id, "counts-%d-%d-%d-%s", n, m, l, name.c_str());
      out.push_back(make_case(id, "reference", cf::dksy_mc(l, m, n),
                              mc(ss::empirical_measure_joint(n, m, l, law)), 1e-9));
    }
  }
  return out;
}

std::vector<VerifyCase> stable_consistency() {
  double worst_pos = 0.0, worst_neg = 0.0;
  for (double alpha : {0.5, 1.0, 1.5})
    for (double lambda : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0})
      for (auto [cm, cp] : {std::pair{1.0, 1.0}, std::pair{1.0, 2.0}, std::pair{3.0, 1.0}}) {
        const double op = sl::opnu_stable(sl::bdk_tau(alpha, lambda, cm, cp), alpha).value;
        const double diff = std::abs(op - cf::bdk_mc(alpha, lambda, cm, cp));
        (lambda > 0 ? worst_pos : worst_neg) = std::max(lambda > 0 ? worst_pos : worst_neg, diff);
      }

  std::vector<std::pair<sl::SpectralMeasure, double>> symmetric{
      {sl::SpectralMeasure::uniform(), 1.0},
      {sl::SpectralMeasure::make({{kPi / 4, 1.0}, {5 * kPi / 4, 1.0}}), 1.0},
      {sl::SpectralMeasure::make({{2.0, 0.7}, {2.0 + kPi, 0.7}}, {{0.0, 1.0, 1.0}, {kPi, kPi + 1.0, 1.0}}),
       1.5},
  };
  for (double alpha : {0.5, 1.0, 1.5})
    for (double lambda : {-1.0, 2.0}) symmetric.emplace_back(sl::bdk_tau(alpha, lambda, 2.0, 2.0), alpha);
  double worst_sym = 0.0;
  for (const auto& [tau, alpha] : symmetric) {
    worst_sym = std::max(worst_sym, std::abs(sl::opnu_stable(tau, alpha).value -
                                             sl::hilbert_hardy_symmetric(tau, alpha)));
  }
  return {at_most("bdk-grid-positive-lambda", worst_pos, 1e-9),
          at_most("bdk-grid-negative-lambda", worst_neg, 1e-9),
          at_most("symmetric-scalar-formula", worst_sym, 1e-9),
          make_case("bdk-alpha1-lambda2", "reference", 1.0 / std::sqrt(3.0),
                    sl::opnu_stable(sl::bdk_tau(1.0, 2.0, 1.0, 1.0), 1.0).value, 1e-9),
          make_case("bdk-alpha1-lambda-1-c12", "reference", 1.0 / std::sqrt(1.5),
                    sl::opnu_stable(sl::bdk_tau(1.0, -1.0, 1.0, 2.0), 1.0).value, 1e-9)};
}

std::vector<VerifyCase> skellam() {
  const std::vector<int> levels{2, 4, 6, 8, 10};
  const auto ladder = est::truncation_ladder(est::skellam_family(1.0), levels);
  std::vector<VerifyCase> out{
      make_case("skellam-trunc-10", "reference", 0.8321, ladder.reports.back().value, 5e-3)};
  double drop = 0.0;
  for (std::size_t i = 1; i < ladder.reports.size(); ++i)
    drop = std::max(drop, ladder.reports[i - 1].value - ladder.reports[i].value);
  out.push_back(at_most("skellam-ladder-monotone", drop, tol::kLadder));
  return out;
}

std::vector<VerifyCase> atom_measures() {
  Rng rng(5);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    std::vector<sl::JumpAtom> atoms;
    const int count = instances::uniform_int(rng, 1, 8);
    for (int a = 0; a < count; ++a) {
      double x = instances::uniform(rng, 0.1, 3.0), y = instances::uniform(rng, 0.1, 3.0);
      if (instances::uniform(rng) < 0.5) x = -x;
      if (instances::uniform(rng) < 0.5) y = -y;
      atoms.push_back({x, y, instances::uniform(rng, 0.1, 2.0)});
    }
    worst = std::max(worst, std::abs(sl::opnu_atoms(atoms).value - 1.0));
  }
  return {at_most("off-axis-atoms-give-one-20", worst, 1e-12),
          make_case("common-jump", "reference", 1.0, sl::opnu_atoms({{1, 1, 1}}).value, 1e-12),
          make_case("difference-and-count", "reference", 1.0,
                    sl::opnu_atoms({{1, 1, 1}, {-1, 0, 1}}).value, 1e-12),
          make_case("no-common-jumps", "oracle", 0.0, sl::opnu_atoms({{1, 0, 1}, {0, 1, 1}}).value, 0.0)};
}

std::vector<VerifyCase> gaussian_binning() {
  const std::vector<int> levels{1, 2, 3, 4, 5, 6, 7};
  const auto ladder = est::truncation_ladder(est::gaussian_binning_family(0.5), levels);
  double drop = 0.0, top = 0.0;
  for (std::size_t i = 0; i < ladder.reports.size(); ++i) {
    top = std::max(top, ladder.reports[i].value);
    if (i > 0) drop = std::max(drop, ladder.reports[i - 1].value - ladder.reports[i].value);
  }
  return {at_most("binned-ladder-monotone", drop, tol::kLadder),
          at_most("binned-ladder-below-rho", top - 0.5, 1e-6),
          within("binned-128-reaches", "oracle", 0.49, 0.5 + 1e-6, ladder.reports.back().value)};
}

std::vector<VerifyCase> marshall_olkin() {
  const auto batch = est::sample(est::MarshallOlkin{1, 1, 1}, 1000000, 42);
  const double v = est::binned_empirical_mc(batch, 50, 50).value;
  return {within("mo-binned-range", "oracle", 0.40, 0.52, v),
          at_most("mo-binned-below-closed-form", v - cf::marshall_olkin_mc(1, 1, 1), 0.02)};
}

std::vector<VerifyCase> fisher() {
  std::vector<VerifyCase> out;
  {
    const auto scheme = ss::SubsetPairScheme::make(2, {{{1, 3}, 0.5}, {{2, 3}, 0.5}});
    const std::vector<double> var{1.0, 1.0};
    const auto gap = ss::fisher_gap_gaussian(scheme, var, {{1, 1.0}, {2, 1.0}});
    out.push_back(make_case("singleton-in-pair-lhs", "oracle", 0.5, gap.lhs, 1e-12));
    out.push_back(make_case("singleton-in-pair-rhs", "oracle", 0.5, gap.rhs, 1e-12));
  }
  Rng rng(13);
  {
    // S = T a.s.: both sides coincide.
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const int n = instances::uniform_int(rng, 1, 4);
      ss::PairTable table;
      for (int p = 0; p < 4; ++p) {
        const auto s = static_cast<ss::Mask>(instances::uniform_int(rng, 1, (1 << n) - 1));
        table[{s, s}] += instances::uniform(rng, 0.1, 1.0);
      }
      double total = 0.0;
      for (auto& [k, p] : table) total += p;
      for (auto& [k, p] : table) p /= total;
      const auto scheme = ss::SubsetPairScheme::make(n, table);
      std::vector<double> var;
      for (int j = 0; j < n; ++j) var.push_back(instances::uniform(rng, 0.5, 2.0));
      std::map<ss::Mask, double> lambda;
      for (const auto& [st, p] : table) lambda[st.first] = instances::uniform(rng, -2.0, 2.0);
      const auto gap = ss::fisher_gap_gaussian(scheme, var, lambda);
      worst = std::max(worst, std::abs(gap.lhs - gap.rhs));
    }
    out.push_back(at_most("identical-subsets-equality", worst, 1e-12));
  }
  double worst = -1.0;
  for (int i = 0; i < 100; ++i) {
    const int n = instances::uniform_int(rng, 1, 4);
    const auto scheme = instances::random_nested_scheme(rng, n, instances::uniform_int(rng, 1, 8));
    std::vector<double> var;
    for (int j = 0; j < n; ++j) var.push_back(instances::uniform(rng, 0.5, 2.0));
    std::map<ss::Mask, double> lambda;
    for (const auto& [st, p] : scheme.table()) lambda[st.first] = instances::uniform(rng, -2.0, 2.0);
    const auto gap = ss::fisher_gap_gaussian(scheme, var, lambda);
    worst = std::max(worst, gap.lhs - gap.rhs);
  }
  out.push_back(at_most("nested-inequality-100", worst, 1e-9));
  return out;
}

std::vector<VerifyCase> properties() {
  Rng rng(99);
  double dp = 0.0, sub = 0.0, transpose = 0.0;
  int indep_fail = 0, decomp_fail = 0;
  for (int i = 0; i < 100; ++i) {
    const auto j = instances::random_joint(rng, 4, 4, 0.3);
    std::vector<int> gx(4), gy(4);
    for (auto& g : gx) g = instances::uniform_int(rng, 0, 2);
    for (auto& g : gy) g = instances::uniform_int(rng, 0, 2);
    const auto mapped = map_states(
        j, [&](const Label& l) { return std::to_string(gx[std::stoul(l)]); },
        [&](const Label& l) { return std::to_string(gy[std::stoul(l)]); });
    dp = std::max(dp, mc(mapped) - mc(j));
    transpose = std::max(transpose, std::abs(mc(j) - mc(j.transposed())));

    const auto xy = instances::random_joint(rng, 3, 3, 0.2);
    const auto kernel = instances::random_table(rng, 3, 2);
    Eigen::MatrixXd k = kernel;
    for (int r = 0; r < 3; ++r) k.row(r) /= k.row(r).sum();
    const auto triple = markov_triple_joint(make_markov_triple(xy, k));
    sub = std::max(sub, mc(triple.xz) - mc(xy) * mc(triple.yz));
  }
  for (int i = 0; i < 50; ++i) {
    const int rows = instances::uniform_int(rng, 2, 5), cols = instances::uniform_int(rng, 2, 5);
    Eigen::VectorXd px(rows), py(cols);
    for (int r = 0; r < rows; ++r) px(r) = instances::uniform(rng, 0.05, 1.0);
    for (int c = 0; c < cols; ++c) py(c) = instances::uniform(rng, 0.05, 1.0);
    if (mc(independent_joint(px / px.sum(), py / py.sum())) > 1e-10) ++indep_fail;
    if (mc(instances::random_joint(rng, rows, cols)) <= 1e-10) ++indep_fail;

    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(rows + 2, cols + 2);
    block.topLeftCorner(rows, cols) = instances::random_table(rng, rows, cols);
    block.bottomRightCorner(2, 2) = instances::random_table(rng, 2, 2, 0.3);
    if (std::abs(mc(validate_joint(block / block.sum())) - 1.0) > 1e-8) ++decomp_fail;
    // A strictly positive table has a connected support graph.
    if (mc(instances::random_joint(rng, rows, cols)) >= 1.0 - 1e-8) ++decomp_fail;
  }
  return {at_most("data-processing-100", dp, 1e-9),
          at_most("submultiplicative-100", sub, 1e-9),
          at_most("transpose-symmetry-100", transpose, 1e-10),
          at_most("independence-iff-rank-one-100", indep_fail, 0.0),
          at_most("decomposable-iff-disconnected-100", decomp_fail, 0.0)};
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "paper-core", "2x2 SVD matches the determinant formula on a 400-point grid", 1.0, determinant_grid},
      {2, "paper-core", "(X, BX) joint gives 1/sqrt(3), below sqrt(p)", 0.5, x_bx_joint},
      {3, "paper-core", "maximal correlation of independent pairs is the larger one", 5.0, csaki_fischer},
      {4, "paper-core", "random-walk paths keep the increment value; sums stay below it", 10.0, random_walks},
      {5, "subsets", "nested uniform subsets match the closed form for n <= 6", 10.0, nested_brute_force},
      {6, "subsets", "tagged subvectors match max(R(S,T), max r_j)", 30.0, subvector_oracle},
      {7, "subsets", "empirical count vectors match (m-l)/sqrt(m(n-l))", 30.0, empirical_measures},
      {8, "stable", "stable Op(nu) reproduces the BDK formulas and the symmetric scalar form", 5.0,
       stable_consistency},
      {9, "estimators", "censored Skellam/Poisson ladder approaches 0.8321", 5.0, skellam},
      {10, "stable", "finite-atom jump measures", 0.5, atom_measures},
      {11, "estimators", "exact Gaussian binning ladder rises to rho", 60.0, gaussian_binning},
      {12, "estimators", "binned Marshall-Olkin sample stays near 1/2", 60.0, marshall_olkin},
      {13, "subsets", "Gaussian Fisher-information inequality", 10.0, fisher},
      {14, "paper-core", "property corpora", 30.0, properties},
  };
  return all;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"paper-core", "stable", "subsets", "estimators", "all"};
  return names;
}

VerifySuiteResult run_suite(std::string_view suite) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw Error(ErrorKind::BadIndices, "unknown suite '" + std::string(suite) + "'");
  }
  VerifySuiteResult result;
  for (const auto& c : criteria()) {
    if (suite != "all" && c.suite != suite) continue;
    std::vector<VerifyCase> cases;
    try {
      cases = c.run();
    } catch (const std::exception& e) {
      VerifyCase failed = make_case(std::string("error: ") + e.what(), "oracle", 0.0, 1.0, 0.0);
      cases.push_back(failed);
    }
    for (auto& vc : cases) {
      vc.criterion = c.number;
      vc.suite = c.suite;
      vc.pass = std::abs(vc.expected - vc.computed) <= vc.tolerance;
      (vc.pass ? result.passed : result.failed) += 1;
      result.cases.push_back(std::move(vc));
    }
  }
  return result;
}

}  // namespace maxcorr::verify
