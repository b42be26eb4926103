#include <cmath>
#include <map>

#include "maxcorr/closed_forms.hpp"
#include "maxcorr/instances.hpp"
#include "maxcorr/subset_schemes.hpp"
#include "support.hpp"

using namespace maxcorr;
using namespace maxcorr::subsets;
using doctest::Approx;

namespace {

double mc(const FiniteJoint& j) { return max_corr(j).value; }

SubsetLaw uniform_singletons(int n) {
  SubsetLaw law;
  for (int i = 0; i < n; ++i) law[Mask{1} << i] = 1.0 / n;
  return law;
}

// Row-sum route for r_j: C_uv = sum_{s contains j} P(S=s|U=u) P(U=v|S=s)
// over the tagged pairs (U, S). For uniform nested schemes C has constant
// row sums, which give the top eigenvalue r_j^2.
double rj_row_sum(const SubsetPairScheme& scheme, int j) {
  const Mask bit = Mask{1} << j;
  const auto law_u = scheme.s_law();
  const auto law_s = scheme.t_law();
  std::map<Mask, std::map<Mask, double>> p;  // p[u][s]
  for (const auto& [us, w] : scheme.table()) p[us.first][us.second] += w;
  std::map<Mask, double> rows;
  for (const auto& [u, row] : p) {
    if (!(u & bit)) continue;
    double sum = 0.0;
    for (const auto& [s, w] : row) {
      if (!(s & bit)) continue;
      const double s_given_u = w / law_u.at(u);
      for (const auto& [v, row_v] : p) {
        if (!(v & bit)) continue;
        const auto it = row_v.find(s);
        if (it != row_v.end()) sum += s_given_u * it->second / law_s.at(s);
      }
    }
    rows[u] = sum;
  }
  double lo = 1e300, hi = 0.0;
  for (const auto& [u, r] : rows) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  REQUIRE(hi - lo < 1e-12);
  return std::sqrt(hi);
}

}  // namespace

TEST_CASE("scheme constructors") {
  const auto a = uniform_nested(2, 1, 1);
  CHECK(a.table().size() == 2);
  for (const auto& [st, p] : a.table()) CHECK(p == Approx(0.5));

  const auto b = uniform_nested(3, 2, 1);
  CHECK(b.table().size() == 6);
  for (const auto& [st, p] : b.table()) {
    CHECK(p == Approx(1.0 / 6.0));
    CHECK((st.first & ~st.second) == 0u);
  }

  const auto c = independent_scheme(2, uniform_singletons(2), uniform_singletons(2));
  CHECK(c.table().size() == 4);
  for (const auto& [st, p] : c.table()) CHECK(p == Approx(0.25));

  CHECK_ERROR(uniform_nested(3, 2, 3), BadIndices);
  CHECK_ERROR(uniform_nested(13, 2, 1), BadIndices);
  CHECK_ERROR(SubsetPairScheme::make(2, {{{1, 4}, 1.0}}), BadIndices);
  CHECK_ERROR(SubsetPairScheme::make(2, {{{1, 2}, 0.7}}), MassNotOne);
  CHECK_ERROR(SubsetPairScheme::make(2, {{{1, 2}, 1.2}, {{1, 1}, -0.2}}), NegativeMass);
  CHECK(subset_label(0b101) == "{1,3}");
  CHECK(subset_label(0) == "{}");
}

TEST_CASE("subset_pair_mc") {
  CHECK(std::abs(subset_pair_mc(uniform_nested(3, 2, 1)).value - 0.5) < 1e-10);
  CHECK(std::abs(subset_pair_mc(uniform_nested(4, 2, 1)).value - std::sqrt(1.0 / 3.0)) < 1e-10);
  CHECK(subset_pair_mc(independent_scheme(3, uniform_singletons(3), uniform_singletons(3))).value < 1e-10);
  CHECK(subset_pair_mc(uniform_nested(5, 5, 2)).value < 1e-10);

  for (int n = 1; n <= 8; ++n)
    for (int m = 1; m <= n; ++m)
      for (int k = 1; k <= m; ++k)
        CHECK(std::abs(subset_pair_mc(uniform_nested(n, m, k)).value - closed_forms::nested_subsets_mc(n, m, k)) <
              1e-9);
  for (int n = 2; n <= 8; ++n)
    for (int k = 1; k < n; ++k)
      CHECK(std::abs(subset_pair_mc(uniform_nested(n, n - 1, k)).value -
                     std::sqrt(static_cast<double>(k) / ((n - 1.0) * (n - k)))) < 1e-9);
}

TEST_CASE("rj") {
  SubsetLaw ls{{0b01, 0.5}, {0b11, 0.25}, {0b00, 0.25}};
  SubsetLaw lt{{0b10, 0.4}, {0b11, 0.2}, {0b01, 0.4}};
  const auto ind = independent_scheme(2, ls, lt);
  CHECK(std::abs(rj(ind, 0) - closed_forms::independent_rj(0.75, 0.6)) < 1e-10);
  CHECK(std::abs(rj(ind, 1) - closed_forms::independent_rj(0.25, 0.6)) < 1e-10);

  for (auto [n, m, k] : {std::tuple{3, 2, 1}, std::tuple{4, 3, 2}, std::tuple{5, 3, 1}, std::tuple{6, 4, 3}}) {
    const auto s = uniform_nested(n, m, k);
    for (int j = 0; j < n; ++j) {
      const double oracle = rj_row_sum(s, j);
      CHECK(std::abs(oracle - std::sqrt(static_cast<double>(k) / m)) < 1e-12);
      CHECK(std::abs(rj(s, j) - oracle) < 1e-10);
    }
  }

  const auto full = SubsetPairScheme::make(3, {{{7, 7}, 1.0}});
  for (int j = 0; j < 3; ++j) CHECK(rj(full, j) == Approx(1.0));
  CHECK(rj(SubsetPairScheme::make(2, {{{1, 2}, 1.0}}), 0) == 0.0);
  CHECK_ERROR(rj(full, 3), BadIndices);
}

TEST_CASE("restricted norms shrink as the subset grows") {
  instances::Rng rng(20);
  for (int i = 0; i < 40; ++i) {
    const auto s = instances::random_scheme(rng, 3, instances::uniform_int(rng, 2, 10));
    for (Mask u = 1; u < 8; ++u)
      for (Mask v = 1; v < 8; ++v)
        if ((u & v) == u && std::popcount(v) <= 2) CHECK(restricted_norm(s, u) >= restricted_norm(s, v) - 1e-12);
  }
}

TEST_CASE("subsample_mc") {
  const auto two = independent_scheme(2, uniform_singletons(2), uniform_singletons(2));
  const auto r = subsample_mc(two);
  CHECK(std::abs(r.value - 0.5) < 1e-10);
  const std::vector<FiniteLaw> laws(2, FiniteLaw{0.5, 0.5});
  CHECK(std::abs(mc(brute_force_subvector_joint(two, laws)) - 0.5) < 1e-9);

  CHECK(std::abs(subsample_mc(uniform_nested(3, 2, 1)).value - std::sqrt(0.5)) < 1e-10);
  CHECK(subsample_mc(SubsetPairScheme::make(3, {{{7, 7}, 1.0}})).value == Approx(1.0));
}

TEST_CASE("brute_force_subvector_joint") {
  const FiniteLaw half{0.5, 0.5};
  CHECK(mc(brute_force_subvector_joint(SubsetPairScheme::make(1, {{{1, 1}, 1.0}}), {half})) == Approx(1.0));

  const auto half_present = SubsetPairScheme::make(1, {{{1, 1}, 0.5}, {{0, 1}, 0.5}});
  CHECK(std::abs(mc(brute_force_subvector_joint(half_present, {half})) - std::sqrt(0.5)) < 1e-9);

  instances::Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    const int n = instances::uniform_int(rng, 2, 3);
    const auto s = instances::random_scheme(rng, n, instances::uniform_int(rng, 1, 7));
    for (double p : {0.5, 1.0 / 3.0}) {
      const std::vector<FiniteLaw> laws(static_cast<std::size_t>(n), FiniteLaw{1.0 - p, p});
      CHECK(std::abs(mc(brute_force_subvector_joint(s, laws)) - subsample_mc(s).value) < 1e-9);
    }
  }

  CHECK_ERROR(brute_force_subvector_joint(uniform_nested(3, 3, 3), {half, half, half}, 10), SizeOverflow);
  CHECK_ERROR(brute_force_subvector_joint(half_present, {FiniteLaw{1.0, 0.0}}), DegenerateAxis);
}

TEST_CASE("empirical_measure_joint") {
  const FiniteLaw half{0.5, 0.5}, third{2.0 / 3.0, 1.0 / 3.0}, ternary{1 / 3.0, 1 / 3.0, 1 / 3.0};
  CHECK(mc(empirical_measure_joint(3, 3, 0, half)) == Approx(1.0));
  CHECK(std::abs(mc(empirical_measure_joint(3, 2, 1, half)) - 0.5) < 1e-9);
  CHECK(std::abs(mc(empirical_measure_joint(4, 2, 1, third)) - 1.0 / std::sqrt(6.0)) < 1e-9);

  for (int n = 2; n <= 6; ++n)
    for (int m = 1; m <= n; ++m)
      for (int l = 0; l < m; ++l)
        for (const auto& law : {half, third, ternary}) {
          if (law.size() == 3 && n > 5) continue;
          CHECK(std::abs(mc(empirical_measure_joint(n, m, l, law)) - closed_forms::dksy_mc(l, m, n)) < 1e-9);
        }
  CHECK_ERROR(empirical_measure_joint(4, 2, 2, half), BadIndices);
  CHECK_ERROR(empirical_measure_joint(6, 3, 1, ternary, 50), SizeOverflow);
}

TEST_CASE("ANOVA decomposition") {
  const std::vector<FiniteLaw> laws{{0.3, 0.7}, {0.5, 0.5}, {0.2, 0.8}};
  SUBCASE("constant") {
    ProductTable psi{{2, 2, 2}, std::vector<double>(8, 4.5)};
    const auto d = anova_decompose(psi, laws);
    CHECK(d.components.size() == 8);
    for (const auto& [u, c] : d.components) {
      for (double v : c.table.values) CHECK(std::abs(v - (u == 0 ? 4.5 : 0.0)) < 1e-12);
    }
  }
  SUBCASE("centered first coordinate") {
    ProductTable psi{{2, 2}, {}};
    psi.values.resize(4);
    for (std::size_t f = 0; f < 4; ++f) psi.values[f] = psi.coords_of(f)[0] == 0 ? -0.5 : 0.5;
    const std::vector<FiniteLaw> even{{0.5, 0.5}, {0.4, 0.6}};
    const auto d = anova_decompose(psi, even);
    for (const auto& [u, c] : d.components) {
      double norm = 0.0;
      for (double v : c.table.values) norm += v * v;
      if (u == 0b01) CHECK(norm > 0.1);
      else CHECK(norm < 1e-24);
    }
  }
  SUBCASE("random tables: orthogonal, complete, local") {
    instances::Rng rng(22);
    for (int trial = 0; trial < 20; ++trial) {
      ProductTable psi{{2, 2, 2}, {}};
      for (int f = 0; f < 8; ++f) psi.values.push_back(instances::uniform(rng, -1.0, 1.0));
      const auto d = anova_decompose(psi, laws);
      const auto sum = d.reconstruct();
      for (std::size_t f = 0; f < 8; ++f) CHECK(std::abs(sum[f] - psi.values[f]) < 1e-10);

      auto weight = [&](std::size_t f) {
        const auto c = psi.coords_of(f);
        return laws[0][c[0]] * laws[1][c[1]] * laws[2][c[2]];
      };
      double mean = 0.0;
      for (std::size_t f = 0; f < 8; ++f) mean += weight(f) * psi.values[f];
      CHECK(std::abs(d.components.at(0).table.values.at(0) - mean) < 1e-12);

      for (Mask u = 0; u < 8; ++u)
        for (Mask v = u + 1; v < 8; ++v) {
          const auto a = d.expand(u), b = d.expand(v);
          double inner = 0.0;
          for (std::size_t f = 0; f < 8; ++f) inner += weight(f) * a[f] * b[f];
          CHECK(std::abs(inner) < 1e-10);
        }

      // A function of coordinates {1,2} only has no components involving 3.
      ProductTable local{{2, 2, 2}, std::vector<double>(8)};
      for (std::size_t f = 0; f < 8; ++f) {
        const auto c = local.coords_of(f);
        local.values[f] = psi.values[c[0] + 2 * c[1]];
      }
      const auto dl = anova_decompose(local, laws);
      for (const auto& [u, comp] : dl.components)
        if (u & 0b100)
          for (double v : comp.table.values) CHECK(std::abs(v) < 1e-12);
    }
  }
  CHECK_ERROR(anova_decompose(ProductTable{std::vector<std::size_t>(11, 2), std::vector<double>(2048)},
                              std::vector<FiniteLaw>(11, FiniteLaw{0.5, 0.5})),
              SizeOverflow);
}

TEST_CASE("fisher_gap_gaussian") {
  SUBCASE("S = T") {
    const auto s = SubsetPairScheme::make(3, {{{1, 1}, 0.3}, {{6, 6}, 0.7}});
    const std::vector<double> var{1.0, 2.0, 0.5};
    const auto g = fisher_gap_gaussian(s, var, {{1, 2.0}, {6, -1.0}});
    CHECK(g.r == Approx(1.0));
    CHECK(std::abs(g.lhs - g.rhs) < 1e-12);
  }
  SUBCASE("singleton inside the pair") {
    const auto s = SubsetPairScheme::make(2, {{{1, 3}, 0.5}, {{2, 3}, 0.5}});
    const std::vector<double> var{1.0, 1.0};
    const auto g = fisher_gap_gaussian(s, var, {{1, 1.0}, {2, 1.0}});
    CHECK(g.lhs == Approx(0.5));
    CHECK(g.rhs == Approx(0.5));
    CHECK(g.r == Approx(std::sqrt(0.5)));
  }
  SUBCASE("uniform nested with lambda = |s|") {
    const auto s = uniform_nested(3, 2, 1);
    const std::vector<double> var{1.0, 1.0, 1.0};
    std::map<Mask, double> lambda;
    for (const auto& [st, p] : s.table()) lambda[st.first] = std::popcount(st.first);
    const auto g = fisher_gap_gaussian(s, var, lambda);
    CHECK(g.lhs <= g.rhs + 1e-9);
  }
  SUBCASE("random nested schemes") {
    instances::Rng rng(23);
    for (int i = 0; i < 100; ++i) {
      const int n = instances::uniform_int(rng, 1, 4);
      const auto s = instances::random_nested_scheme(rng, n, instances::uniform_int(rng, 1, 8));
      std::vector<double> var;
      for (int j = 0; j < n; ++j) var.push_back(instances::uniform(rng, 0.2, 3.0));
      std::map<Mask, double> lambda;
      for (const auto& [st, p] : s.table()) lambda[st.first] = instances::uniform(rng, -3.0, 3.0);
      const auto g = fisher_gap_gaussian(s, var, lambda);
      CHECK(g.lhs <= g.rhs + 1e-9);
    }
  }
  const std::vector<double> var{1.0, 1.0};
  CHECK_ERROR(fisher_gap_gaussian(SubsetPairScheme::make(2, {{{3, 1}, 1.0}}), var, {}), NotNested);
  CHECK_ERROR(fisher_gap_gaussian(SubsetPairScheme::make(2, {{{0, 1}, 1.0}}), var, {}), BadIndices);
}
