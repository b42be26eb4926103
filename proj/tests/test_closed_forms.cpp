#include <cmath>
#include <vector>

#include "maxcorr/closed_forms.hpp"
#include "maxcorr/discrete_core.hpp"
#include "maxcorr/instances.hpp"
#include "support.hpp"

using namespace maxcorr;
using namespace maxcorr::closed_forms;
using doctest::Approx;

TEST_CASE("gaussian_mc") {
  CHECK(gaussian_mc(0.0) == 0.0);
  CHECK(gaussian_mc(-0.3) == Approx(0.3));
  CHECK(gaussian_mc(1.0) == 1.0);
  CHECK_ERROR(gaussian_mc(1.2), OutOfRange);
}

TEST_CASE("bernoulli_2x2_mc") {
  CHECK(bernoulli_2x2_mc({0.25, 0.25, 0.25, 0.25}) == 0.0);
  CHECK(std::abs(bernoulli_2x2_mc({0.4, 0.1, 0.2, 0.3}) - 0.408248290463863) < 1e-12);
  CHECK(bernoulli_2x2_mc({0.5, 0.0, 0.0, 0.5}) == Approx(1.0));
  CHECK(bernoulli_2x2_mc({0.5, 0.5, 0.0, 0.0}) == 0.0);
  CHECK_ERROR(bernoulli_2x2_mc({0.5, 0.5, 0.5, 0.0}), MassNotOne);
}

TEST_CASE("dksy_mc and min_window_bound") {
  CHECK(dksy_mc(0, 2, 4) == Approx(std::sqrt(0.5)));
  CHECK(dksy_mc(1, 2, 4) == Approx(1.0 / std::sqrt(6.0)));
  CHECK(dksy_mc(0, 5, 5) == Approx(1.0));
  CHECK_ERROR(dksy_mc(2, 2, 4), BadIndices);
  CHECK_ERROR(dksy_mc(0, 5, 4), BadIndices);
  CHECK(min_window_bound(0, 1, 2) == Approx(1.0 / std::sqrt(2.0)));
  CHECK(min_window_bound(1, 2, 4) == Approx(1.0 / std::sqrt(6.0)));
  CHECK(min_window_bound(0, 3, 3) == Approx(1.0));
}

TEST_CASE("mb_bound") {
  const std::vector<double> zeros{0.0, 0.0, 0.0};
  CHECK(mb_bound(zeros) == 0.0);
  const std::vector<double> p{0.2, 0.7, 0.5};
  CHECK(mb_bound(p) == Approx(0.836660026534));
  const std::vector<double> bad{0.2, 1.5};
  CHECK_ERROR(mb_bound(bad), OutOfRange);
  for (int n = 1; n <= 8; ++n)
    for (int m = 1; m <= n; ++m) {
      const std::vector<double> uniform(static_cast<std::size_t>(n), static_cast<double>(m) / n);
      CHECK(mb_bound(uniform) == Approx(dksy_mc(0, m, n)).epsilon(1e-15));
    }
}

TEST_CASE("nested_subsets_mc") {
  CHECK(nested_subsets_mc(4, 4, 2) == 0.0);
  CHECK(nested_subsets_mc(3, 2, 1) == Approx(0.5));
  CHECK(nested_subsets_mc(3, 2, 1) == Approx(std::sqrt(1.0 / (2.0 * 2.0))));
  CHECK(nested_subsets_mc(3, 3, 3) == 0.0);
  CHECK(nested_subsets_mc(5, 3, 0) == 0.0);
  CHECK_ERROR(nested_subsets_mc(3, 2, 3), BadIndices);

  for (int n = 2; n <= 9; ++n)
    for (int m = 1; m < n; ++m)
      for (int k = 1; k <= m; ++k) {
        const double v = nested_subsets_mc(n, m, k);
        CHECK(v >= 0.0);
        CHECK(v <= std::sqrt(static_cast<double>(k) / m) + 1e-15);
        if (k < m) CHECK(nested_subsets_mc(n, m, k + 1) >= v);
        if (m + 1 <= n && k <= m) CHECK(nested_subsets_mc(n, m + 1, k) <= v + 1e-15);
        if (m == n - 1) CHECK(v == Approx(std::sqrt(static_cast<double>(k) / ((n - 1.0) * (n - k)))));
      }
}

TEST_CASE("uniform_nested_tag_mc") {
  CHECK(uniform_nested_tag_mc(3, 3) == 1.0);
  CHECK(uniform_nested_tag_mc(1, 2) == Approx(0.707106781187));
  CHECK(uniform_nested_tag_mc(2, 3) == Approx(0.816496580928));
  CHECK_ERROR(uniform_nested_tag_mc(0, 3), BadIndices);
  CHECK_ERROR(uniform_nested_tag_mc(4, 3), BadIndices);
}

TEST_CASE("bdk_mc") {
  CHECK(bdk_mc(1.0, 0.0, 1.0, 1.0) == 1.0);
  CHECK(bdk_mc(1.0, 2.0, 1.0, 1.0) == Approx(0.577350269190));
  CHECK(bdk_mc(1.0, -1.0, 1.0, 2.0) == Approx(0.816496580928));
  CHECK_ERROR(bdk_mc(2.0, 1.0, 1.0, 1.0), OutOfRange);
  CHECK_ERROR(bdk_mc(1.0, 1.0, 0.0, 0.0), OutOfRange);
  // continuity at 0 and agreement of the two branches when c- = c+
  CHECK(bdk_mc(1.3, 1e-12, 1.0, 2.0) == Approx(1.0));
  for (double a : {0.5, 1.0, 1.5})
    for (double l : {0.3, 1.0, 2.5}) CHECK(bdk_mc(a, -l, 2.0, 2.0) == Approx(bdk_mc(a, l, 2.0, 2.0)));
}

TEST_CASE("marshall_olkin_mc") {
  CHECK(marshall_olkin_mc(1, 1, 1) == Approx(0.5));
  CHECK(marshall_olkin_mc(1, 1, 1e-14) < 1e-13);
  CHECK(marshall_olkin_mc(1, 2, 1) == Approx(1.0 / std::sqrt(6.0)));
  CHECK(marshall_olkin_mc(1, 2, 1) == Approx(dksy_mc(1, 2, 4)));
  CHECK_ERROR(marshall_olkin_mc(0, 1, 1), OutOfRange);
}

TEST_CASE("independent_rj") {
  CHECK(independent_rj(1, 1) == 1.0);
  CHECK(independent_rj(0.5, 1.0 / 3.0) == Approx(0.408248290464));
  CHECK(independent_rj(0, 0.7) == 0.0);
  CHECK_ERROR(independent_rj(-0.1, 0.5), OutOfRange);
}

TEST_CASE("bernoulli_2x2_mc agrees with the SVD on a 20x20 grid") {
  for (int i = 0; i < 20; ++i)
    for (int k = 0; k < 20; ++k) {
      const Bernoulli2x2Params p = [&] {
        const double a = 1.0 + i, b = 1.0 + k, c = 21.0 - i, d = 1.0 + (i * k) % 13;
        const double s = a + b + c + d;
        return Bernoulli2x2Params{a / s, b / s, c / s, d / s};
      }();
      CHECK(std::abs(max_corr(instances::bernoulli_joint(p)).value - bernoulli_2x2_mc(p)) < 1e-10);
    }
}
