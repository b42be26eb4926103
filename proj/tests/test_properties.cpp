// Seeded property corpora for the discrete core.
#include <cmath>

#include "maxcorr/closed_forms.hpp"
#include "maxcorr/discrete_core.hpp"
#include "maxcorr/instances.hpp"
#include "support.hpp"

using namespace maxcorr;
using instances::Rng;

namespace {

double mc(const FiniteJoint& j) { return max_corr(j).value; }

bool support_connected(const Eigen::MatrixXd& p) {
  const auto rows = p.rows(), cols = p.cols();
  std::vector<bool> seen_r(static_cast<std::size_t>(rows)), seen_c(static_cast<std::size_t>(cols));
  std::vector<Eigen::Index> stack{0};
  seen_r[0] = true;
  // Nodes 0..rows-1 are rows, rows.. are columns.
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (v < rows) {
      for (Eigen::Index c = 0; c < cols; ++c)
        if (p(v, c) > 0 && !seen_c[static_cast<std::size_t>(c)]) {
          seen_c[static_cast<std::size_t>(c)] = true;
          stack.push_back(rows + c);
        }
    } else {
      for (Eigen::Index r = 0; r < rows; ++r)
        if (p(r, v - rows) > 0 && !seen_r[static_cast<std::size_t>(r)]) {
          seen_r[static_cast<std::size_t>(r)] = true;
          stack.push_back(r);
        }
    }
  }
  for (bool b : seen_r)
    if (!b) return false;
  for (bool b : seen_c)
    if (!b) return false;
  return true;
}

}  // namespace

TEST_CASE("top singular value is one and R lies in [0,1]") {
  Rng rng(100);
  for (int i = 0; i < 200; ++i) {
    const auto j = instances::random_joint(rng, instances::uniform_int(rng, 1, 7),
                                           instances::uniform_int(rng, 1, 7), 0.4);
    const auto r = max_corr(j);
    CHECK(r.value >= 0.0);
    CHECK(r.value <= 1.0);
    if (!r.spectrum.empty()) CHECK(std::abs(r.spectrum[0] - 1.0) < 1e-8);
  }
}

TEST_CASE("transpose symmetry") {
  Rng rng(101);
  for (int i = 0; i < 100; ++i) {
    const auto j = instances::random_joint(rng, instances::uniform_int(rng, 2, 6),
                                           instances::uniform_int(rng, 2, 6), 0.3);
    CHECK(std::abs(mc(j) - mc(j.transposed())) < 1e-10);
  }
}

TEST_CASE("independence iff rank one") {
  Rng rng(102);
  for (int i = 0; i < 100; ++i) {
    const int r = instances::uniform_int(rng, 2, 5), c = instances::uniform_int(rng, 2, 5);
    Eigen::VectorXd px(r), py(c);
    for (int k = 0; k < r; ++k) px(k) = instances::uniform(rng, 0.01, 1.0);
    for (int k = 0; k < c; ++k) py(k) = instances::uniform(rng, 0.01, 1.0);
    CHECK(mc(independent_joint(px / px.sum(), py / py.sum())) < 1e-10);

    const Eigen::MatrixXd t = instances::random_table(rng, r, c, 0.2);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(t);
    const bool rank_one = svd.singularValues()(1) < 1e-12 * svd.singularValues()(0);
    CHECK((mc(validate_joint(t)) < 1e-10) == rank_one);
  }
}

TEST_CASE("R = 1 iff the support graph is disconnected") {
  Rng rng(103);
  int disconnected = 0;
  for (int i = 0; i < 300; ++i) {
    const Eigen::MatrixXd t = instances::random_table(rng, instances::uniform_int(rng, 2, 5),
                                                      instances::uniform_int(rng, 2, 5), 0.6);
    const bool connected = support_connected(t);
    if (!connected) ++disconnected;
    CHECK((std::abs(mc(validate_joint(t)) - 1.0) < 1e-8) == !connected);
  }
  CHECK(disconnected > 10);  // the corpus exercises both directions
}

TEST_CASE("Csaki-Fischer identity over 200 pairs") {
  Rng rng(104);
  for (int i = 0; i < 200; ++i) {
    const auto a = instances::random_joint(rng, instances::uniform_int(rng, 1, 5),
                                           instances::uniform_int(rng, 1, 5), 0.2);
    const auto b = instances::random_joint(rng, instances::uniform_int(rng, 1, 5),
                                           instances::uniform_int(rng, 1, 5), 0.2);
    CHECK(std::abs(mc(product_joint(a, b)) - std::max(mc(a), mc(b))) < 1e-9);
  }
}

TEST_CASE("data processing never increases R") {
  Rng rng(105);
  for (int i = 0; i < 200; ++i) {
    const auto j = instances::random_joint(rng, 4, 4, 0.3);
    std::vector<int> gx(4), gy(4);
    for (auto& g : gx) g = instances::uniform_int(rng, 0, 3);
    for (auto& g : gy) g = instances::uniform_int(rng, 0, 3);
    const auto mapped = map_states(
        j, [&](const Label& l) { return std::to_string(gx[std::stoul(l)]); },
        [&](const Label& l) { return std::to_string(gy[std::stoul(l)]); });
    CHECK(mc(mapped) <= mc(j) + 1e-9);
  }
}

TEST_CASE("submultiplicativity over Markov triples") {
  Rng rng(106);
  for (int i = 0; i < 100; ++i) {
    const auto xy = instances::random_joint(rng, 3, 3, 0.2);
    Eigen::MatrixXd k = instances::random_table(rng, 3, 2, 0.2);
    for (int r = 0; r < 3; ++r) {
      if (k.row(r).sum() == 0.0) k(r, 0) = 1.0;
      k.row(r) /= k.row(r).sum();
    }
    const auto t = markov_triple_joint(make_markov_triple(xy, k));
    CHECK(mc(t.xz) <= mc(xy) * mc(t.yz) + 1e-9);
  }
}

TEST_CASE("2x2 SVD equals the determinant formula on a 20x20 grid") {
  for (int i = 0; i < 20; ++i) {
    for (int k = 0; k < 20; ++k) {
      const double pa = 0.03 + 0.94 * i / 19.0, pc = 0.03 + 0.94 * k / 19.0;
      const auto p = instances::bernoulli_params(pa, pc, (k % 7 + 0.5) / 7.0 * instances::bernoulli_max_r(pa, pc));
      CHECK(std::abs(mc(instances::bernoulli_joint(p)) - closed_forms::bernoulli_2x2_mc(p)) < 1e-10);
    }
  }
}
