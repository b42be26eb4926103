#include "maxcorr/subset_schemes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "maxcorr/error.hpp"

namespace maxcorr::subsets {
namespace {

void require_ground(int n) {
  if (n < 1 || n > kMaxGround) {
    throw Error(ErrorKind::BadIndices, "ground set size must lie in [1, 12], got " +
                                           std::to_string(n));
  }
}

std::vector<Mask> subsets_of_size(int n, int size, Mask within) {
  std::vector<Mask> out;
  for (Mask m = 0; m < (Mask{1} << n); ++m) {
    if ((m & ~within) == 0 && std::popcount(m) == size) out.push_back(m);
  }
  return out;
}

void require_law(const FiniteLaw& law, const char* what) {
  double total = 0.0;
  int positive = 0;
  for (double p : law) {
    if (p < 0.0 || !std::isfinite(p)) {
      throw Error(ErrorKind::NegativeMass, std::string(what) + " has a negative entry");
    }
    total += p;
    if (p > 0.0) ++positive;
  }
  if (std::abs(total - 1.0) > tol::kMassNormalize) {
    throw Error(ErrorKind::MassNotOne, std::string(what) + " sums to " + std::to_string(total));
  }
  if (positive < 2) {
    throw Error(ErrorKind::DegenerateAxis, std::string(what) + " is degenerate");
  }
}

Label values_label(const std::vector<std::size_t>& values) {
  std::vector<Label> parts;
  for (auto v : values) parts.push_back(std::to_string(v));
  return tuple_label(parts);
}

}  // namespace

SubsetPairScheme SubsetPairScheme::make(int n, PairTable table) {
  require_ground(n);
  const Mask limit = Mask{1} << n;
  double total = 0.0;
  SubsetPairScheme out;
  out.n_ = n;
  for (const auto& [st, p] : table) {
    if (st.first >= limit || st.second >= limit) {
      throw Error(ErrorKind::BadIndices, "subset mask outside [n]");
    }
    if (p < 0.0 || !std::isfinite(p)) {
      throw Error(ErrorKind::NegativeMass, "negative pair probability");
    }
    total += p;
    if (p > 0.0) out.table_.emplace(st, p);
  }
  if (std::abs(total - 1.0) > tol::kMassNormalize) {
    throw Error(ErrorKind::MassNotOne, "scheme mass " + std::to_string(total));
  }
  for (auto& [st, p] : out.table_) p /= total;
  return out;
}

SubsetLaw SubsetPairScheme::s_law() const {
  SubsetLaw law;
  for (const auto& [st, p] : table_) law[st.first] += p;
  return law;
}

SubsetLaw SubsetPairScheme::t_law() const {
  SubsetLaw law;
  for (const auto& [st, p] : table_) law[st.second] += p;
  return law;
}

SubsetPairScheme uniform_nested(int n, int m, int k) {
  require_ground(n);
  if (!(0 <= k && k <= m && m <= n)) throw Error(ErrorKind::BadIndices, "need 0 <= k <= m <= n");
  const Mask full = (Mask{1} << n) - 1;
  const auto outer = subsets_of_size(n, m, full);
  PairTable table;
  for (Mask t : outer) {
    const auto inner = subsets_of_size(n, k, t);
    const double p = 1.0 / (static_cast<double>(outer.size()) * static_cast<double>(inner.size()));
    for (Mask s : inner) table[{s, t}] = p;
  }
  return SubsetPairScheme::make(n, std::move(table));
}

SubsetPairScheme independent_scheme(int n, const SubsetLaw& law_s, const SubsetLaw& law_t) {
  PairTable table;
  for (const auto& [s, ps] : law_s)
    for (const auto& [t, pt] : law_t) table[{s, t}] = ps * pt;
  return SubsetPairScheme::make(n, std::move(table));
}

Label subset_label(Mask mask) {
  Label out = "{";
  bool first = true;
  for (int i = 0; i < 32; ++i) {
    if (mask & (Mask{1} << i)) {
      if (!first) out += ',';
      out += std::to_string(i + 1);
      first = false;
    }
  }
  return out + "}";
}

FiniteJoint scheme_joint(const SubsetPairScheme& scheme) {
  JointAccumulator acc;
  for (const auto& [st, p] : scheme.table()) acc.add(subset_label(st.first), subset_label(st.second), p);
  return acc.build();
}

CorrelationReport subset_pair_mc(const SubsetPairScheme& scheme) {
  return max_corr(scheme_joint(scheme));
}

double restricted_norm(const SubsetPairScheme& scheme, Mask u) {
  const auto ls = scheme.s_law();
  const auto lt = scheme.t_law();
  std::map<Mask, Eigen::Index> rows, cols;
  for (const auto& [s, p] : ls)
    if ((s & u) == u) rows.emplace(s, static_cast<Eigen::Index>(rows.size()));
  for (const auto& [t, p] : lt)
    if ((t & u) == u) cols.emplace(t, static_cast<Eigen::Index>(cols.size()));
  if (rows.empty() || cols.empty()) return 0.0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                            static_cast<Eigen::Index>(cols.size()));
  for (const auto& [st, p] : scheme.table()) {
    const auto r = rows.find(st.first);
    const auto c = cols.find(st.second);
    if (r == rows.end() || c == cols.end()) continue;
    m(r->second, c->second) = p / std::sqrt(ls.at(st.first) * lt.at(st.second));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double rj(const SubsetPairScheme& scheme, int j) {
  if (j < 0 || j >= scheme.n()) throw Error(ErrorKind::BadIndices, "index outside [0, n)");
  return restricted_norm(scheme, Mask{1} << j);
}

CorrelationReport subsample_mc(const SubsetPairScheme& scheme) {
  CorrelationReport pair = subset_pair_mc(scheme);
  double r_max = 0.0;
  int argmax = -1;
  for (int j = 0; j < scheme.n(); ++j) {
    const double r = rj(scheme, j);
    if (r > r_max) {
      r_max = r;
      argmax = j;
    }
  }
  CorrelationReport out;
  out.method = Method::SvdExact;
  out.value = std::max(pair.value, r_max);
  out.tolerance = pair.tolerance;
  out.spectrum = pair.spectrum;
  out.notes["R(S,T)"] = pair.value;
  out.notes["max_rj"] = r_max;
  out.notes["argmax_j"] = static_cast<double>(argmax + 1);
  return out;
}

FiniteJoint brute_force_subvector_joint(const SubsetPairScheme& scheme,
                                        const std::vector<FiniteLaw>& x_laws,
                                        std::size_t cell_cap) {
  const int n = scheme.n();
  if (static_cast<int>(x_laws.size()) != n) {
    throw Error(ErrorKind::BadIndices, "need one law per coordinate");
  }
  for (const auto& law : x_laws) require_law(law, "coordinate law");

  std::vector<std::size_t> support(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    support[static_cast<std::size_t>(i)] = static_cast<std::size_t>(
        std::count_if(x_laws[static_cast<std::size_t>(i)].begin(),
                      x_laws[static_cast<std::size_t>(i)].end(), [](double p) { return p > 0.0; }));
  }
  auto states = [&](const SubsetLaw& law) {
    std::size_t total = 0;
    for (const auto& [s, p] : law) {
      std::size_t c = 1;
      for (int i = 0; i < n; ++i)
        if (s & (Mask{1} << i)) c *= support[static_cast<std::size_t>(i)];
      total += c;
    }
    return total;
  };
  const std::size_t ny = states(scheme.s_law());
  const std::size_t nz = states(scheme.t_law());
  if (ny == 0 || nz > cell_cap / ny) {
    throw Error(ErrorKind::SizeOverflow, std::to_string(ny) + "x" + std::to_string(nz) +
                                             " subvector states exceed cap");
  }

  JointAccumulator acc;
  std::vector<std::size_t> value(static_cast<std::size_t>(n), 0);
  for (const auto& [st, p] : scheme.table()) {
    const auto [s, t] = st;
    const Mask u = s | t;
    std::vector<int> coords;
    for (int i = 0; i < n; ++i)
      if (u & (Mask{1} << i)) coords.push_back(i);
    auto assign = [&](auto&& self, std::size_t depth, double mass) -> void {
      if (depth == coords.size()) {
        std::vector<std::size_t> vs, vt;
        for (int i : coords) {
          if (s & (Mask{1} << i)) vs.push_back(value[static_cast<std::size_t>(i)]);
          if (t & (Mask{1} << i)) vt.push_back(value[static_cast<std::size_t>(i)]);
        }
        acc.add(subset_label(s) + ":" + values_label(vs), subset_label(t) + ":" + values_label(vt),
                mass);
        return;
      }
      const auto i = static_cast<std::size_t>(coords[depth]);
      for (std::size_t v = 0; v < x_laws[i].size(); ++v) {
        if (x_laws[i][v] <= 0.0) continue;
        value[i] = v;
        self(self, depth + 1, mass * x_laws[i][v]);
      }
    };
    assign(assign, 0, p);
  }
  return acc.build();
}

namespace {

struct CountLaw {
  std::vector<std::vector<int>> counts;
  std::vector<double> probs;
};

// Multinomial law of the symbol counts among `size` i.i.d. draws.
CountLaw count_law(int size, const FiniteLaw& law) {
  CountLaw out;
  const int k = static_cast<int>(law.size());
  std::vector<int> c(static_cast<std::size_t>(k), 0);
  auto rec = [&](auto&& self, int symbol, int remaining) -> void {
    if (symbol == k - 1) {
      c[static_cast<std::size_t>(symbol)] = remaining;
      double logp = std::lgamma(size + 1.0);
      bool zero = false;
      for (int a = 0; a < k; ++a) {
        const int ca = c[static_cast<std::size_t>(a)];
        const double pa = law[static_cast<std::size_t>(a)];
        logp -= std::lgamma(ca + 1.0);
        if (ca > 0) {
          if (pa <= 0.0) zero = true;
          else logp += ca * std::log(pa);
        }
      }
      if (!zero) {
        out.counts.push_back(c);
        out.probs.push_back(std::exp(logp));
      }
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      c[static_cast<std::size_t>(symbol)] = v;
      self(self, symbol + 1, remaining - v);
    }
  };
  rec(rec, 0, size);
  return out;
}

Label counts_label(const std::vector<int>& a, const std::vector<int>* b) {
  std::vector<Label> parts;
  for (std::size_t i = 0; i < a.size(); ++i) parts.push_back(std::to_string(a[i] + (b ? (*b)[i] : 0)));
  return "[" + tuple_label(parts).substr(1, tuple_label(parts).size() - 2) + "]";
}

}  // namespace

FiniteJoint empirical_measure_joint(int n, int m, int l, const FiniteLaw& alphabet_law,
                                    std::size_t cell_cap) {
  if (!(l >= 0 && l + 1 <= m && m <= n)) {
    throw Error(ErrorKind::BadIndices, "need 1 <= l+1 <= m <= n");
  }
  if (alphabet_law.empty()) throw Error(ErrorKind::EmptySupport, "empty alphabet");
  double total = 0.0;
  for (double p : alphabet_law) {
    if (p < 0.0) throw Error(ErrorKind::NegativeMass, "alphabet law has a negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > tol::kMassNormalize) {
    throw Error(ErrorKind::MassNotOne, "alphabet law sums to " + std::to_string(total));
  }
  const CountLaw head = count_law(l, alphabet_law);
  const CountLaw mid = count_law(m - l, alphabet_law);
  const CountLaw tail = count_law(n - m, alphabet_law);
  const std::size_t cells = head.probs.size() * mid.probs.size() * tail.probs.size();
  if (cells > cell_cap) throw Error(ErrorKind::SizeOverflow, "count state space exceeds cap");

  JointAccumulator acc;
  for (std::size_t a = 0; a < head.probs.size(); ++a)
    for (std::size_t b = 0; b < mid.probs.size(); ++b)
      for (std::size_t c = 0; c < tail.probs.size(); ++c) {
        acc.add(counts_label(head.counts[a], &mid.counts[b]),
                counts_label(mid.counts[b], &tail.counts[c]),
                head.probs[a] * mid.probs[b] * tail.probs[c]);
      }
  return acc.build();
}

std::size_t ProductTable::size() const {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t ProductTable::flat_index(std::span<const std::size_t> coords) const {
  std::size_t flat = 0, stride = 1;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    flat += coords[i] * stride;
    stride *= dims[i];
  }
  return flat;
}

std::vector<std::size_t> ProductTable::coords_of(std::size_t flat) const {
  std::vector<std::size_t> c(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    c[i] = flat % dims[i];
    flat /= dims[i];
  }
  return c;
}

std::vector<double> average_out(const ProductTable& psi, const FiniteLaw& law, std::size_t j) {
  std::size_t stride = 1;
  for (std::size_t i = 0; i < j; ++i) stride *= psi.dims[i];
  const std::size_t dim = psi.dims[j];
  std::vector<double> out(psi.values.size());
  for (std::size_t flat = 0; flat < psi.values.size(); ++flat) {
    const std::size_t xj = (flat / stride) % dim;
    const std::size_t base = flat - xj * stride;
    double avg = 0.0;
    for (std::size_t v = 0; v < dim; ++v) avg += law[v] * psi.values[base + v * stride];
    out[flat] = avg;
  }
  return out;
}

AnovaDecomposition anova_decompose(const ProductTable& psi, const std::vector<FiniteLaw>& x_laws) {
  const std::size_t n = psi.dims.size();
  if (n > 10) throw Error(ErrorKind::SizeOverflow, "ANOVA limited to 10 coordinates");
  if (x_laws.size() != n) throw Error(ErrorKind::BadIndices, "need one law per coordinate");
  if (psi.values.size() != psi.size()) throw Error(ErrorKind::BadIndices, "table size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (x_laws[i].size() != psi.dims[i]) {
      throw Error(ErrorKind::BadIndices, "law size does not match table dimension");
    }
    require_law(x_laws[i], "coordinate law");
  }

  AnovaDecomposition out;
  out.dims = psi.dims;
  for (Mask u = 0; u < (Mask{1} << n); ++u) {
    ProductTable work = psi;
    for (std::size_t j = 0; j < n; ++j) {
      const auto averaged = average_out(work, x_laws[j], j);
      if (u & (Mask{1} << j)) {
        for (std::size_t f = 0; f < work.values.size(); ++f) work.values[f] -= averaged[f];
      } else {
        work.values = averaged;
      }
    }
    AnovaComponent comp;
    comp.coords = u;
    for (std::size_t j = 0; j < n; ++j)
      if (u & (Mask{1} << j)) comp.table.dims.push_back(psi.dims[j]);
    comp.table.values.assign(comp.table.size(), 0.0);
    // Slice at index 0 along the coordinates outside u.
    std::vector<std::size_t> full(n, 0);
    for (std::size_t r = 0; r < comp.table.values.size(); ++r) {
      const auto reduced = comp.table.coords_of(r);
      std::size_t pos = 0;
      for (std::size_t j = 0; j < n; ++j) full[j] = (u & (Mask{1} << j)) ? reduced[pos++] : 0;
      comp.table.values[r] = work.values[work.flat_index(full)];
    }
    out.components.emplace(u, std::move(comp));
  }
  return out;
}

std::vector<double> AnovaDecomposition::expand(Mask u) const {
  const auto& comp = components.at(u);
  ProductTable shape{dims, {}};
  std::vector<double> out(shape.size());
  for (std::size_t f = 0; f < out.size(); ++f) {
    const auto c = shape.coords_of(f);
    std::vector<std::size_t> reduced;
    for (std::size_t j = 0; j < dims.size(); ++j)
      if (u & (Mask{1} << j)) reduced.push_back(c[j]);
    out[f] = comp.table.values[comp.table.flat_index(reduced)];
  }
  return out;
}

std::vector<double> AnovaDecomposition::reconstruct() const {
  ProductTable shape{dims, {}};
  std::vector<double> out(shape.size(), 0.0);
  for (const auto& [u, comp] : components) {
    const auto e = expand(u);
    for (std::size_t f = 0; f < out.size(); ++f) out[f] += e[f];
  }
  return out;
}

FisherGap fisher_gap_gaussian(const SubsetPairScheme& scheme, std::span<const double> variances,
                              const std::map<Mask, double>& lambda) {
  const int n = scheme.n();
  if (static_cast<int>(variances.size()) != n) {
    throw Error(ErrorKind::BadIndices, "need one variance per coordinate");
  }
  for (double v : variances) {
    if (!(v > 0.0)) throw Error(ErrorKind::OutOfRange, "variances must be positive");
  }
  for (const auto& [st, p] : scheme.table()) {
    if ((st.first & ~st.second) != 0) {
      throw Error(ErrorKind::NotNested, subset_label(st.first) + " is not inside " +
                                            subset_label(st.second));
    }
    if (st.first == 0) throw Error(ErrorKind::BadIndices, "S must be non-empty");
  }
  auto fisher = [&](Mask s) {
    double var = 0.0;
    for (int i = 0; i < n; ++i)
      if (s & (Mask{1} << i)) var += variances[static_cast<std::size_t>(i)];
    return 1.0 / var;
  };
  auto lam = [&](Mask s) {
    const auto it = lambda.find(s);
    return it == lambda.end() ? 0.0 : it->second;
  };

  const auto lt = scheme.t_law();
  const auto ls = scheme.s_law();
  std::map<Mask, double> mu;
  for (const auto& [st, p] : scheme.table()) mu[st.second] += p / lt.at(st.second) * lam(st.first);

  FisherGap gap;
  for (const auto& [t, pt] : lt) gap.lhs += pt * fisher(t) * mu[t] * mu[t];
  gap.r = subsample_mc(scheme).value;
  double weighted = 0.0;
  for (const auto& [s, ps] : ls) weighted += ps * fisher(s) * lam(s) * lam(s);
  gap.rhs = gap.r * gap.r * weighted;
  return gap;
}

}  // namespace maxcorr::subsets
