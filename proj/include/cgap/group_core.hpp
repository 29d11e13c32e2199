#pragma once

// Finite groups generated by involutions, their Cayley graphs, word metrics
// and expander statistics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cgap/error.hpp"
#include "cgap/spectral.hpp"

namespace cgap {

using Element = std::uint32_t;

/// Closed-form (or tabulated) arithmetic backing a FiniteGroupModel.
struct GroupArithmetic {
  std::function<Element(Element, Element)> mul;
  std::function<Element(Element)> inv;
};

/// A finite group on the dense index set 0..v-1 with identity 0 and a list of
/// m involution generators. Products are tabulated when v is at most the
/// dense cap; above it the family's permutation action is used directly.
class FiniteGroupModel {
 public:
  FiniteGroupModel(std::string label, int family_index, std::size_t order,
                   GroupArithmetic arithmetic, std::vector<Element> generators,
                   std::size_t dense_cap)
      : label_(std::move(label)),
        family_index_(family_index),
        order_(order),
        arithmetic_(std::move(arithmetic)),
        generators_(std::move(generators)) {
    if (order_ == 0) throw Error(ErrorKind::kInvalidArgument, "empty group");
    if (order_ <= dense_cap) {
      table_.resize(order_ * order_);
      for (Element a = 0; a < order_; ++a)
        for (Element b = 0; b < order_; ++b) table_[a * order_ + b] = arithmetic_.mul(a, b);
      inverse_.resize(order_);
      for (Element a = 0; a < order_; ++a) inverse_[a] = arithmetic_.inv(a);
    }
  }

  const std::string& label() const { return label_; }
  int family_index() const { return family_index_; }
  std::size_t order() const { return order_; }
  std::size_t degree() const { return generators_.size(); }
  const std::vector<Element>& generators() const { return generators_; }
  Element generator(std::size_t i) const { return generators_.at(i); }
  bool dense() const { return !table_.empty(); }

  Element mul(Element a, Element b) const {
    return table_.empty() ? arithmetic_.mul(a, b) : table_[a * order_ + b];
  }
  Element inverse(Element a) const { return inverse_.empty() ? arithmetic_.inv(a) : inverse_[a]; }

  /// True when every generator is distinct; the group G construction needs it.
  bool distinct_generators() const {
    auto sorted = generators_;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  }

 private:
  std::string label_;
  int family_index_;
  std::size_t order_;
  GroupArithmetic arithmetic_;
  std::vector<Element> generators_;
  std::vector<Element> table_;
  std::vector<Element> inverse_;
};

using GroupPtr = std::shared_ptr<const FiniteGroupModel>;

// ---------------------------------------------------------------------------
// Families

namespace detail {

inline std::size_t factorial(int n) {
  std::size_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::size_t>(i);
  return f;
}

// Lehmer-code ranking; the identity permutation has rank 0.
inline Element rank_permutation(const std::vector<std::uint8_t>& p) {
  const int n = static_cast<int>(p.size());
  std::size_t r = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j) smaller += p[j] < p[i];
    r = r * static_cast<std::size_t>(n - i) + static_cast<std::size_t>(smaller);
  }
  return static_cast<Element>(r);
}

inline std::vector<std::uint8_t> unrank_permutation(Element rank, int n) {
  std::vector<int> digits(n);
  std::size_t r = rank;
  for (int i = n - 1; i >= 0; --i) {
    const auto base = static_cast<std::size_t>(n - i);
    digits[i] = static_cast<int>(r % base);
    r /= base;
  }
  std::vector<std::uint8_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<std::uint8_t> p(n);
  for (int i = 0; i < n; ++i) {
    p[i] = pool[digits[i]];
    pool.erase(pool.begin() + digits[i]);
  }
  return p;
}

}  // namespace detail

enum class SymmetricGenerators { kAdjacent, kRandomInvolutions };

/// Sₙ on Lehmer-ranked permutations. kAdjacent uses the n−1 adjacent
/// transpositions, padded to `m` by cycling through them again. kRandomInvolutions
/// draws m involutions uniformly from the non-identity involutions of Sₙ with a
/// seeded stream, redrawing until the set generates.
inline GroupPtr symmetric_group(int n, std::size_t m, int family_index, std::size_t dense_cap,
                                SymmetricGenerators kind = SymmetricGenerators::kAdjacent,
                                std::uint64_t generator_seed = 1) {
  if (n < 2 || n > 12) throw Error(ErrorKind::kInvalidArgument, "symmetric degree must be in [2,12]");
  if (kind == SymmetricGenerators::kAdjacent && m < static_cast<std::size_t>(n - 1))
    throw Error(ErrorKind::kNotGenerating,
                "S" + std::to_string(n) + " needs " + std::to_string(n - 1) +
                    " adjacent transpositions but only " + std::to_string(m) + " generators allowed");
  const std::size_t order = detail::factorial(n);
  auto perms = std::make_shared<std::vector<std::vector<std::uint8_t>>>(order);
  for (Element r = 0; r < order; ++r) (*perms)[r] = detail::unrank_permutation(r, n);

  GroupArithmetic arith;
  // (a*b)(x) = a(b(x)).
  arith.mul = [perms, n](Element a, Element b) {
    const auto& pa = (*perms)[a];
    const auto& pb = (*perms)[b];
    std::vector<std::uint8_t> c(n);
    for (int x = 0; x < n; ++x) c[x] = pa[pb[x]];
    return detail::rank_permutation(c);
  };
  arith.inv = [perms, n](Element a) {
    const auto& pa = (*perms)[a];
    std::vector<std::uint8_t> c(n);
    for (int x = 0; x < n; ++x) c[pa[x]] = static_cast<std::uint8_t>(x);
    return detail::rank_permutation(c);
  };

  std::vector<Element> base;
  for (int i = 0; i + 1 < n; ++i) {
    std::vector<std::uint8_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::swap(p[i], p[i + 1]);
    base.push_back(detail::rank_permutation(p));
  }
  std::vector<Element> gens(m);
  if (kind == SymmetricGenerators::kAdjacent) {
    for (std::size_t j = 0; j < m; ++j) gens[j] = base[j % base.size()];
    return std::make_shared<FiniteGroupModel>("S" + std::to_string(n), family_index, order,
                                              std::move(arith), std::move(gens), dense_cap);
  }
  if (m < 2) throw Error(ErrorKind::kNotGenerating, "random involutions need m >= 2");
  std::mt19937_64 rng(generator_seed * 1000003ULL + static_cast<std::uint64_t>(n));
  // Involutions with p disjoint transpositions number n!/(p!(n−2p)!2^p).
  std::vector<double> pair_weights;
  for (int p = 1; 2 * p <= n; ++p)
    pair_weights.push_back(std::exp(std::lgamma(n + 1.0) - std::lgamma(p + 1.0) - std::lgamma(n - 2.0 * p + 1.0) -
                                    p * std::log(2.0)));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<std::uint8_t> pts(n);
      std::iota(pts.begin(), pts.end(), 0);
      std::shuffle(pts.begin(), pts.end(), rng);
      std::discrete_distribution<int> pick_pairs(pair_weights.begin(), pair_weights.end());
      const int pairs = pick_pairs(rng) + 1;
      std::vector<std::uint8_t> p(n);
      std::iota(p.begin(), p.end(), 0);
      for (int t = 0; t < pairs; ++t) std::swap(p[pts[2 * t]], p[pts[2 * t + 1]]);
      gens[j] = detail::rank_permutation(p);
    }
    // BFS closure through the permutation action.
    std::vector<char> seen(order, 0);
    std::vector<Element> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const Element x = stack.back();
      stack.pop_back();
      for (Element g : gens) {
        const Element y = arith.mul(x, g);
        if (!seen[y]) {
          seen[y] = 1;
          ++reached;
          stack.push_back(y);
        }
      }
    }
    if (reached == order)
      return std::make_shared<FiniteGroupModel>("S" + std::to_string(n), family_index, order,
                                                std::move(arith), std::move(gens), dense_cap);
  }
  throw Error(ErrorKind::kNotGenerating, "no generating involution set found for S" + std::to_string(n));
}

/// Dihedral group of order 2n generated by the reflections x ↦ −x and x ↦ 1−x.
/// Index r < n is the rotation by r, index n + r the reflection x ↦ r − x.
inline GroupPtr dihedral_group(std::uint32_t n, int family_index, std::size_t dense_cap) {
  if (n < 2) throw Error(ErrorKind::kInvalidArgument, "dihedral order parameter must be >= 2");
  GroupArithmetic arith;
  arith.mul = [n](Element a, Element b) -> Element {
    const bool ra = a >= n, rb = b >= n;
    const std::int64_t x = a % n, y = b % n;
    const auto mod = [n](std::int64_t z) { return static_cast<Element>(((z % n) + n) % n); };
    if (!ra && !rb) return mod(x + y);
    if (!ra && rb) return n + mod(x + y);
    if (ra && !rb) return n + mod(x - y);
    return mod(x - y);
  };
  arith.inv = [n](Element a) -> Element { return a >= n ? a : (n - a) % n; };
  return std::make_shared<FiniteGroupModel>("D" + std::to_string(2 * n), family_index, 2 * n,
                                            std::move(arith), std::vector<Element>{n, n + 1},
                                            dense_cap);
}

/// Group read from a multiplication table: first line "v m", then v rows of v
/// indices, then one line with the m generator indices.
inline GroupPtr table_group(std::istream& in, int family_index, const std::string& label = "table") {
  std::size_t v = 0, m = 0;
  if (!(in >> v >> m) || v == 0 || m == 0) throw Error(ErrorKind::kParse, "expected header \"v m\"");
  auto table = std::make_shared<std::vector<Element>>(v * v);
  for (auto& e : *table) {
    long long x;
    if (!(in >> x)) throw Error(ErrorKind::kParse, "multiplication table truncated");
    if (x < 0 || static_cast<std::size_t>(x) >= v)
      throw Error(ErrorKind::kParse, "table entry " + std::to_string(x) + " out of range");
    e = static_cast<Element>(x);
  }
  std::vector<Element> gens(m);
  for (auto& g : gens) {
    long long x;
    if (!(in >> x)) throw Error(ErrorKind::kParse, "generator line truncated");
    if (x < 0 || static_cast<std::size_t>(x) >= v)
      throw Error(ErrorKind::kParse, "generator " + std::to_string(x) + " out of range");
    g = static_cast<Element>(x);
  }
  for (Element a = 0; a < v; ++a) {
    if ((*table)[a] != a || (*table)[a * v] != a)
      throw Error(ErrorKind::kInvalidArgument, "index 0 is not a two-sided identity");
  }
  for (Element a = 0; a < v; ++a) {
    std::vector<char> seen(v, 0);
    for (Element b = 0; b < v; ++b) seen[(*table)[a * v + b]] = 1;
    if (std::count(seen.begin(), seen.end(), 1) != static_cast<long>(v))
      throw Error(ErrorKind::kInvalidArgument, "row " + std::to_string(a) + " is not a permutation");
  }
  auto inv = std::make_shared<std::vector<Element>>(v);
  for (Element a = 0; a < v; ++a)
    for (Element b = 0; b < v; ++b)
      if ((*table)[a * v + b] == 0) (*inv)[a] = b;

  // Associativity: exhaustive for small tables, sampled triples otherwise.
  const auto at = [&](Element a, Element b) { return (*table)[a * v + b]; };
  if (v <= 64) {
    for (Element a = 0; a < v; ++a)
      for (Element b = 0; b < v; ++b)
        for (Element c = 0; c < v; ++c)
          if (at(at(a, b), c) != at(a, at(b, c)))
            throw Error(ErrorKind::kInvalidArgument, "table is not associative");
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(v - 1));
    for (int t = 0; t < 100000; ++t) {
      const Element a = pick(rng), b = pick(rng), c = pick(rng);
      if (at(at(a, b), c) != at(a, at(b, c)))
        throw Error(ErrorKind::kInvalidArgument, "table is not associative");
    }
  }
  GroupArithmetic arith;
  arith.mul = [table, v](Element a, Element b) { return (*table)[a * v + b]; };
  arith.inv = [inv](Element a) { return (*inv)[a]; };
  return std::make_shared<FiniteGroupModel>(label, family_index, v, std::move(arith),
                                            std::move(gens), v);
}

/// Checks the generators: non-identity involutions that generate the group.
inline void validate_group(const FiniteGroupModel& g) {
  if (g.degree() == 0) throw Error(ErrorKind::kNotGenerating, "no generators");
  for (std::size_t i = 0; i < g.degree(); ++i) {
    const Element s = g.generator(i);
    if (s == 0)
      throw Error(ErrorKind::kNotInvolution,
                  "generator " + std::to_string(i + 1) + " of " + g.label() + " is the identity");
    if (g.mul(s, s) != 0)
      throw Error(ErrorKind::kNotInvolution, "generator " + std::to_string(i + 1) + " (element " +
                                                 std::to_string(s) + ") of " + g.label() +
                                                 " is not an involution");
  }
  std::vector<char> seen(g.order(), 0);
  std::vector<Element> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Element x = stack.back();
    stack.pop_back();
    for (Element s : g.generators()) {
      const Element y = g.mul(x, s);
      if (!seen[y]) {
        seen[y] = 1;
        ++reached;
        stack.push_back(y);
      }
    }
  }
  if (reached != g.order())
    throw Error(ErrorKind::kNotGenerating, "generators of " + g.label() + " reach a subgroup of size " +
                                               std::to_string(reached) + " of " +
                                               std::to_string(g.order()));
}

/// Description of a group family; `k` ranges over [k_lo, k_hi].
struct GroupFamilySpec {
  std::string family = "dihedral";  // symmetric | dihedral | table
  int k_lo = 1;
  int k_hi = 4;
  std::size_t size_cap = 100000;
  std::size_t dense_cap = 4096;
  // symmetric: n = k + n_offset, or degrees[k − k_lo] when given; generator
  // count m (0 = n_max − 1 over the range).
  int n_offset = 2;
  std::vector<int> degrees;
  std::size_t generator_count = 0;
  std::string generators = "adjacent";  // adjacent | random_involutions
  std::uint64_t generator_seed = 1;
  // dihedral: explicit n per k (k_lo maps to orders[0]); empty means n = k + 1.
  std::vector<std::uint32_t> orders;
  // table: one file per k.
  std::vector<std::string> table_files;
};

inline int symmetric_degree(const GroupFamilySpec& spec, int k) {
  if (spec.degrees.empty()) return k + spec.n_offset;
  return spec.degrees.at(static_cast<std::size_t>(k - spec.k_lo));
}

inline std::size_t required_order(const GroupFamilySpec& spec, int k) {
  if (spec.family == "symmetric") return detail::factorial(symmetric_degree(spec, k));
  if (spec.family == "dihedral") {
    const std::size_t idx = static_cast<std::size_t>(k - spec.k_lo);
    const std::size_t n = spec.orders.empty() ? static_cast<std::size_t>(k + 1) : spec.orders.at(idx);
    return 2 * n;
  }
  return 0;
}

/// Builds and validates member k of a family.
inline GroupPtr build_group(const GroupFamilySpec& spec, int k) {
  if (k < spec.k_lo || k > spec.k_hi)
    throw Error(ErrorKind::kInvalidArgument, "k = " + std::to_string(k) + " outside k_range");
  const std::size_t need = required_order(spec, k);
  if (need > spec.size_cap)
    throw Error(ErrorKind::kSizeCap, "member k = " + std::to_string(k) + " requires v = " +
                                         std::to_string(need) + " > cap " + std::to_string(spec.size_cap));
  GroupPtr g;
  if (spec.family == "symmetric") {
    const std::size_t m = spec.generator_count ? spec.generator_count
                                               : static_cast<std::size_t>(symmetric_degree(spec, spec.k_hi) - 1);
    SymmetricGenerators kind;
    if (spec.generators == "adjacent") kind = SymmetricGenerators::kAdjacent;
    else if (spec.generators == "random_involutions") kind = SymmetricGenerators::kRandomInvolutions;
    else throw Error(ErrorKind::kInvalidArgument, "unknown generator set \"" + spec.generators + "\"");
    g = symmetric_group(symmetric_degree(spec, k), m, k, spec.dense_cap, kind, spec.generator_seed);
  } else if (spec.family == "dihedral") {
    g = dihedral_group(static_cast<std::uint32_t>(need / 2), k, spec.dense_cap);
  } else if (spec.family == "table") {
    const std::size_t idx = static_cast<std::size_t>(k - spec.k_lo);
    if (idx >= spec.table_files.size())
      throw Error(ErrorKind::kInvalidArgument, "no table file for k = " + std::to_string(k));
    std::ifstream in(spec.table_files[idx]);
    if (!in) throw Error(ErrorKind::kParse, "cannot open " + spec.table_files[idx]);
    g = table_group(in, k, spec.table_files[idx]);
    if (g->order() > spec.size_cap)
      throw Error(ErrorKind::kSizeCap, "member k = " + std::to_string(k) + " requires v = " +
                                           std::to_string(g->order()));
  } else {
    throw Error(ErrorKind::kInvalidArgument, "unknown family \"" + spec.family + "\"");
  }
  validate_group(*g);
  return g;
}

inline std::vector<GroupPtr> build_family(const GroupFamilySpec& spec) {
  std::vector<GroupPtr> out;
  for (int k = spec.k_lo; k <= spec.k_hi; ++k) out.push_back(build_group(spec, k));
  std::size_t m = out.front()->degree();
  for (const auto& g : out)
    if (g->degree() != m)
      throw Error(ErrorKind::kInvalidArgument, "family members present different generator counts");
  return out;
}

// ---------------------------------------------------------------------------
// Cayley graph and word metric

/// m-regular Cayley graph: x is joined to x·sⱼ for every generator sⱼ, so
/// repeated generators give parallel edges.
class CayleyGraph {
 public:
  explicit CayleyGraph(GroupPtr group) : group_(std::move(group)) {
    const std::size_t v = group_->order(), m = group_->degree();
    neighbors_.resize(v * m);
    for (Element x = 0; x < v; ++x)
      for (std::size_t j = 0; j < m; ++j) neighbors_[x * m + j] = group_->mul(x, group_->generator(j));
  }

  std::size_t vertex_count() const { return group_->order(); }
  std::size_t degree() const { return group_->degree(); }
  const GroupPtr& group() const { return group_; }
  std::span<const Element> neighbors(Element x) const {
    return {neighbors_.data() + x * degree(), degree()};
  }

 private:
  GroupPtr group_;
  std::vector<Element> neighbors_;
};

inline std::vector<std::uint16_t> bfs_distances(const CayleyGraph& graph, Element source) {
  constexpr std::uint16_t kUnseen = 0xffff;
  std::vector<std::uint16_t> dist(graph.vertex_count(), kUnseen);
  std::vector<Element> frontier{source}, next;
  dist[source] = 0;
  std::uint16_t level = 0;
  while (!frontier.empty()) {
    ++level;
    next.clear();
    for (Element x : frontier)
      for (Element y : graph.neighbors(x))
        if (dist[y] == kUnseen) {
          dist[y] = level;
          next.push_back(y);
        }
    frontier.swap(next);
  }
  if (std::find(dist.begin(), dist.end(), kUnseen) != dist.end())
    throw Error(ErrorKind::kDisconnected, "Cayley graph of " + graph.group()->label() + " is disconnected");
  return dist;
}

/// Graph distances of a Cayley graph. The full v×v matrix is kept when v is at
/// most the all-pairs cap; otherwise only the identity row is stored and
/// d(x,y) = |x⁻¹y| is used (left multiplication is an isometry).
class WordMetricTable {
 public:
  WordMetricTable(GroupPtr group, std::vector<std::uint16_t> from_identity,
                  std::vector<std::uint16_t> full)
      : group_(std::move(group)), from_identity_(std::move(from_identity)), full_(std::move(full)) {
    diameter_ = *std::max_element(from_identity_.begin(), from_identity_.end());
    if (!full_.empty()) diameter_ = *std::max_element(full_.begin(), full_.end());
  }

  std::size_t size() const { return from_identity_.size(); }
  int diameter() const { return diameter_; }
  bool has_full_matrix() const { return !full_.empty(); }
  const GroupPtr& group() const { return group_; }
  const std::vector<std::uint16_t>& from_identity() const { return from_identity_; }
  int length(Element x) const { return from_identity_[x]; }

  int operator()(Element x, Element y) const {
    if (!full_.empty()) return full_[static_cast<std::size_t>(x) * size() + y];
    return from_identity_[group_->mul(group_->inverse(x), y)];
  }

 private:
  GroupPtr group_;
  std::vector<std::uint16_t> from_identity_;
  std::vector<std::uint16_t> full_;
  int diameter_ = 0;
};

inline WordMetricTable word_metric(const CayleyGraph& graph, std::size_t all_pairs_cap = 6000) {
  const std::size_t v = graph.vertex_count();
  auto identity_row = bfs_distances(graph, 0);
  std::vector<std::uint16_t> full;
  if (v <= all_pairs_cap) {
    full.resize(v * v);
    for (Element x = 0; x < v; ++x) {
      auto row = x == 0 ? identity_row : bfs_distances(graph, x);
      std::copy(row.begin(), row.end(), full.begin() + static_cast<std::ptrdiff_t>(x * v));
    }
  }
  return WordMetricTable(graph.group(), std::move(identity_row), std::move(full));
}

// ---------------------------------------------------------------------------
// Spectrum and expander statistics

struct ExpanderStats {
  double lambda2 = 0;
  double spectral_gap = 0;
  double diam_over_log = 0;
  double residual = 0;
  Eigen::VectorXd eigenvector;  // unit eigenvector of lambda2, orthogonal to constants
  int diameter = 0;
  std::size_t v = 0;
  // min_tail[t] = min over base vertices x of |{y : d(x,y) >= t}|.
  std::vector<std::size_t> min_tail;

  double far_fraction(double kappa) const {
    if (kappa < 0 || kappa > 1) throw Error(ErrorKind::kDomain, "kappa must lie in [0,1]");
    const auto t = static_cast<std::size_t>(std::ceil(kappa * diameter - 1e-12));
    if (t >= min_tail.size()) return 0.0;
    return static_cast<double>(min_tail[t]) / static_cast<double>(v);
  }
};

struct SpectrumOptions {
  std::size_t dense_cap = 4096;
  double tolerance = 1e-10;
  int max_iterations = 20000;
};

inline Eigen::MatrixXd adjacency_matrix(const CayleyGraph& graph) {
  const auto v = static_cast<Eigen::Index>(graph.vertex_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(v, v);
  for (Element x = 0; x < graph.vertex_count(); ++x)
    for (Element y : graph.neighbors(x)) a(x, y) += 1.0;
  return a;
}

inline ExpanderStats spectrum(const CayleyGraph& graph, const WordMetricTable& metric,
                              const SpectrumOptions& options = {}) {
  ExpanderStats s;
  s.v = graph.vertex_count();
  s.diameter = metric.diameter();
  SecondEigenpair pair;
  if (s.v <= options.dense_cap) {
    pair = second_eigenpair_dense(adjacency_matrix(graph));
  } else {
    const auto apply = [&graph](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
      for (Element u = 0; u < graph.vertex_count(); ++u) {
        double acc = 0;
        for (Element w : graph.neighbors(u)) acc += x[w];
        y[u] = acc;
      }
    };
    pair = second_eigenpair_lanczos(apply, static_cast<Eigen::Index>(s.v), options.tolerance,
                                    options.max_iterations);
  }
  s.lambda2 = pair.value;
  s.eigenvector = std::move(pair.vector);
  s.residual = pair.residual;
  s.spectral_gap = static_cast<double>(graph.degree()) - s.lambda2;
  s.diam_over_log = s.v > 1 ? s.diameter / std::log(static_cast<double>(s.v)) : 0.0;

  s.min_tail.assign(static_cast<std::size_t>(s.diameter) + 1, s.v);
  const auto fold_row = [&](auto&& dist_of) {
    std::vector<std::size_t> hist(static_cast<std::size_t>(s.diameter) + 1, 0);
    for (Element y = 0; y < s.v; ++y) ++hist[dist_of(y)];
    std::size_t tail = 0;
    for (int t = s.diameter; t >= 0; --t) {
      tail += hist[t];
      s.min_tail[t] = std::min(s.min_tail[t], tail);
    }
  };
  if (metric.has_full_matrix()) {
    for (Element x = 0; x < s.v; ++x) fold_row([&](Element y) { return metric(x, y); });
  } else {
    fold_row([&](Element y) { return metric.length(y); });
  }
  return s;
}

}  // namespace cgap
