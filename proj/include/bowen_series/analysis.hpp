#ifndef BOWEN_SERIES_ANALYSIS_HPP
#define BOWEN_SERIES_ANALYSIS_HPP

// Irreducibility, strict irreducibility, equivalence classes and word counts
// of a 0/1 transition matrix.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "bowen_series/coding.hpp"

namespace bowen_series {

/// Strongly connected components (Tarjan, iterative), each sorted, listed
/// by smallest member.
inline std::vector<std::vector<std::size_t>> strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, none), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::vector<std::size_t>> comps;
  std::size_t counter = 0;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (node, next edge)
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != none) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e < adj[v].size()) {
        const std::size_t w = adj[v][e++];
        if (index[w] == none) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
    }
  }
  std::sort(comps.begin(), comps.end());
  return comps;
}

struct IrreducibilityResult {
  bool irreducible = false;
  std::vector<std::vector<std::size_t>> components;
};

inline IrreducibilityResult is_irreducible(const TransitionMatrix& P) {
  if (P.size() == 0) fail(ErrorKind::invalid_input, "empty matrix");
  IrreducibilityResult r;
  r.components = strongly_connected_components(P.rows());
  r.irreducible = r.components.size() == 1;
  return r;
}

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace detail

/// Classes of the relation generated by I ~ J when f(I) and f(J) overlap,
/// i.e. rows of P sharing a column.  Sorted by smallest member.
inline std::vector<std::vector<std::size_t>> equivalence_classes(const TransitionMatrix& P) {
  const std::size_t n = P.size();
  detail::UnionFind uf(n);
  std::vector<std::size_t> first(n, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : P.row(i)) {
      if (first[j] == static_cast<std::size_t>(-1))
        first[j] = i;
      else
        uf.unite(first[j], i);
    }
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> slot(n, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = uf.find(i);
    if (slot[r] == static_cast<std::size_t>(-1)) {
      slot[r] = classes.size();
      classes.emplace_back();
    }
    classes[slot[r]].push_back(i);
  }
  return classes;
}

/// Irreducibility of P P^T from the boolean product, via SCC.
inline bool product_irreducible(const TransitionMatrix& P) {
  const std::size_t n = P.size();
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> bits(n, std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : P.row(i)) bits[i][j / 64] |= std::uint64_t{1} << (j % 64);
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t w = 0; w < words; ++w)
        if (bits[i][w] & bits[k][w]) {
          adj[i].push_back(k);
          break;
        }
  return strongly_connected_components(adj).size() == 1;
}

struct StrictResult {
  bool irreducible = false;
  bool strictly_irreducible = false;
  bool product_method = false;  ///< P P^T irreducible
  bool class_method = false;    ///< a single equivalence class
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::vector<std::size_t>> classes;
};

inline StrictResult is_strictly_irreducible(const TransitionMatrix& P) {
  StrictResult r;
  for (std::size_t i = 0; i < P.size(); ++i)
    if (P.row(i).empty()) fail(ErrorKind::invalid_input, "row " + std::to_string(i) + " is zero");
  const auto irr = is_irreducible(P);
  r.irreducible = irr.irreducible;
  r.components = irr.components;
  r.classes = equivalence_classes(P);
  r.class_method = r.classes.size() == 1;
  r.product_method = product_irreducible(P);
  if (r.class_method != r.product_method)
    fail(ErrorKind::internal, "strict irreducibility methods disagree");
  r.strictly_irreducible = r.irreducible && r.product_method;
  return r;
}

/// W_0..W_N with W_0 = 1 and W_n = 1^T P^{n-1} 1.
inline std::vector<BigInt> allowed_word_counts(const TransitionMatrix& P, std::size_t N) {
  std::vector<BigInt> out{1};
  if (N == 0) return out;
  const std::size_t m = P.size();
  std::vector<BigInt> ending(m, BigInt(1));  // sequences of the current length ending at each symbol
  out.push_back(BigInt(m));
  for (std::size_t n = 2; n <= N; ++n) {
    std::vector<BigInt> next(m, BigInt(0));
    for (std::size_t i = 0; i < m; ++i)
      if (ending[i] != 0)
        for (std::size_t j : P.row(i)) next[j] += ending[i];
    ending = std::move(next);
    BigInt total = 0;
    for (const auto& x : ending) total += x;
    out.push_back(total);
  }
  return out;
}

inline BigInt count_allowed_words(const TransitionMatrix& P, std::size_t n) {
  return allowed_word_counts(P, n).back();
}

/// Covering and chaining conditions for a family J_0..J_m of symbols.
inline bool double_cover_check(const TransitionMatrix& P, const std::vector<std::size_t>& family) {
  if (family.empty()) return false;
  std::vector<bool> covered(P.size(), false);
  for (std::size_t i : family) {
    if (i >= P.size()) fail(ErrorKind::invalid_input, "family member outside the alphabet");
    for (std::size_t j : P.row(i)) covered[j] = true;
  }
  if (!std::all_of(covered.begin(), covered.end(), [](bool b) { return b; })) return false;
  for (std::size_t k = 0; k + 1 < family.size(); ++k) {
    const auto& a = P.row(family[k]);
    const auto& b = P.row(family[k + 1]);
    std::vector<std::size_t> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    if (common.empty()) return false;
  }
  return true;
}

/// Perron eigenvalue estimate by power iteration on the row-sum vector.
inline double perron_eigenvalue(const TransitionMatrix& P, std::size_t iterations = 2000, double tol = 1e-14) {
  const std::size_t m = P.size();
  std::vector<double> x(m, 1.0), y(m);
  double lambda = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j : P.row(i)) y[i] += x[j];
    // average with the previous iterate to damp periodic components
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) norm += y[i];
    double sum_x = 0.0;
    for (double v : x) sum_x += v;
    const double next = norm / sum_x;
    for (std::size_t i = 0; i < m; ++i) x[i] = 0.5 * (x[i] + y[i] / next);
    if (std::abs(next - lambda) < tol * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

/// Smallest K with sum_{r=1..K} P^r positive entrywise, if any.
inline std::optional<std::size_t> covering_constant(const TransitionMatrix& P) {
  const std::size_t m = P.size();
  std::size_t K = 0;
  for (std::size_t s = 0; s < m; ++s) {
    std::vector<std::size_t> dist(m, 0);
    std::vector<std::size_t> frontier{s};
    std::vector<bool> seen(m, false);
    std::size_t step = 0, reached = 0;
    while (!frontier.empty()) {
      ++step;
      std::vector<std::size_t> next;
      for (std::size_t i : frontier)
        for (std::size_t j : P.row(i))
          if (!seen[j]) {
            seen[j] = true;
            dist[j] = step;
            ++reached;
            next.push_back(j);
          }
      frontier = std::move(next);
    }
    if (reached != m) return std::nullopt;
    K = std::max(K, *std::max_element(dist.begin(), dist.end()));
  }
  return K;
}

struct ChainReport {
  bool irreducible = false;
  bool strictly_irreducible = false;
  bool product_method = false;
  bool class_method = false;
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<BigInt> allowed_word_counts;
  double perron = 0.0;
  std::optional<std::size_t> covering_constant;
};

inline ChainReport analyze(const TransitionMatrix& P, std::size_t horizon = 12) {
  ChainReport r;
  const auto s = is_strictly_irreducible(P);
  r.irreducible = s.irreducible;
  r.strictly_irreducible = s.strictly_irreducible;
  r.product_method = s.product_method;
  r.class_method = s.class_method;
  r.components = s.components;
  r.classes = s.classes;
  r.allowed_word_counts = allowed_word_counts(P, horizon);
  r.perron = perron_eigenvalue(P);
  r.covering_constant = covering_constant(P);
  return r;
}

}  // namespace bowen_series

#endif  // BOWEN_SERIES_ANALYSIS_HPP
