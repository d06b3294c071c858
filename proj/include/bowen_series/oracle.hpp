#ifndef BOWEN_SERIES_ORACLE_HPP
#define BOWEN_SERIES_ORACLE_HPP

// Breadth-first search of the Cayley graph as ground truth for the coding.
//
// Group elements are keyed by their matrices: exactly for integral presets,
// otherwise by SU(1,1) entries with the sign fixed and compared within
// eps_key.  Inexact lookups go through a coarse grid so that nearby keys are
// always compared; two distinct elements closer than 10 eps_key abort the
// search.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "bowen_series/domain.hpp"

namespace bowen_series {

struct OracleOptions {
  double eps_key = 1e-7;
  std::uint64_t max_elements = 10'000'000;
};

class CayleyOracle {
 public:
  CayleyOracle(const GeneratorSet& gens, std::size_t max_n, const OracleOptions& opts = {})
      : gens_(gens), opts_(opts) {
    exact_ = !gens.matrices.empty();
    for (const auto& m : gens.matrices) exact_ = exact_ && m.is_exact();
    run(max_n);
  }

  std::size_t horizon() const { return spheres_.size() - 1; }
  bool exact() const { return exact_; }

  /// K_0..K_max_n
  std::vector<std::uint64_t> sphere_sizes() const {
    std::vector<std::uint64_t> out;
    for (const auto& s : spheres_) out.push_back(s.size());
    return out;
  }

  /// Shortlex-least words of the elements at distance n, in order.
  std::vector<Word> sphere_words(std::size_t n) const {
    std::vector<Word> out;
    for (std::size_t id : spheres_.at(n)) out.push_back(words_[id]);
    return out;
  }

  /// Element id of a word's value, if it lies within the horizon.
  std::optional<std::size_t> find(const Word& w) const { return lookup(gens_.evaluate(w)); }

  std::optional<std::size_t> depth(const Word& w) const {
    if (auto id = find(w)) return depths_[*id];
    return std::nullopt;
  }

  const Word& canonical_word(std::size_t id) const { return words_.at(id); }
  std::size_t depth_of(std::size_t id) const { return depths_.at(id); }

  /// Smallest distance seen between keys of distinct elements (inexact mode).
  double min_separation() const { return min_sep_; }

 private:
  struct FloatKey {
    std::array<double, 4> v;  // Re a, Im a, Re b, Im b
  };

  static FloatKey float_key(const Mobius& m) {
    auto e = m.entries();
    // SU(1,1): |a| >= 1, so the sign can be fixed by a robustly.
    const bool flip = std::abs(e[0].real()) > 1e-6 ? e[0].real() < 0 : e[0].imag() < 0;
    if (flip)
      for (auto& x : e) x = -x;
    return {{e[0].real(), e[0].imag(), e[1].real(), e[1].imag()}};
  }

  static double key_distance(const FloatKey& a, const FloatKey& b) {
    double d = 0;
    for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(a.v[k] - b.v[k]));
    return d;
  }

  using Cell = std::array<std::int64_t, 4>;
  struct CellHash {
    std::size_t operator()(const Cell& c) const {
      std::uint64_t h = 1469598103934665603ull;
      for (auto x : c) {
        h ^= static_cast<std::uint64_t>(x);
        h *= 1099511628211ull;
      }
      return static_cast<std::size_t>(h);
    }
  };

  double cell_size() const { return 1e3 * opts_.eps_key; }

  std::optional<std::size_t> lookup(const Mobius& m) const {
    if (exact_) {
      auto it = exact_index_.find(m.exact()->to_string());
      if (it == exact_index_.end()) return std::nullopt;
      return it->second;
    }
    const FloatKey k = float_key(m);
    std::optional<std::size_t> found;
    visit_cells(k, [&](std::size_t id) {
      const double d = key_distance(k, keys_[id]);
      if (d <= opts_.eps_key) found = id;
    });
    return found;
  }

  template <typename F>
  void visit_cells(const FloatKey& k, F&& f) const {
    const double h = cell_size();
    const double margin = 10.0 * opts_.eps_key;
    Cell base;
    std::array<int, 4> lo{}, hi{};
    for (int i = 0; i < 4; ++i) {
      const double q = k.v[i] / h;
      base[i] = static_cast<std::int64_t>(std::floor(q));
      const double frac = (q - std::floor(q)) * h;
      lo[i] = frac < margin ? -1 : 0;
      hi[i] = h - frac < margin ? 1 : 0;
    }
    Cell c;
    for (int a = lo[0]; a <= hi[0]; ++a)
      for (int b = lo[1]; b <= hi[1]; ++b)
        for (int d = lo[2]; d <= hi[2]; ++d)
          for (int e = lo[3]; e <= hi[3]; ++e) {
            c = {base[0] + a, base[1] + b, base[2] + d, base[3] + e};
            auto it = grid_.find(c);
            if (it == grid_.end()) continue;
            for (std::size_t id : it->second) f(id);
          }
  }

  /// Registers a new element unless already known; returns its id and
  /// whether it was new.
  std::pair<std::size_t, bool> insert(const Mobius& m, const Word& w, std::size_t depth) {
    if (exact_) {
      auto [it, fresh] = exact_index_.emplace(m.exact()->to_string(), elements_.size());
      if (!fresh) return {it->second, false};
    } else {
      const FloatKey k = float_key(m);
      std::optional<std::size_t> found;
      visit_cells(k, [&](std::size_t id) {
        const double d = key_distance(k, keys_[id]);
        if (d <= opts_.eps_key) {
          found = id;
        } else {
          min_sep_ = std::min(min_sep_, d);
          if (d <= 10.0 * opts_.eps_key)
            fail(ErrorKind::numeric, "group element keys within 10 eps_key at radius " + std::to_string(depth));
        }
      });
      if (found) return {*found, false};
      const double h = cell_size();
      Cell c;
      for (int i = 0; i < 4; ++i) c[i] = static_cast<std::int64_t>(std::floor(k.v[i] / h));
      grid_[c].push_back(elements_.size());
      keys_.push_back(k);
    }
    elements_.push_back(m);
    words_.push_back(w);
    depths_.push_back(depth);
    if (elements_.size() > opts_.max_elements)
      fail(ErrorKind::budget_exceeded, "Cayley graph search exceeds the element budget at radius " +
                                           std::to_string(depth));
    return {elements_.size() - 1, true};
  }

  void run(std::size_t max_n) {
    if (gens_.matrices.size() != gens_.size())
      fail(ErrorKind::invalid_input, "the oracle needs generator matrices");
    spheres_.push_back({insert(Mobius(), {}, 0).first});
    for (std::size_t n = 1; n <= max_n; ++n) {
      std::vector<std::size_t> next;
      for (std::size_t id : spheres_[n - 1]) {
        const Mobius g = elements_[id];
        const Word base = words_[id];
        for (Label x = 0; x < gens_.size(); ++x) {
          Word w = base;
          w.push_back(x);
          auto [nid, fresh] = insert(g * gens_.matrices[x], w, n);
          if (fresh) next.push_back(nid);
        }
      }
      spheres_.push_back(std::move(next));
    }
  }

  const GeneratorSet& gens_;
  OracleOptions opts_;
  bool exact_ = false;
  std::vector<Mobius> elements_;
  std::vector<Word> words_;
  std::vector<std::size_t> depths_;
  std::vector<std::vector<std::size_t>> spheres_;
  std::unordered_map<std::string, std::size_t> exact_index_;
  std::vector<FloatKey> keys_;
  std::unordered_map<Cell, std::vector<std::size_t>, CellHash> grid_;
  double min_sep_ = std::numeric_limits<double>::infinity();
};

struct BfsSphere {
  std::size_t n = 0;
  std::uint64_t K = 0;
  std::vector<Word> words;
};

inline std::vector<BfsSphere> bfs_spheres(const GeneratorSet& gens, std::size_t max_n,
                                          const OracleOptions& opts = {}) {
  CayleyOracle oracle(gens, max_n, opts);
  std::vector<BfsSphere> out;
  const auto sizes = oracle.sphere_sizes();
  for (std::size_t n = 0; n <= max_n; ++n) out.push_back({n, sizes[n], oracle.sphere_words(n)});
  return out;
}

/// True iff the element of w lies at distance |w| from the identity.
inline bool is_shortest(const CayleyOracle& oracle, const Word& w) {
  if (w.size() > oracle.horizon()) fail(ErrorKind::invalid_input, "word longer than the search horizon");
  const auto d = oracle.depth(w);
  return d && *d == w.size();
}

}  // namespace bowen_series

#endif  // BOWEN_SERIES_ORACLE_HPP
