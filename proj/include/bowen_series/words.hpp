#ifndef BOWEN_SERIES_WORDS_HPP
#define BOWEN_SERIES_WORDS_HPP

// The alphabet map pi, sphere enumeration, multiplicities, cycles and
// special chains.
//
// A word w has multiplicity m(w) = number of allowed symbol sequences I_1..I_n
// with pi(I_1)...pi(I_n) = w, so that sum_w m(w) = W_n.  Its separated
// multiplicity counts preimages that differ at every position; a collision
// is a word where this is at least 2.  K_n counts the
// distinct words and is computed from the deterministic automaton whose
// states are the sets of symbols reachable after reading a word.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "bowen_series/analysis.hpp"

namespace bowen_series {

using SymbolSequence = std::vector<std::size_t>;

inline constexpr std::uint64_t kDefaultEnumerationBudget = 100'000'000;

inline bool is_valid_sequence(const MarkovCoding& c, const SymbolSequence& seq) {
  for (std::size_t r = 0; r < seq.size(); ++r) {
    if (seq[r] >= c.size()) return false;
    if (r > 0 && !c.P(seq[r - 1], seq[r])) return false;
  }
  return true;
}

/// Letterwise label map; rejects sequences with a forbidden transition.
inline Word pi(const MarkovCoding& c, const SymbolSequence& seq) {
  if (!is_valid_sequence(c, seq)) fail(ErrorKind::invalid_input, "sequence uses a forbidden transition");
  Word w;
  w.reserve(seq.size());
  for (std::size_t s : seq) w.push_back(c.labels[s]);
  return w;
}

inline std::string spell(const MarkovCoding& c, const Word& w, const std::string& sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += sep;
    out += c.names.at(w[i]);
  }
  return out;
}

inline void check_budget(const MarkovCoding& c, std::size_t n, std::uint64_t budget) {
  const BigInt w = count_allowed_words(c.P, n);
  if (w > BigInt(budget))
    fail(ErrorKind::budget_exceeded, "W_" + std::to_string(n) + " = " + w.str() +
                                         " exceeds the enumeration budget " + std::to_string(budget));
}

/// Depth-first enumeration of allowed sequences of length n in
/// lexicographic symbol order.
inline void for_each_sequence(const MarkovCoding& c, std::size_t n,
                              const std::function<void(const SymbolSequence&)>& visit,
                              std::uint64_t budget = kDefaultEnumerationBudget) {
  check_budget(c, n, budget);
  if (n == 0) {
    visit({});
    return;
  }
  SymbolSequence seq;
  std::function<void()> rec = [&]() {
    if (seq.size() == n) {
      visit(seq);
      return;
    }
    if (seq.empty()) {
      for (std::size_t s = 0; s < c.size(); ++s) {
        seq.push_back(s);
        rec();
        seq.pop_back();
      }
      return;
    }
    for (std::size_t s : c.P.row(seq.back())) {
      seq.push_back(s);
      rec();
      seq.pop_back();
    }
  };
  rec();
}

/// Preimages of a word grouped by (first symbol, last symbol), with the
/// number of sequences in each group; sorted.
struct Preimages {
  struct Entry {
    std::size_t first;
    std::size_t last;
    std::uint64_t count;
  };
  std::vector<Entry> entries;

  bool empty() const { return entries.empty(); }

  /// Number of symbol sequences mapping to the word.
  std::uint64_t multiplicity() const {
    std::uint64_t m = 0;
    for (const auto& e : entries) m += e.count;
    return m;
  }

  /// Size of the largest family of preimages that differ at every position.
  /// Two preimages that agree at some position agree at all earlier ones, so
  /// this is the number of distinct first symbols.
  std::size_t separated() const {
    std::size_t k = 0;
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (i == 0 || entries[i].first != entries[i - 1].first) ++k;
    return k;
  }
};

namespace detail {

inline std::vector<std::vector<std::size_t>> symbols_by_label(const MarkovCoding& c) {
  std::vector<std::vector<std::size_t>> out(c.generators());
  for (std::size_t s = 0; s < c.size(); ++s) out[c.labels[s]].push_back(s);
  return out;
}

inline Preimages advance(const MarkovCoding& c, const Preimages& cur, bool at_start, Label e,
                         const std::vector<std::vector<std::size_t>>& by_label,
                         std::vector<std::uint64_t>& scratch) {
  Preimages out;
  if (at_start) {
    for (std::size_t s : by_label[e]) out.entries.push_back({s, s, 1});
    return out;
  }
  const auto& targets = by_label[e];
  std::size_t k = 0;
  while (k < cur.entries.size()) {
    const std::size_t first = cur.entries[k].first;
    for (; k < cur.entries.size() && cur.entries[k].first == first; ++k)
      for (std::size_t j : c.P.row(cur.entries[k].last))
        if (c.labels[j] == e) scratch[j] += cur.entries[k].count;
    for (std::size_t s : targets)
      if (scratch[s]) {
        out.entries.push_back({first, s, scratch[s]});
        scratch[s] = 0;
      }
  }
  return out;
}

}  // namespace detail

/// Depth-first enumeration of the distinct words of length n in
/// lexicographic label order, with their preimages.
inline void for_each_word(const MarkovCoding& c, std::size_t n,
                          const std::function<void(const Word&, const Preimages&)>& visit,
                          std::uint64_t budget = kDefaultEnumerationBudget) {
  check_budget(c, n, budget);
  if (n == 0) {
    visit({}, {});
    return;
  }
  const auto by_label = detail::symbols_by_label(c);
  std::vector<std::uint64_t> scratch(c.size(), 0);
  Word w;
  std::vector<Preimages> stack{{}};
  std::function<void()> rec = [&]() {
    if (w.size() == n) {
      visit(w, stack.back());
      return;
    }
    for (Label e = 0; e < c.generators(); ++e) {
      auto next = detail::advance(c, stack.back(), w.empty(), e, by_label, scratch);
      if (next.empty()) continue;
      w.push_back(e);
      stack.push_back(std::move(next));
      rec();
      stack.pop_back();
      w.pop_back();
    }
  };
  rec();
}

/// Preimages of a word (empty when it is not in the image of pi).
inline Preimages word_preimages(const MarkovCoding& c, const Word& w) {
  const auto by_label = detail::symbols_by_label(c);
  std::vector<std::uint64_t> scratch(c.size(), 0);
  Preimages cur;
  for (std::size_t r = 0; r < w.size(); ++r) {
    if (w[r] >= c.generators()) return {};
    cur = detail::advance(c, cur, r == 0, w[r], by_label, scratch);
    if (cur.empty()) return {};
  }
  return cur;
}

inline std::uint64_t word_multiplicity(const MarkovCoding& c, const Word& w) {
  if (w.empty()) return 1;
  return word_preimages(c, w).multiplicity();
}

/// Deterministic automaton accepting the words in the image of pi: a state
/// is the set of symbols a word can end on.  States are built on demand.
class WordAutomaton {
 public:
  using State = std::vector<std::size_t>;
  static constexpr std::size_t dead = static_cast<std::size_t>(-1);

  explicit WordAutomaton(const MarkovCoding& c) : c_(c) {
    std::vector<State> init(c.generators());
    for (std::size_t s = 0; s < c.size(); ++s) init[c.labels[s]].push_back(s);
    initial_.assign(c.generators(), dead);
    for (Label e = 0; e < c.generators(); ++e)
      if (!init[e].empty()) initial_[e] = intern(std::move(init[e]));
  }

  /// State reached by a one-letter word, or dead.
  std::size_t initial(Label e) const { return initial_[e]; }

  /// Outgoing transitions as (letter, state) pairs.
  const std::vector<std::pair<Label, std::size_t>>& successors(std::size_t id) {
    if (!expanded_[id]) {
      std::vector<State> next(c_.generators());
      std::vector<bool> mark(c_.size(), false);
      for (std::size_t i : states_[id])
        for (std::size_t j : c_.P.row(i))
          if (!mark[j]) {
            mark[j] = true;
            next[c_.labels[j]].push_back(j);
          }
      std::vector<std::pair<Label, std::size_t>> row;
      for (Label e = 0; e < c_.generators(); ++e) {
        if (next[e].empty()) continue;
        std::sort(next[e].begin(), next[e].end());
        row.push_back({e, intern(std::move(next[e]))});
      }
      delta_[id] = std::move(row);
      expanded_[id] = true;
    }
    return delta_[id];
  }

  std::size_t size() const { return states_.size(); }
  const State& state(std::size_t id) const { return states_[id]; }

 private:
  std::size_t intern(State s) {
    auto [it, fresh] = ids_.emplace(s, states_.size());
    if (fresh) {
      states_.push_back(std::move(s));
      delta_.emplace_back();
      expanded_.push_back(false);
    }
    return it->second;
  }

  const MarkovCoding& c_;
  std::map<State, std::size_t> ids_;
  std::vector<State> states_;
  std::vector<std::vector<std::pair<Label, std::size_t>>> delta_;
  std::vector<bool> expanded_;
  std::vector<std::size_t> initial_;
};

/// K_0..K_N from the word automaton.
inline std::vector<BigInt> sphere_sizes(const MarkovCoding& c, std::size_t N) {
  std::vector<BigInt> out{1};
  if (N == 0) return out;
  WordAutomaton dfa(c);
  std::map<std::size_t, BigInt> layer;
  for (Label e = 0; e < c.generators(); ++e)
    if (dfa.initial(e) != WordAutomaton::dead) layer[dfa.initial(e)] += 1;
  for (std::size_t n = 1; n <= N; ++n) {
    BigInt total = 0;
    for (const auto& [id, cnt] : layer) total += cnt;
    out.push_back(total);
    if (n == N) break;
    std::map<std::size_t, BigInt> next;
    for (const auto& [id, cnt] : layer)
      for (const auto& [e, t] : dfa.successors(id)) next[t] += cnt;
    layer = std::move(next);
  }
  return out;
}

/// Pair counts from the synchronized product chain on label-matched symbol
/// pairs.  `all_pairs[n]` counts ordered pairs of sequences of length n with
/// equal words (sum of m(w)^2); `separated_pairs[n]` those that differ at
/// every position.
struct PairCounts {
  std::vector<BigInt> all_pairs;
  std::vector<BigInt> separated_pairs;
  /// Ordered pairs that differ at some position and agree at a later one.
  std::vector<BigInt> recoinciding;
};

inline PairCounts pair_counts(const MarkovCoding& c, std::size_t N) {
  PairCounts out;
  out.all_pairs.push_back(1);
  out.separated_pairs.push_back(0);
  out.recoinciding.push_back(0);
  if (N == 0) return out;
  const std::size_t m = c.size();
  // state (I, J, phase): phase 0 = equal so far, 1 = different at every
  // position so far, 2 = diverged after agreeing, 3 = re-coincided
  using Key = std::tuple<std::size_t, std::size_t, int>;
  std::map<Key, BigInt> layer;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (c.labels[i] == c.labels[j]) layer[{i, j, i == j ? 0 : 1}] += 1;
  for (std::size_t n = 1; n <= N; ++n) {
    BigInt all = 0, sep = 0, back = 0;
    for (const auto& [key, cnt] : layer) {
      all += cnt;
      if (std::get<2>(key) == 1) sep += cnt;
      if (std::get<2>(key) == 3) back += cnt;
    }
    out.all_pairs.push_back(all);
    out.separated_pairs.push_back(sep);
    out.recoinciding.push_back(back);
    if (n == N) break;
    std::map<Key, BigInt> next;
    for (const auto& [key, cnt] : layer) {
      const auto [i, j, phase] = key;
      for (std::size_t a : c.P.row(i))
        for (std::size_t b : c.P.row(j)) {
          if (c.labels[a] != c.labels[b]) continue;
          int p = phase;
          if (phase == 0 && a != b) p = 2;
          if ((phase == 1 || phase == 2) && a == b) p = 3;
          next[{a, b, p}] += cnt;
        }
    }
    layer = std::move(next);
  }
  return out;
}

/// Words of each length with two or more preimages that differ at every
/// position, from a deterministic automaton whose states are the sets of
/// (first symbol, current symbol) pairs reachable on a word.
struct CollisionCounts {
  std::vector<BigInt> collisions;  ///< words with separated multiplicity >= 2
  /// separated multiplicity -> number of words, per length
  std::vector<std::map<std::size_t, BigInt>> histogram;
  std::size_t states = 0;
};

inline CollisionCounts collision_counts(const MarkovCoding& c, std::size_t N) {
  CollisionCounts out;
  out.collisions.push_back(0);
  out.histogram.push_back({{1, BigInt(1)}});
  if (N == 0) return out;
  using State = std::vector<std::pair<std::size_t, std::size_t>>;
  std::map<State, std::size_t> ids;
  std::vector<State> states;
  std::vector<std::size_t> firsts;
  std::vector<std::vector<std::pair<Label, std::size_t>>> delta;
  std::vector<bool> expanded;
  auto intern = [&](State s) {
    auto [it, fresh] = ids.emplace(s, states.size());
    if (fresh) {
      std::size_t k = 0;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (i == 0 || s[i].first != s[i - 1].first) ++k;
      firsts.push_back(k);
      states.push_back(std::move(s));
      delta.emplace_back();
      expanded.push_back(false);
    }
    return it->second;
  };
  auto successors = [&](std::size_t id) -> const std::vector<std::pair<Label, std::size_t>>& {
    if (!expanded[id]) {
      std::vector<State> next(c.generators());
      for (const auto& [f, l] : states[id])
        for (std::size_t j : c.P.row(l)) next[c.labels[j]].push_back({f, j});
      std::vector<std::pair<Label, std::size_t>> row;
      for (Label e = 0; e < c.generators(); ++e) {
        if (next[e].empty()) continue;
        std::sort(next[e].begin(), next[e].end());
        next[e].erase(std::unique(next[e].begin(), next[e].end()), next[e].end());
        row.push_back({e, intern(std::move(next[e]))});
      }
      delta[id] = std::move(row);
      expanded[id] = true;
    }
    return delta[id];
  };
  std::map<std::size_t, BigInt> layer;
  {
    std::vector<State> init(c.generators());
    for (std::size_t s = 0; s < c.size(); ++s) init[c.labels[s]].push_back({s, s});
    for (auto& st : init)
      if (!st.empty()) layer[intern(std::move(st))] += 1;
  }
  for (std::size_t n = 1; n <= N; ++n) {
    std::map<std::size_t, BigInt> hist;
    BigInt coll = 0;
    for (const auto& [id, cnt] : layer) {
      hist[firsts[id]] += cnt;
      if (firsts[id] >= 2) coll += cnt;
    }
    out.collisions.push_back(coll);
    out.histogram.push_back(std::move(hist));
    if (n == N) break;
    std::map<std::size_t, BigInt> next;
    for (const auto& [id, cnt] : layer) {
      const auto row = successors(id);
      for (const auto& [e, t] : row) next[t] += cnt;
    }
    layer = std::move(next);
  }
  out.states = states.size();
  return out;
}

// ---------------------------------------------------------------------------
// Cycles

enum class Orientation { anticlockwise, clockwise };

inline const char* to_string(Orientation o) {
  return o == Orientation::anticlockwise ? "anticlockwise" : "clockwise";
}

/// A cycle occupying word positions [start, start + length) that runs round
/// the R-vertex `vertex` in the given orientation.
struct Cycle {
  std::size_t start = 0;
  std::size_t length = 0;
  std::size_t vertex = 0;
  Orientation orientation = Orientation::anticlockwise;
};

/// Combinatorial vertex data used for cycle detection; built once per coding.
class CycleStructure {
 public:
  explicit CycleStructure(const MarkovCoding& c) : c_(c) {
    const std::size_t N = c.vertices.size();
    ccw_.resize(N);
    cw_.resize(N);
    for (std::size_t v = 0; v < N; ++v) {
      ccw_[v] = c.vertices[v].loop;
      Word inv(ccw_[v].rbegin(), ccw_[v].rend());
      for (auto& x : inv) x = c.inverse[x];
      cw_[v] = inv;
    }
  }

  std::size_t num_vertices() const { return ccw_.size(); }
  std::size_t n(std::size_t v) const { return c_.vertices[v].n; }

  const Word& loop(std::size_t v, Orientation o) const {
    return o == Orientation::anticlockwise ? ccw_[v] : cw_[v];
  }

  /// R-vertex at which an orientation-o cycle starting with letter x turns.
  std::optional<std::size_t> vertex_for(Label x, Orientation o) const {
    for (std::size_t v = 0; v < ccw_.size(); ++v) {
      const Word& l = loop(v, o);
      if (!l.empty() && l[0] == x) return v;
    }
    return std::nullopt;
  }

  /// Whether w[start, start+len) is a cycle of orientation o; returns the vertex.
  std::optional<std::size_t> cycle_at(const Word& w, std::size_t start, std::size_t len, Orientation o) const {
    if (len == 0 || start + len > w.size()) return std::nullopt;
    const auto v = vertex_for(w[start], o);
    if (!v) return std::nullopt;
    const Word& l = loop(*v, o);
    if (len >= l.size()) return std::nullopt;
    for (std::size_t k = 0; k < len; ++k)
      if (l[k] != w[start + k]) return std::nullopt;
    return v;
  }

  /// R-vertex where a cycle consecutive to `prev` must turn: with e the
  /// letter continuing prev, e^-1 B must be a cycle, so B follows e^-1 on
  /// the loop starting with e^-1.
  std::optional<std::size_t> consecutive_vertex(const Cycle& prev) const {
    const Orientation o = prev.orientation;
    const Word& l = loop(prev.vertex, o);
    if (prev.length >= l.size()) return std::nullopt;
    const auto u = vertex_for(c_.inverse[l[prev.length]], o);
    if (!u || loop(*u, o).size() < 2) return std::nullopt;
    return vertex_for(loop(*u, o)[1], o);
  }

  bool consecutive(const Cycle& a, const Cycle& b) const {
    if (a.orientation != b.orientation) return false;
    const auto v = consecutive_vertex(a);
    return v && *v == b.vertex;
  }

 private:
  const MarkovCoding& c_;
  std::vector<Word> ccw_, cw_;
};

/// Greedy left-to-right decomposition into longest cycles; positions where
/// no cycle starts (letters at sides without interior vertices) become
/// single-letter pieces with vertex = -1.
struct CycleDecomposition {
  std::vector<Cycle> cycles;
  std::vector<bool> consecutive;  ///< consecutive[k]: cycles k and k+1 are consecutive
};

inline CycleDecomposition detect_cycles(const Word& w, const CycleStructure& cs) {
  CycleDecomposition out;
  std::size_t pos = 0;
  while (pos < w.size()) {
    Cycle best;
    best.start = pos;
    best.length = 0;
    for (Orientation o : {Orientation::anticlockwise, Orientation::clockwise}) {
      for (std::size_t len = w.size() - pos; len >= 1; --len) {
        if (auto v = cs.cycle_at(w, pos, len, o)) {
          if (len > best.length) best = {pos, len, *v, o};
          break;
        }
      }
    }
    if (best.length == 0) best = {pos, 1, static_cast<std::size_t>(-1), Orientation::anticlockwise};
    out.cycles.push_back(best);
    pos += best.length;
  }
  for (std::size_t k = 0; k + 1 < out.cycles.size(); ++k) {
    const auto& a = out.cycles[k];
    const auto& b = out.cycles[k + 1];
    out.consecutive.push_back(a.vertex != static_cast<std::size_t>(-1) &&
                              b.vertex != static_cast<std::size_t>(-1) && cs.consecutive(a, b));
  }
  return out;
}

/// Length rules for special chains B_1...B_k at vertices v_1..v_k.
enum class ChainRule {
  /// |B_1| <= n(v_1)-1, |B_k| <= n(v_k), |B_i| = n(v_i)-1 in between.
  literal,
  /// As literal but the chain must close with a half turn: |B_k| = n(v_k).
  half_turn,
};

/// All parses of w[start..] as a special chain.
inline std::vector<std::vector<Cycle>> special_chain_parses(const Word& w, std::size_t start,
                                                             const CycleStructure& cs, ChainRule rule) {
  std::vector<std::vector<Cycle>> out;
  std::vector<Cycle> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    for (Orientation o : {Orientation::anticlockwise, Orientation::clockwise}) {
      if (!cur.empty() && cur.back().orientation != o) continue;
      for (std::size_t len = 1; pos + len <= w.size(); ++len) {
        auto v = cs.cycle_at(w, pos, len, o);
        if (!v) break;
        const Cycle cyc{pos, len, *v, o};
        if (!cur.empty() && !cs.consecutive(cur.back(), cyc)) break;
        const std::size_t n = cs.n(*v);
        const bool first = cur.empty();
        const bool last = pos + len == w.size();
        bool ok;
        if (last) {
          if (first)
            ok = rule == ChainRule::literal ? len + 1 <= n : len == n;
          else
            ok = rule == ChainRule::literal ? len <= n : len == n;
        } else {
          ok = first ? len + 1 <= n : len + 1 == n;
        }
        if (!ok) continue;
        cur.push_back(cyc);
        if (last)
          out.push_back(cur);
        else
          rec(pos + len);
        cur.pop_back();
      }
    }
  };
  if (start < w.size()) rec(start);
  return out;
}

inline bool is_special_chain(const Word& w, const CycleStructure& cs, ChainRule rule = ChainRule::literal) {
  return !special_chain_parses(w, 0, cs, rule).empty();
}

/// Whether some nonempty suffix of w is a special chain.
inline bool ends_in_special_chain(const Word& w, const CycleStructure& cs, ChainRule rule = ChainRule::literal) {
  for (std::size_t s = 0; s < w.size(); ++s)
    if (!special_chain_parses(w, s, cs, rule).empty()) return true;
  return false;
}

/// Distinct words of length exactly n that are special chains, generated
/// constructively from the vertex data.
inline std::size_t count_special_chains(const CycleStructure& cs, std::size_t n,
                                        ChainRule rule = ChainRule::literal) {
  std::set<Word> found;
  Word w;
  std::vector<Cycle> cur;
  std::function<void()> rec = [&]() {
    const std::size_t pos = w.size();
    for (Orientation o : {Orientation::anticlockwise, Orientation::clockwise}) {
      if (!cur.empty() && cur.back().orientation != o) continue;
      std::vector<std::size_t> candidates;
      if (cur.empty()) {
        for (std::size_t v = 0; v < cs.num_vertices(); ++v) candidates.push_back(v);
      } else if (auto v = cs.consecutive_vertex(cur.back())) {
        candidates.push_back(*v);
      }
      for (std::size_t v : candidates) {
        const Word& l = cs.loop(v, o);
        const std::size_t nv = cs.n(v);
        if (l.empty()) continue;
        for (std::size_t len = 1; len < l.size() && pos + len <= n; ++len) {
          const bool first = cur.empty();
          const bool last = pos + len == n;
          bool ok;
          if (last) {
            if (first)
              ok = rule == ChainRule::literal ? len + 1 <= nv : len == nv;
            else
              ok = rule == ChainRule::literal ? len <= nv : len == nv;
          } else {
            ok = first ? len + 1 <= nv : len + 1 == nv;
          }
          if (!ok) continue;
          cur.push_back({pos, len, v, o});
          w.insert(w.end(), l.begin(), l.begin() + static_cast<std::ptrdiff_t>(len));
          if (last)
            found.insert(w);
          else
            rec();
          w.resize(pos);
          cur.pop_back();
        }
      }
    }
  };
  if (n > 0) rec();
  return found.size();
}

// ---------------------------------------------------------------------------
// Sphere enumeration

struct SphereEntry {
  Word word;
  std::uint64_t multiplicity = 0;  ///< all preimage sequences
  std::size_t separated = 0;       ///< preimages pairwise different at every position
};

struct SphereEnumeration {
  std::size_t n = 0;
  std::vector<SphereEntry> entries;          ///< only when words are stored
  BigInt K = 0;                              ///< distinct words
  BigInt W = 0;                              ///< sum of multiplicities
  std::map<std::uint64_t, std::uint64_t> histogram;  ///< multiplicity -> number of words
  std::map<std::size_t, std::uint64_t> separated_histogram;
  std::uint64_t collisions = 0;              ///< words with separated multiplicity >= 2
  std::uint64_t special_chain_suffix = 0;    ///< words ending in a special chain
  std::uint64_t max_multiplicity = 0;
};

struct EnumerationOptions {
  bool store_words = true;
  bool special_chains = false;
  ChainRule rule = ChainRule::literal;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

inline SphereEnumeration enumerate_sphere(const MarkovCoding& c, std::size_t n,
                                          const EnumerationOptions& opts = {}) {
  SphereEnumeration out;
  out.n = n;
  std::optional<CycleStructure> cs;
  if (opts.special_chains) cs.emplace(c);
  std::uint64_t K = 0, W = 0;
  for_each_word(
      c, n,
      [&](const Word& w, const Preimages& pre) {
        const std::uint64_t m = n == 0 ? 1 : pre.multiplicity();
        const std::size_t sep = n == 0 ? 1 : pre.separated();
        ++K;
        W += m;
        ++out.histogram[m];
        ++out.separated_histogram[sep];
        if (sep >= 2) ++out.collisions;
        out.max_multiplicity = std::max(out.max_multiplicity, m);
        if (cs && ends_in_special_chain(w, *cs, opts.rule)) ++out.special_chain_suffix;
        if (opts.store_words) out.entries.push_back({w, m, sep});
      },
      opts.budget);
  out.K = K;
  out.W = W;
  return out;
}

}  // namespace bowen_series

#endif  // BOWEN_SERIES_WORDS_HPP
