#ifndef BOWEN_SERIES_ERGODIC_HPP
#define BOWEN_SERIES_ERGODIC_HPP

// Sphere and Cesaro averages of an observable under a measure-preserving
// action of the group.
//
// For allowed sequences I_1..I_n with word w = pi(I_1)...pi(I_n) we average
// phi(T_w x) where T_w = T_{w_1} o ... o T_{w_n}.  The finite-action dynamic
// program runs over sequences *ending* at each symbol:
//
//   G_1[j](y) = phi(T_{pi(j)} y)
//   G_k[j](y) = sum_{i : p_ij = 1} G_{k-1}[i](T_{pi(j)} y)
//   s_n(y)    = sum_j G_n[j](y) / W_n
//
// so that the letter appended last acts first.

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>
#include <thread>
#include <exception>

#include "bowen_series/words.hpp"

namespace bowen_series {

enum class ActionKind { finite_permutation, torus_integer_matrix };

inline const char* to_string(ActionKind k) {
  return k == ActionKind::finite_permutation ? "finite_permutation" : "torus_integer_matrix";
}

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// An action with one map per generator label of a coding, indexed by label.
struct ActionSpec {
  ActionKind kind = ActionKind::finite_permutation;
  std::size_t size = 0;  ///< ground set size, or torus dimension
  std::vector<std::vector<std::size_t>> permutations;
  std::vector<IntMatrix> matrices;

  std::size_t labels() const {
    return kind == ActionKind::finite_permutation ? permutations.size() : matrices.size();
  }

  static ActionSpec trivial_finite(std::size_t generators, std::size_t m) {
    ActionSpec a;
    a.size = m;
    std::vector<std::size_t> id(m);
    std::iota(id.begin(), id.end(), 0);
    a.permutations.assign(generators, id);
    return a;
  }
};

namespace detail {

inline std::vector<std::size_t> compose(const std::vector<std::size_t>& f, const std::vector<std::size_t>& g) {
  std::vector<std::size_t> out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) out[x] = f[g[x]];
  return out;
}

inline IntMatrix identity_matrix(std::size_t d) {
  IntMatrix m(d, std::vector<std::int64_t>(d, 0));
  for (std::size_t i = 0; i < d; ++i) m[i][i] = 1;
  return m;
}

inline std::int64_t checked_mul_add(std::int64_t acc, std::int64_t a, std::int64_t b) {
  std::int64_t p, s;
  if (__builtin_mul_overflow(a, b, &p) || __builtin_add_overflow(acc, p, &s))
    fail(ErrorKind::numeric, "integer overflow beyond the 64-bit range");
  return s;
}

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t d = a.size();
  IntMatrix out(d, std::vector<std::int64_t>(d, 0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < d; ++j) out[i][j] = checked_mul_add(out[i][j], a[i][k], b[k][j]);
  return out;
}

inline BigInt determinant(const IntMatrix& m) {
  // Bareiss elimination, exact over the integers.
  const std::size_t d = m.size();
  std::vector<std::vector<BigInt>> a(d, std::vector<BigInt>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a[i][j] = m[i][j];
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < d && a[r][k] == 0) ++r;
      if (r == d) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < d; ++i)
      for (std::size_t j = k + 1; j < d; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return d == 0 ? BigInt(1) : sign * a[d - 1][d - 1];
}

}  // namespace detail

struct ActionReport {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Checks that the maps are invertible, that e^-1 acts as the inverse of e,
/// and that every vertex relation of the coding acts trivially.
inline ActionReport validate_action(const ActionSpec& a, const MarkovCoding& c) {
  ActionReport r;
  auto bad = [&](const std::string& s) {
    r.ok = false;
    r.failures.push_back(s);
  };
  const std::size_t g = c.generators();
  if (a.labels() != g) {
    bad("action defines " + std::to_string(a.labels()) + " maps for " + std::to_string(g) + " generators");
    return r;
  }
  if (a.size == 0) {
    bad("empty ground set or dimension");
    return r;
  }
  if (a.kind == ActionKind::finite_permutation) {
    std::vector<std::size_t> id(a.size);
    std::iota(id.begin(), id.end(), 0);
    for (Label e = 0; e < g; ++e) {
      const auto& p = a.permutations[e];
      std::vector<bool> seen(a.size, false);
      bool perm = p.size() == a.size;
      for (std::size_t x : p) {
        if (!perm || x >= a.size || seen[x]) {
          perm = false;
          break;
        }
        seen[x] = true;
      }
      if (!perm) bad("map of " + c.names[e] + " is not a permutation of " + std::to_string(a.size) + " points");
    }
    if (!r.ok) return r;
    for (Label e = 0; e < g; ++e)
      if (detail::compose(a.permutations[e], a.permutations[c.inverse[e]]) != id)
        bad("maps of " + c.names[e] + " and " + c.names[c.inverse[e]] + " are not mutually inverse");
    for (std::size_t v = 0; v < c.vertices.size(); ++v) {
      const Word& loop = c.vertices[v].loop;
      if (loop.empty()) continue;
      auto m = id;
      for (Label x : loop) m = detail::compose(m, a.permutations[x]);
      if (m != id) bad("vertex relation " + spell(c, loop) + " does not act trivially");
    }
    return r;
  }
  const std::size_t d = a.size;
  for (Label e = 0; e < g; ++e) {
    const auto& m = a.matrices[e];
    bool shape = m.size() == d;
    for (const auto& row : m) shape = shape && row.size() == d;
    if (!shape) {
      bad("matrix of " + c.names[e] + " is not " + std::to_string(d) + "x" + std::to_string(d));
      continue;
    }
    const BigInt det = detail::determinant(m);
    if (det != 1 && det != -1) bad("matrix of " + c.names[e] + " has determinant " + det.str());
  }
  if (!r.ok) return r;
  const IntMatrix id = detail::identity_matrix(d);
  for (Label e = 0; e < g; ++e)
    if (detail::multiply(a.matrices[e], a.matrices[c.inverse[e]]) != id)
      bad("matrices of " + c.names[e] + " and " + c.names[c.inverse[e]] + " are not mutually inverse");
  for (const auto& vx : c.vertices) {
    if (vx.loop.empty()) continue;
    IntMatrix m = id;
    for (Label x : vx.loop) m = detail::multiply(m, a.matrices[x]);
    if (m != id) bad("vertex relation " + spell(c, vx.loop) + " does not act trivially");
  }
  return r;
}

inline void require_valid_action(const ActionSpec& a, const MarkovCoding& c) {
  const auto r = validate_action(a, c);
  if (!r.ok) fail(ErrorKind::invalid_action, r.failures.front());
}

// ---------------------------------------------------------------------------
// Finite actions

/// Values of phi over the ground set.
using FiniteObservable = std::vector<BigRational>;

namespace detail {

/// phi as integer numerators over a common denominator.
struct ScaledObservable {
  std::vector<BigInt> numer;
  BigInt denom = 1;
};

inline ScaledObservable scale(const FiniteObservable& phi) {
  ScaledObservable s;
  for (const auto& v : phi) s.denom = boost::multiprecision::lcm(s.denom, boost::multiprecision::denominator(v));
  for (const auto& v : phi) s.numer.push_back(boost::multiprecision::numerator(v) * (s.denom / boost::multiprecision::denominator(v)));
  return s;
}

inline void check_finite(const ActionSpec& a, const FiniteObservable& phi) {
  if (a.kind != ActionKind::finite_permutation) fail(ErrorKind::invalid_action, "a finite action is required");
  if (phi.size() != a.size)
    fail(ErrorKind::invalid_input, "observable has " + std::to_string(phi.size()) + " values for " +
                                       std::to_string(a.size) + " points");
}

}  // namespace detail

/// s_0..s_{N-1} of the word sphere averages, exactly.  The denominators
/// accumulated by the recurrence are checked against W_n.
inline std::vector<std::vector<BigRational>> sphere_averages_finite(const MarkovCoding& c, const ActionSpec& a,
                                                                    const FiniteObservable& phi, std::size_t N) {
  detail::check_finite(a, phi);
  std::vector<std::vector<BigRational>> out;
  if (N == 0) return out;
  out.push_back(phi);
  if (N == 1) return out;
  const auto s = detail::scale(phi);
  const std::size_t m = a.size, k = c.size();
  std::vector<std::vector<std::size_t>> pred(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j : c.P.row(i)) pred[j].push_back(i);
  const auto W = allowed_word_counts(c.P, N - 1);
  std::vector<std::vector<BigInt>> G(k, std::vector<BigInt>(m));
  std::vector<BigInt> count(k, BigInt(1));
  for (std::size_t j = 0; j < k; ++j) {
    const auto& T = a.permutations[c.labels[j]];
    for (std::size_t y = 0; y < m; ++y) G[j][y] = s.numer[T[y]];
  }
  for (std::size_t n = 1; n < N; ++n) {
    if (n > 1) {
      std::vector<std::vector<BigInt>> next(k, std::vector<BigInt>(m, BigInt(0)));
      std::vector<BigInt> next_count(k, BigInt(0));
      for (std::size_t j = 0; j < k; ++j) {
        const auto& T = a.permutations[c.labels[j]];
        for (std::size_t i : pred[j]) {
          next_count[j] += count[i];
          for (std::size_t y = 0; y < m; ++y) next[j][y] += G[i][T[y]];
        }
      }
      G = std::move(next);
      count = std::move(next_count);
    }
    BigInt total = 0;
    for (const auto& x : count) total += x;
    if (total != W[n]) fail(ErrorKind::internal, "sphere average denominator differs from W_" + std::to_string(n));
    if (total == 0) fail(ErrorKind::numeric, "vanishing denominator W_" + std::to_string(n));
    std::vector<BigRational> sn(m);
    for (std::size_t y = 0; y < m; ++y) {
      BigInt sum = 0;
      for (std::size_t j = 0; j < k; ++j) sum += G[j][y];
      sn[y] = BigRational(sum, s.denom * total);
    }
    out.push_back(std::move(sn));
  }
  return out;
}

inline std::vector<BigRational> sphere_average_finite(const MarkovCoding& c, const ActionSpec& a,
                                                      const FiniteObservable& phi, std::size_t n) {
  return sphere_averages_finite(c, a, phi, n + 1).back();
}

/// The same averages by summing over every allowed sequence.
inline std::vector<BigRational> sphere_average_brute_force(const MarkovCoding& c, const ActionSpec& a,
                                                           const FiniteObservable& phi, std::size_t n,
                                                           std::uint64_t budget = kDefaultEnumerationBudget) {
  detail::check_finite(a, phi);
  const std::size_t m = a.size;
  std::vector<BigRational> sum(m, BigRational(0));
  BigInt count = 0;
  for_each_sequence(
      c, n,
      [&](const SymbolSequence& seq) {
        ++count;
        for (std::size_t x = 0; x < m; ++x) {
          std::size_t y = x;
          for (std::size_t r = seq.size(); r-- > 0;) y = a.permutations[c.labels[seq[r]]][y];
          sum[x] += phi[y];
        }
      },
      budget);
  for (auto& v : sum) v /= BigRational(count);
  return sum;
}

/// Averages over the distinct words of each length, i.e. over the group
/// sphere S(n), computed on the word automaton.
inline std::vector<std::vector<BigRational>> group_sphere_averages_finite(const MarkovCoding& c, const ActionSpec& a,
                                                                          const FiniteObservable& phi, std::size_t N) {
  detail::check_finite(a, phi);
  std::vector<std::vector<BigRational>> out;
  if (N == 0) return out;
  out.push_back(phi);
  const auto s = detail::scale(phi);
  const std::size_t m = a.size;
  WordAutomaton dfa(c);
  std::map<std::size_t, std::pair<BigInt, std::vector<BigInt>>> layer;  // state -> (words, sums)
  for (Label e = 0; e < c.generators(); ++e) {
    const std::size_t t = dfa.initial(e);
    if (t == WordAutomaton::dead) continue;
    auto& [cnt, sums] = layer[t];
    if (sums.empty()) sums.assign(m, BigInt(0));
    cnt += 1;
    for (std::size_t y = 0; y < m; ++y) sums[y] += s.numer[a.permutations[e][y]];
  }
  for (std::size_t n = 1; n < N; ++n) {
    if (n > 1) {
      std::map<std::size_t, std::pair<BigInt, std::vector<BigInt>>> next;
      for (const auto& [id, entry] : layer)
        for (const auto& [e, t] : dfa.successors(id)) {
          auto& [cnt, sums] = next[t];
          if (sums.empty()) sums.assign(m, BigInt(0));
          cnt += entry.first;
          const auto& T = a.permutations[e];
          for (std::size_t y = 0; y < m; ++y) sums[y] += entry.second[T[y]];
        }
      layer = std::move(next);
    }
    BigInt K = 0;
    std::vector<BigInt> total(m, BigInt(0));
    for (const auto& [id, entry] : layer) {
      K += entry.first;
      for (std::size_t y = 0; y < m; ++y) total[y] += entry.second[y];
    }
    std::vector<BigRational> sn(m);
    for (std::size_t y = 0; y < m; ++y) sn[y] = BigRational(total[y], s.denom * K);
    out.push_back(std::move(sn));
  }
  return out;
}

/// Mean of phi over each orbit of the action.
inline std::vector<BigRational> conditional_expectation_finite(const ActionSpec& a, const FiniteObservable& phi) {
  detail::check_finite(a, phi);
  const std::size_t m = a.size;
  detail::UnionFind uf(m);
  for (const auto& p : a.permutations)
    for (std::size_t x = 0; x < m; ++x) uf.unite(x, p[x]);
  std::map<std::size_t, std::pair<BigRational, std::size_t>> acc;
  for (std::size_t x = 0; x < m; ++x) {
    auto& [sum, n] = acc[uf.find(x)];
    sum += phi[x];
    ++n;
  }
  std::vector<BigRational> out(m);
  for (std::size_t x = 0; x < m; ++x) {
    const auto& [sum, n] = acc[uf.find(x)];
    out[x] = sum / BigRational(n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Torus actions

/// phi(y) = Re sum_k c_k exp(2 pi i k.y) on R^d / Z^d.
struct TorusObservable {
  std::vector<std::pair<std::vector<std::int64_t>, std::complex<double>>> terms;

  double mean() const {
    double m = 0;
    for (const auto& [k, coeff] : terms)
      if (std::all_of(k.begin(), k.end(), [](std::int64_t x) { return x == 0; })) m += coeff.real();
    return m;
  }

  double operator()(const std::vector<long double>& y) const {
    long double re = 0;
    for (const auto& [k, coeff] : terms) {
      long double phase = 0;
      for (std::size_t i = 0; i < k.size(); ++i) phase += static_cast<long double>(k[i]) * y[i];
      phase -= std::floor(phase);
      const long double t = 2 * std::numbers::pi_v<long double> * phase;
      re += coeff.real() * std::cos(t) - coeff.imag() * std::sin(t);
    }
    return static_cast<double>(re);
  }
};

/// The first `count` points of the Halton sequence in dimension d.
inline std::vector<std::vector<double>> halton_points(std::size_t d, std::size_t count = 16) {
  static const std::array<unsigned, 12> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (d > primes.size()) fail(ErrorKind::invalid_input, "Halton points are available up to dimension 12");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 1; i <= count; ++i) {
    std::vector<double> p;
    for (std::size_t j = 0; j < d; ++j) {
      double f = 1, r = 0;
      for (std::size_t k = i; k > 0; k /= primes[j]) {
        f /= primes[j];
        r += f * static_cast<double>(k % primes[j]);
      }
      p.push_back(r);
    }
    out.push_back(std::move(p));
  }
  return out;
}

struct TorusAverage {
  std::vector<double> pullback;  ///< via frequencies k -> A_w^T k
  std::vector<double> direct;    ///< via iterating the points
  BigInt W = 0;
};

inline constexpr std::size_t kDefaultTorusCap = 12;

/// Word sphere average of phi at the given points for one n, computed by
/// two independent paths.
inline TorusAverage sphere_average_torus(const MarkovCoding& c, const ActionSpec& a, const TorusObservable& phi,
                                         std::size_t n, const std::vector<std::vector<double>>& points,
                                         std::size_t cap = kDefaultTorusCap,
                                         std::uint64_t budget = kDefaultEnumerationBudget) {
  if (a.kind != ActionKind::torus_integer_matrix) fail(ErrorKind::invalid_action, "a torus action is required");
  if (n > cap) fail(ErrorKind::budget_exceeded, "torus averages are capped at n = " + std::to_string(cap));
  const std::size_t d = a.size;
  for (const auto& [k, coeff] : phi.terms)
    if (k.size() != d) fail(ErrorKind::invalid_input, "frequency of the wrong dimension");
  for (const auto& p : points)
    if (p.size() != d) fail(ErrorKind::invalid_input, "evaluation point of the wrong dimension");
  const std::size_t P = points.size();
  TorusAverage out;
  std::vector<long double> pull(P, 0), direct(P, 0), pull_c(P, 0), direct_c(P, 0);
  auto add = [](long double& sum, long double& comp, long double v) {
    const long double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  };
  std::vector<std::vector<long double>> pts;
  for (const auto& p : points) pts.emplace_back(p.begin(), p.end());
  std::vector<IntMatrix> prefix{detail::identity_matrix(d)};
  for_each_sequence(
      c, n,
      [&](const SymbolSequence& seq) {
        ++out.W;
        IntMatrix A = detail::identity_matrix(d);
        for (std::size_t s : seq) A = detail::multiply(A, a.matrices[c.labels[s]]);
        // pullback: phi(A x) = Re sum_k c_k exp(2 pi i (A^T k).x)
        TorusObservable pulled;
        for (const auto& [k, coeff] : phi.terms) {
          std::vector<std::int64_t> kk(d, 0);
          for (std::size_t j = 0; j < d; ++j)
            for (std::size_t i = 0; i < d; ++i) kk[j] = detail::checked_mul_add(kk[j], A[i][j], k[i]);
          pulled.terms.push_back({kk, coeff});
        }
        for (std::size_t q = 0; q < P; ++q) add(pull[q], pull_c[q], pulled(pts[q]));
        // direct: apply the generator maps right to left, reducing mod 1
        for (std::size_t q = 0; q < P; ++q) {
          std::vector<long double> y = pts[q];
          for (std::size_t r = seq.size(); r-- > 0;) {
            const IntMatrix& M = a.matrices[c.labels[seq[r]]];
            std::vector<long double> z(d, 0);
            for (std::size_t i = 0; i < d; ++i) {
              for (std::size_t j = 0; j < d; ++j) z[i] += static_cast<long double>(M[i][j]) * y[j];
              z[i] -= std::floor(z[i]);
            }
            y = std::move(z);
          }
          add(direct[q], direct_c[q], phi(y));
        }
      },
      budget);
  const long double W = out.W.convert_to<long double>();
  for (std::size_t q = 0; q < P; ++q) {
    out.pullback.push_back(static_cast<double>((pull[q] + pull_c[q]) / W));
    out.direct.push_back(static_cast<double>((direct[q] + direct_c[q]) / W));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cesaro means

struct AverageSeries {
  std::vector<std::vector<double>> s;  ///< s_n(x), n = 0..N-1
  std::vector<std::vector<double>> c;  ///< c_{n+1}(x) = mean of s_0..s_n
  std::vector<double> target;
  std::vector<double> error;           ///< max_x |c_{n+1}(x) - target(x)|
  std::vector<BigInt> W;               ///< denominators W_n
};

/// Exact Cesaro means c_1..c_N of exact sphere averages.
inline std::vector<std::vector<BigRational>> cesaro_exact(const std::vector<std::vector<BigRational>>& s) {
  std::vector<std::vector<BigRational>> out;
  if (s.empty()) return out;
  std::vector<BigRational> sum(s[0].size(), BigRational(0));
  for (std::size_t n = 0; n < s.size(); ++n) {
    for (std::size_t x = 0; x < sum.size(); ++x) sum[x] += s[n][x];
    std::vector<BigRational> cn(sum.size());
    for (std::size_t x = 0; x < sum.size(); ++x) cn[x] = sum[x] / BigRational(n + 1);
    out.push_back(std::move(cn));
  }
  return out;
}

/// Running Cesaro means in floating point with compensated summation, and
/// their distance from a target.
inline AverageSeries cesaro(const std::vector<std::vector<double>>& s, const std::vector<double>& target) {
  AverageSeries out;
  out.s = s;
  out.target = target;
  if (s.empty()) return out;
  const std::size_t m = s[0].size();
  if (target.size() != m) fail(ErrorKind::invalid_input, "target has the wrong size");
  std::vector<long double> sum(m, 0), comp(m, 0);
  for (std::size_t n = 0; n < s.size(); ++n) {
    std::vector<double> cn(m);
    double err = 0;
    for (std::size_t x = 0; x < m; ++x) {
      const long double v = s[n][x];
      const long double t = sum[x] + v;
      comp[x] += std::abs(sum[x]) >= std::abs(v) ? (sum[x] - t) + v : (v - t) + sum[x];
      sum[x] = t;
      cn[x] = static_cast<double>((sum[x] + comp[x]) / static_cast<long double>(n + 1));
      err = std::max(err, std::abs(cn[x] - target[x]));
    }
    out.c.push_back(std::move(cn));
    out.error.push_back(err);
  }
  return out;
}

inline std::vector<double> to_double(const std::vector<BigRational>& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.convert_to<double>());
  return out;
}

/// Sphere averages, Cesaro means and errors against E(phi | invariant sets)
/// for a finite action.
inline AverageSeries average_finite(const MarkovCoding& c, const ActionSpec& a, const FiniteObservable& phi,
                                    std::size_t N) {
  require_valid_action(a, c);
  const auto exact = sphere_averages_finite(c, a, phi, N);
  std::vector<std::vector<double>> s;
  for (const auto& v : exact) s.push_back(to_double(v));
  auto out = cesaro(s, to_double(conditional_expectation_finite(a, phi)));
  out.W = allowed_word_counts(c.P, N == 0 ? 0 : N - 1);
  return out;
}

/// The same for a torus action at the given points, with the mean of phi as
/// target; both evaluation paths must agree within `agreement`.  Points are
/// split over up to `threads` worker threads.
inline AverageSeries average_torus(const MarkovCoding& c, const ActionSpec& a, const TorusObservable& phi,
                                   std::size_t N, const std::vector<std::vector<double>>& points,
                                   double agreement = 1e-9, std::size_t cap = kDefaultTorusCap,
                                   std::uint64_t budget = kDefaultEnumerationBudget, std::size_t threads = 1) {
  require_valid_action(a, c);
  if (N > cap + 1) fail(ErrorKind::budget_exceeded, "torus averages are capped at n = " + std::to_string(cap));
  const std::size_t m = points.size();
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, m));
  std::vector<std::vector<double>> s(N, std::vector<double>(m));
  std::vector<BigInt> W(N);
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t t) {
    try {
      std::vector<std::vector<double>> mine;
      std::vector<std::size_t> idx;
      for (std::size_t q = t; q < m; q += workers) {
        mine.push_back(points[q]);
        idx.push_back(q);
      }
      for (std::size_t n = 0; n < N; ++n) {
        const auto r = sphere_average_torus(c, a, phi, n, mine, cap, budget);
        for (std::size_t k = 0; k < idx.size(); ++k) {
          if (std::abs(r.pullback[k] - r.direct[k]) > agreement)
            fail(ErrorKind::numeric,
                 "torus averages disagree between frequency pullback and point iteration at n = " +
                     std::to_string(n));
          s[n][idx[k]] = r.pullback[k];
        }
        if (t == 0) W[n] = r.W;
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  auto series = cesaro(s, std::vector<double>(m, phi.mean()));
  series.W = std::move(W);
  return series;
}

}  // namespace bowen_series

#endif  // BOWEN_SERIES_ERGODIC_HPP
