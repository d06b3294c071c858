// Acceptance suite: one line per criterion, "criterion k: PASS|FAIL ...".
// `acceptance k` runs criterion k only; the exit status is nonzero if any
// selected criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "bowen_series.hpp"

using namespace bowen_series;

namespace {

// Pinned limits.
constexpr double kC1Seconds = 1.0;
constexpr double kC2Seconds = 1.0;
constexpr double kC3Seconds = 10.0;
constexpr double kC4Seconds = 10.0;
constexpr double kC5Seconds = 300.0;
constexpr double kC6Seconds = 300.0;
constexpr double kC7Seconds = 120.0;
constexpr double kC8Seconds = 120.0;
constexpr double kC9Seconds = 120.0;
constexpr std::size_t kC3RandomCodings = 100;
constexpr std::uint64_t kC3Seed = 314159;
constexpr std::size_t kC5MaxN = 6;
constexpr std::size_t kC6EnumMaxN = 8;
constexpr std::size_t kC6ConverseMaxN = 6;
constexpr std::size_t kC6ChainMaxN = 12;
constexpr std::size_t kC6ChainBound = 64;
constexpr std::size_t kC6RatioFrom = 4;
constexpr std::size_t kC6RatioTo = 12;
constexpr double kC7Error200 = 0.05;
constexpr std::size_t kC7N = 500;
constexpr std::size_t kC8Actions = 20;
constexpr std::size_t kC8MaxPoints = 8;
constexpr std::size_t kC8MaxN = 6;
constexpr std::uint64_t kC8Seed = 271828;
constexpr std::size_t kC9MaxN = 8;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

Label label(const MarkovCoding& c, const std::string& name) {
  for (Label x = 0; x < c.generators(); ++x)
    if (c.names[x] == name) return x;
  fail(ErrorKind::internal, "no generator " + name);
}

std::vector<std::vector<std::size_t>> rows_1based(const MarkovCoding& c) {
  std::vector<std::vector<std::size_t>> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto& r = out[c.display_index(i) - 1];
    for (std::size_t j : c.P.row(i)) r.push_back(c.display_index(j));
    std::sort(r.begin(), r.end());
  }
  return out;
}

ActionSpec z2_action(const MarkovCoding& c) {
  auto a = ActionSpec::trivial_finite(c.generators(), 2);
  a.permutations[label(c, "a1")] = {1, 0};
  a.permutations[label(c, "a1^-1")] = {1, 0};
  return a;
}

// ---------------------------------------------------------------------------

void criterion1(Outcome& o) {
  const auto g = build_coding(sl2z());
  const auto& c = g.coding;
  const auto r = analyze(c.P);
  o.require(c.size() == 8, "8 intervals");
  o.require(c.cut_points == std::vector<std::string>{"inf", "-2", "-1", "-1/2", "0", "1/2", "1", "2"}, "cut points");
  const std::vector<std::vector<std::size_t>> table = {{1, 2}, {3, 4}, {7}, {8}, {1}, {2}, {5, 6}, {7, 8}};
  o.require(rows_1based(c) == table, "transition table");
  const std::vector<std::vector<std::size_t>> classes = {{1, 5, 6}, {2}, {3, 4, 8}, {7}};
  o.require(display_groups(c, r.classes) == classes, "equivalence classes");
  o.require(r.irreducible && !r.strictly_irreducible, "verdict");
  o.require(g.markov.ok(), "Markov property");
  o.detail << " classes={3,4,8},{5,6,1},{2},{7} strictly_irreducible=" << r.strictly_irreducible;
}

void criterion2(Outcome& o) {
  const auto d = sl2z();
  const auto base = build_coding(d);
  // Intervals whose label can be chosen, in display numbering.
  std::vector<std::size_t> ambiguous;
  for (std::size_t i = 0; i < base.partition.size(); ++i)
    if (base.partition.intervals[i].ambiguous()) ambiguous.push_back(i);
  o.require(!ambiguous.empty(), "some interval is ambiguous");
  o.detail << " ambiguous intervals:";
  for (std::size_t i : ambiguous) o.detail << " " << base.coding.display_index(i);
  const auto& intervals = base.partition.intervals;
  for (std::size_t mask = 1; mask < (std::size_t(1) << ambiguous.size()); ++mask) {
    CodingOptions opts;
    for (std::size_t k = 0; k < ambiguous.size(); ++k) {
      if (!(mask >> k & 1)) continue;
      const std::size_t i = ambiguous[k];
      for (std::size_t side : intervals[i].sides)
        if (d.side(side).label != base.coding.labels[i]) opts.choices[i] = d.side(side).label;
    }
    const auto g = build_coding(d, opts);
    const auto r = is_strictly_irreducible(g.coding.P);
    o.require(g.markov.ok(), "flipped coding is Markov");
    o.require(r.classes.size() >= 2, "at least two classes after flip mask " + std::to_string(mask));
    o.detail << "; flip";
    for (std::size_t k = 0; k < ambiguous.size(); ++k)
      if (mask >> k & 1) o.detail << " " << base.coding.display_index(ambiguous[k]);
    o.detail << " -> " << r.classes.size() << " classes";
  }
  // The intervals numbered 4 and 5 lie in a single L(e) here; forcing another
  // label is rejected.
  for (std::size_t shown : {4, 5}) {
    std::size_t i = 0;
    while (base.coding.display_index(i) != shown) ++i;
    CodingOptions opts;
    opts.choices[i] = base.coding.labels[i] == label(base.coding, "T") ? label(base.coding, "S") : label(base.coding, "T");
    bool rejected = false;
    try {
      build_coding(d, opts);
    } catch (const Error& e) {
      rejected = e.kind() == ErrorKind::invalid_coding;
    }
    o.detail << "; interval " << shown << (rejected ? " has no alternative label" : " accepted a flip");
    if (!rejected) {
      const auto g = build_coding(d, opts);
      o.require(is_strictly_irreducible(g.coding.P).classes.size() >= 2, "classes after flipping " + std::to_string(shown));
    }
  }
}

void criterion3(Outcome& o) {
  for (const auto& d : {ideal_triangle(), surface_4g(2)}) {
    const auto r = is_strictly_irreducible(build_coding(d).coding.P);
    o.require(r.product_method && r.class_method, d.name() + " strictly irreducible by both methods");
  }
  std::size_t compared = 0;
  for (const auto& d : {sl2z(), ideal_triangle(), surface_4g(2), surface_4g(3), surface_4g(2, SurfacePairing::opposite),
                        surface_4g(3, SurfacePairing::opposite)}) {
    for (auto policy : {LabelPolicy::paper_default, LabelPolicy::clockwise, LabelPolicy::anticlockwise}) {
      CodingOptions opts;
      opts.policy = policy;
      const auto r = is_strictly_irreducible(build_coding(d, opts).coding.P);
      o.require(r.product_method == r.class_method, d.name() + " methods agree");
      ++compared;
    }
  }
  std::mt19937_64 rng(kC3Seed);
  std::size_t strict = 0;
  for (std::size_t t = 0; t < kC3RandomCodings; ++t) {
    const std::size_t m = 3 + t % 18;
    std::bernoulli_distribution coin(0.05 + 0.4 * static_cast<double>(t % 10) / 10.0);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    std::vector<std::vector<int>> a(m, std::vector<int>(m, 0));
    for (auto& row : a) {
      for (auto& x : row) x = coin(rng);
      row[pick(rng)] = 1;
    }
    const auto r = is_strictly_irreducible(TransitionMatrix::from_dense(a));
    o.require(r.product_method == r.class_method, "random coding " + std::to_string(t) + " methods agree");
    strict += r.strictly_irreducible;
    ++compared;
  }
  o.detail << " compared=" << compared << " random strictly irreducible=" << strict << "/" << kC3RandomCodings;
}

void criterion4(Outcome& o) {
  std::size_t pairs = 0, points = 0, violations = 0;
  for (const auto& d : {sl2z(), ideal_triangle(), surface_4g(2), surface_4g(3), surface_4g(2, SurfacePairing::opposite),
                        surface_4g(3, SurfacePairing::opposite)}) {
    for (auto policy : {LabelPolicy::paper_default, LabelPolicy::clockwise, LabelPolicy::anticlockwise}) {
      CodingOptions opts;
      opts.policy = policy;
      const auto g = build_coding(d, opts);
      pairs += g.markov.checked_pairs;
      points += g.markov.checked_points;
      violations += g.markov.violations.size();
      o.require(g.markov.ok(), d.name() + " Markov property");
    }
  }
  o.detail << " pairs=" << pairs << " cut points mapped=" << points << " violations=" << violations;
}

void criterion5(Outcome& o) {
  for (const auto& d : {surface_4g(2), sl2z()}) {
    const auto c = build_coding(d).coding;
    const auto cmp = compare_with_oracle(c, d.generators(), kC5MaxN);
    o.require(cmp.ok, d.name() + " spheres, shortestness and K_n against BFS");
    const auto K = sphere_sizes(c, kC5MaxN);
    for (std::size_t n = 1; n <= kC5MaxN; ++n) o.require(K[n] == BigInt(cmp.oracle_K[n]), d.name() + " K_n");
    std::vector<std::size_t> bad;
    std::uint64_t worst = 0;
    for (std::size_t n = 1; n <= kC5MaxN; ++n) {
      EnumerationOptions opts;
      opts.store_words = false;
      const auto e = enumerate_sphere(c, n, opts);
      // Preimages that agree somewhere count once; see Preimages::separated.
      for (const auto& [m, count] : e.separated_histogram)
        if (m < 1 || m > 2) {
          bad.push_back(n);
          break;
        }
      worst = std::max(worst, e.max_multiplicity);
    }
    o.detail << " " << d.name() << ": oracle " << (cmp.ok ? "ok" : "mismatch") << ", max raw sequence count " << worst;
    if (!bad.empty()) {
      o.detail << ", multiplicity > 2 at n =";
      for (std::size_t n : bad) o.detail << " " << n;
    }
    o.require(bad.empty(), d.name() + " multiplicities in {1,2}");
  }
}

void criterion6(Outcome& o) {
  const auto c = build_coding(surface_4g(2)).coding;
  const CycleStructure cs(c);
  const auto cc = collision_counts(c, kC6ChainMaxN);
  const auto K = sphere_sizes(c, kC6ChainMaxN);
  std::uint64_t forward_bad = 0, converse_bad = 0, half_missed = 0, half_extra = 0;
  for (std::size_t n = 1; n <= kC6EnumMaxN; ++n) {
    std::uint64_t collisions = 0;
    for_each_word(c, n, [&](const Word& w, const Preimages& p) {
      const bool twin = p.separated() >= 2;
      collisions += twin;
      if (twin && !ends_in_special_chain(w, cs)) ++forward_bad;
      if (n <= kC6ConverseMaxN) {
        if (!twin && ends_in_special_chain(w, cs)) ++converse_bad;
        const bool half = ends_in_special_chain(w, cs, ChainRule::half_turn);
        half_missed += twin && !half;
        half_extra += !twin && half;
      }
    });
    o.require(cc.collisions[n] == BigInt(collisions), "collision DP equals enumeration at n=" + std::to_string(n));
  }
  o.require(forward_bad == 0, "every multiplicity-2 word ends in a special chain");
  o.require(converse_bad == 0, "every word ending in a special chain has multiplicity 2");
  o.detail << " collisions:";
  for (std::size_t n = 1; n <= kC6ChainMaxN; ++n) o.detail << " " << cc.collisions[n];
  o.detail << "; non-collision words ending in a special chain (n<=" << kC6ConverseMaxN << ")=" << converse_bad
           << "; half-turn rule: collisions without such a suffix=" << half_missed << ", other words with one=" << half_extra;
  std::size_t worst = 0;
  o.detail << "; special chains:";
  for (std::size_t n = 1; n <= kC6ChainMaxN; ++n) {
    const std::size_t s = count_special_chains(cs, n);
    worst = std::max(worst, s);
    o.detail << " " << s;
  }
  o.require(worst <= kC6ChainBound, "special chain count bounded");
  for (std::size_t n = kC6RatioFrom; n < kC6RatioTo; ++n)
    o.require(BigRational(cc.collisions[n + 1], K[n + 1]) < BigRational(cc.collisions[n], K[n]),
              "collisions/K_n decreasing at n=" + std::to_string(n));
}

void criterion7(Outcome& o) {
  const auto c = build_coding(surface_4g(2)).coding;
  const FiniteObservable phi{BigRational(1), BigRational(0)};
  const auto series = average_finite(c, z2_action(c), phi, kC7N);
  const double e50 = series.error[49], e200 = series.error[199], e500 = series.error[kC7N - 1];
  o.require(e200 < kC7Error200, "error at N=200");
  o.require(e500 < e50, "error(500) < error(50)");
  o.detail << " error N=50 " << fmt12(e50) << ", N=200 " << fmt12(e200) << ", N=500 " << fmt12(e500);
  const auto trivial = ActionSpec::trivial_finite(c.generators(), 2);
  const auto ts = sphere_averages_finite(c, trivial, phi, kC7N);
  const auto tc = cesaro_exact(ts);
  bool exact = conditional_expectation_finite(trivial, phi) == phi;
  for (const auto& v : tc) exact = exact && v == phi;
  o.require(exact, "trivial action gives c_N = phi = E(phi|B)");
  const auto ones = sphere_averages_finite(c, z2_action(c), {BigRational(1), BigRational(1)}, kC7N + 1);
  bool unit = true;
  for (const auto& v : ones) unit = unit && v[0] == 1 && v[1] == 1;
  o.require(unit, "s_n(1) = 1");
}

// Random actions that respect the relations of each preset group.
ActionSpec random_action(const MarkovCoding& c, const std::string& source, std::size_t m, std::mt19937_64& rng) {
  auto perm = [&] {
    std::vector<std::size_t> p(m);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
  };
  auto inv = [&](const std::vector<std::size_t>& p) {
    std::vector<std::size_t> q(m);
    for (std::size_t x = 0; x < m; ++x) q[p[x]] = x;
    return q;
  };
  auto conj = [&](const std::vector<std::size_t>& p, const std::vector<std::size_t>& h) {
    return detail::compose(h, detail::compose(p, inv(h)));
  };
  auto involution = [&] {
    std::vector<std::size_t> p(m);
    std::iota(p.begin(), p.end(), 0);
    for (std::size_t x = 0; x + 1 < m; x += 2)
      if (rng() % 2) std::swap(p[x], p[x + 1]);
    return conj(p, perm());
  };
  auto order3 = [&] {
    std::vector<std::size_t> p(m);
    std::iota(p.begin(), p.end(), 0);
    for (std::size_t x = 0; x + 2 < m; x += 3)
      if (rng() % 2) {
        p[x] = x + 1;
        p[x + 1] = x + 2;
        p[x + 2] = x;
      }
    return conj(p, perm());
  };
  auto a = ActionSpec::trivial_finite(c.generators(), m);
  if (source == "ideal_triangle") {
    for (Label x = 0; x < c.generators(); ++x) a.permutations[x] = involution();
    return a;
  }
  if (source == "sl2z") {
    const auto s = involution(), u = order3();
    for (const auto& t : {detail::compose(s, u), detail::compose(u, s), inv(detail::compose(s, u)), inv(detail::compose(u, s))}) {
      a.permutations[label(c, "S")] = s;
      a.permutations[label(c, "T")] = t;
      a.permutations[label(c, "T^-1")] = inv(t);
      if (validate_action(a, c).ok) return a;
    }
    fail(ErrorKind::internal, "no relation-respecting sl2z action found");
  }
  // surface group: through the abelianization, rotations of Z/m
  for (Label x = 0; x < c.generators(); ++x) {
    if (c.inverse[x] < x) continue;
    const std::size_t r = rng() % m;
    std::vector<std::size_t> p(m);
    for (std::size_t y = 0; y < m; ++y) p[y] = (y + r) % m;
    a.permutations[x] = p;
    a.permutations[c.inverse[x]] = inv(p);
  }
  return a;
}

void criterion8(Outcome& o) {
  std::mt19937_64 rng(kC8Seed);
  const std::vector<std::pair<std::string, MarkovCoding>> codings = {
      {"ideal_triangle", build_coding(ideal_triangle()).coding},
      {"sl2z", build_coding(sl2z()).coding},
      {"surface_4g", build_coding(surface_4g(2)).coding}};
  std::size_t comparisons = 0;
  for (std::size_t t = 0; t < kC8Actions; ++t) {
    const auto& [source, c] = codings[t % codings.size()];
    const std::size_t m = 1 + rng() % kC8MaxPoints;
    const auto a = random_action(c, source, m, rng);
    o.require(validate_action(a, c).ok, "random action is valid");
    FiniteObservable phi;
    for (std::size_t x = 0; x < m; ++x)
      phi.push_back(BigRational(static_cast<long long>(rng() % 21) - 10, static_cast<long long>(1 + rng() % 6)));
    const auto dp = sphere_averages_finite(c, a, phi, kC8MaxN + 1);
    for (std::size_t n = 0; n <= kC8MaxN; ++n) {
      o.require(dp[n] == sphere_average_brute_force(c, a, phi, n),
                source + " action " + std::to_string(t) + " n=" + std::to_string(n));
      ++comparisons;
    }
  }
  o.detail << " exact comparisons=" << comparisons;
}

void criterion9(Outcome& o) {
  const auto c = build_coding(surface_4g(2)).coding;
  const auto a = z2_action(c);
  const FiniteObservable phi{BigRational(1), BigRational(0)};
  BigRational sup = 0;
  for (const auto& v : phi) sup = std::max(sup, BigRational(abs(v)));
  const auto words = sphere_averages_finite(c, a, phi, kC9MaxN + 1);
  const auto spheres = group_sphere_averages_finite(c, a, phi, kC9MaxN + 1);
  const auto cc = collision_counts(c, kC9MaxN);
  const auto K = sphere_sizes(c, kC9MaxN);
  std::vector<std::size_t> bad;
  BigRational prev = -1;
  for (std::size_t n = 1; n <= kC9MaxN; ++n) {
    BigRational gap = 0;
    for (std::size_t x = 0; x < phi.size(); ++x) gap = std::max(gap, BigRational(abs(words[n][x] - spheres[n][x])));
    const BigRational bound = 2 * BigRational(cc.collisions[n], K[n]) * sup;
    if (gap > bound) bad.push_back(n);
    if (n > 1) o.require(bound < prev, "bound decreasing at n=" + std::to_string(n));
    prev = bound;
    o.detail << " n=" << n << " gap " << fmt12(gap.convert_to<double>()) << " bound " << fmt12(bound.convert_to<double>())
             << ";";
  }
  if (!bad.empty()) {
    std::ostringstream s;
    for (std::size_t n : bad) s << " " << n;
    o.require(false, "gap exceeds bound at n =" + s.str());
  }
}

struct Criterion {
  std::function<void(Outcome&)> run;
  double seconds;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {{criterion1, kC1Seconds}, {criterion2, kC2Seconds}, {criterion3, kC3Seconds},
                                      {criterion4, kC4Seconds}, {criterion5, kC5Seconds}, {criterion6, kC6Seconds},
                                      {criterion7, kC7Seconds}, {criterion8, kC8Seconds}, {criterion9, kC9Seconds}};
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(all.size())) {
      std::cerr << "usage: acceptance [1-9]...\n";
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(k));
  }
  if (selected.empty())
    for (std::size_t k = 1; k <= all.size(); ++k) selected.push_back(k);
  bool ok = true;
  for (std::size_t k : selected) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      all[k - 1].run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < all[k - 1].seconds, "time limit " + fmt12(all[k - 1].seconds) + " s");
    std::printf("criterion %zu: %s (%.3f s)%s\n", k, o.pass ? "PASS" : "FAIL", secs, o.detail.str().c_str());
    std::fflush(stdout);
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
