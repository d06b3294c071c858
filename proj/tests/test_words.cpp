#include <gtest/gtest.h>

#include <map>
#include <set>

#include "bowen_series.hpp"

using namespace bowen_series;

namespace {

const MarkovCoding& genus2() {
  static const MarkovCoding c = build_coding(surface_4g(2)).coding;
  return c;
}

const MarkovCoding& modular() {
  static const MarkovCoding c = build_coding(sl2z()).coding;
  return c;
}

Word parse(const MarkovCoding& c, const std::string& text) {
  Word w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok)
    for (Label x = 0; x < c.generators(); ++x)
      if (c.names[x] == tok) w.push_back(x);
  return w;
}

}  // namespace

TEST(Words, PiReadsLabels) {
  const auto& c = modular();
  EXPECT_EQ(spell(c, pi(c, {0, 1, 3})), "T^-1 T^-1 S");
  EXPECT_TRUE(is_valid_sequence(c, {0, 1, 3}));
  EXPECT_FALSE(is_valid_sequence(c, {0, 2}));
}

TEST(Words, SequenceEnumerationCountsW) {
  for (const auto* c : {&modular(), &genus2()}) {
    for (std::size_t n = 0; n <= 3; ++n) {
      std::uint64_t count = 0;
      for_each_sequence(*c, n, [&](const SymbolSequence&) { ++count; });
      EXPECT_EQ(BigInt(count), count_allowed_words(c->P, n));
    }
  }
}

TEST(Words, PreimagesPartitionAllSequences) {
  const auto& c = genus2();
  for (std::size_t n = 1; n <= 4; ++n) {
    std::map<Word, std::uint64_t> brute;
    for_each_sequence(c, n, [&](const SymbolSequence& s) { ++brute[pi(c, s)]; });
    std::uint64_t words = 0;
    for_each_word(c, n, [&](const Word& w, const Preimages& p) {
      ++words;
      EXPECT_EQ(p.multiplicity(), brute.at(w));
      EXPECT_EQ(word_multiplicity(c, w), brute.at(w));
    });
    EXPECT_EQ(words, brute.size());
  }
}

TEST(Words, SeparatedMultiplicityByBruteForce) {
  // Largest set of preimages pairwise different at every position.
  const auto& c = genus2();
  for (std::size_t n = 1; n <= 3; ++n) {
    std::map<Word, std::vector<SymbolSequence>> pre;
    for_each_sequence(c, n, [&](const SymbolSequence& s) { pre[pi(c, s)].push_back(s); });
    for (const auto& [w, seqs] : pre) {
      std::size_t best = 0;
      const std::size_t k = seqs.size();
      if (k > 16) {
        std::set<std::size_t> firsts;
        for (const auto& s : seqs) firsts.insert(s[0]);
        best = firsts.size();
      } else {
        for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
          bool ok = true;
          for (std::size_t a = 0; a < k && ok; ++a)
            for (std::size_t b = a + 1; b < k && ok; ++b)
              if ((mask >> a & 1) && (mask >> b & 1))
                for (std::size_t t = 0; t < n; ++t)
                  if (seqs[a][t] == seqs[b][t]) ok = false;
          if (ok) best = std::max<std::size_t>(best, std::popcount(mask));
        }
      }
      EXPECT_EQ(word_preimages(c, w).separated(), best);
    }
  }
}

TEST(Words, SphereSizesMatchEnumeration) {
  for (const auto* c : {&modular(), &genus2()}) {
    const auto K = sphere_sizes(*c, 5);
    for (std::size_t n = 1; n <= 5; ++n) {
      EnumerationOptions opts;
      opts.store_words = false;
      EXPECT_EQ(enumerate_sphere(*c, n, opts).K, K[n]);
    }
  }
  const std::vector<BigInt> sl2z_K = {1, 3, 6, 10, 16, 26, 42};
  EXPECT_EQ(sphere_sizes(modular(), 6), sl2z_K);
  const std::vector<BigInt> g2_K = {1, 8, 56, 392, 2736, 19096, 133288};
  EXPECT_EQ(sphere_sizes(genus2(), 6), g2_K);
}

TEST(Words, SeparatedHistograms) {
  const auto& c = genus2();
  const auto h1 = enumerate_sphere(c, 1).separated_histogram;
  EXPECT_EQ(h1, (std::map<std::size_t, std::uint64_t>{{5, 4}, {7, 4}}));
  const auto h2 = enumerate_sphere(c, 2).separated_histogram;
  EXPECT_EQ(h2, (std::map<std::size_t, std::uint64_t>{{1, 32}, {2, 16}, {3, 8}}));
  for (std::size_t n = 3; n <= 5; ++n) {
    const auto h = enumerate_sphere(c, n).separated_histogram;
    EXPECT_EQ(h.size(), 2u);
    EXPECT_EQ(h.at(2), 24u);
  }
  const auto& m = modular();
  EXPECT_EQ(enumerate_sphere(m, 1).separated_histogram, (std::map<std::size_t, std::uint64_t>{{2, 2}, {4, 1}}));
  EXPECT_EQ(enumerate_sphere(m, 2).separated_histogram, (std::map<std::size_t, std::uint64_t>{{1, 4}, {2, 2}}));
  for (std::size_t n = 3; n <= 6; ++n)
    EXPECT_EQ(enumerate_sphere(m, n).separated_histogram.size(), 1u);
}

TEST(Words, CollisionAutomatonMatchesEnumeration) {
  for (const auto* c : {&modular(), &genus2()}) {
    const auto cc = collision_counts(*c, 6);
    for (std::size_t n = 1; n <= 6; ++n) {
      EnumerationOptions opts;
      opts.store_words = false;
      const auto e = enumerate_sphere(*c, n, opts);
      EXPECT_EQ(cc.collisions[n], BigInt(e.collisions));
      for (const auto& [sep, count] : e.separated_histogram) EXPECT_EQ(cc.histogram[n].at(sep), BigInt(count));
    }
  }
}

TEST(Words, PairCountsMatchEnumeration) {
  for (const auto* c : {&modular(), &genus2()}) {
    const auto pc = pair_counts(*c, 4);
    for (std::size_t n = 1; n <= 4; ++n) {
      BigInt squares = 0, separated = 0;
      for_each_word(*c, n, [&](const Word&, const Preimages& p) {
        squares += BigInt(p.multiplicity()) * p.multiplicity();
        std::map<std::size_t, std::uint64_t> by_first;
        for (const auto& e : p.entries) by_first[e.first] += e.count;
        for (const auto& [f, a] : by_first)
          for (const auto& [g, b] : by_first)
            if (f != g) separated += BigInt(a) * b;
      });
      EXPECT_EQ(pc.all_pairs[n], squares);
      EXPECT_EQ(pc.separated_pairs[n], separated);
      // Preimages that part never meet again.
      EXPECT_EQ(pc.recoinciding[n], 0);
    }
  }
}

TEST(Words, BudgetIsEnforced) {
  try {
    enumerate_sphere(genus2(), 5, {false, false, ChainRule::literal, 1000});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::budget_exceeded);
  }
}

TEST(Cycles, LoopsAndCycleDetection) {
  const auto& c = genus2();
  const CycleStructure cs(c);
  EXPECT_EQ(cs.num_vertices(), 8u);
  for (std::size_t v = 0; v < 8; ++v) {
    EXPECT_EQ(cs.loop(v, Orientation::anticlockwise).size(), 8u);
    EXPECT_EQ(cs.n(v), 4u);
  }
  const Word w = parse(c, "a1 b1 a1^-1");
  const auto v = cs.cycle_at(w, 0, 3, Orientation::anticlockwise);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(cs.loop(*v, Orientation::anticlockwise)[0], w[0]);
  // A whole loop is a relation, not a cycle.
  const Word full = cs.loop(0, Orientation::anticlockwise);
  EXPECT_FALSE(cs.cycle_at(full, 0, full.size(), Orientation::anticlockwise).has_value());
}

TEST(Cycles, ConsecutiveMatchesDefinition) {
  // B2 follows B1 (ending before letter e) when e^-1 B2 is itself a cycle.
  for (const auto& d : {sl2z(), surface_4g(2), surface_4g(3), surface_4g(2, SurfacePairing::opposite)}) {
    const auto c = build_coding(d).coding;
    const CycleStructure cs(c);
    std::vector<Cycle> all;
    for (std::size_t v = 0; v < cs.num_vertices(); ++v)
      for (auto o : {Orientation::anticlockwise, Orientation::clockwise})
        for (std::size_t len = 1; len < cs.loop(v, o).size(); ++len) all.push_back({0, len, v, o});
    std::size_t checked = 0;
    for (const auto& a : all)
      for (const auto& b : all) {
        if (a.orientation != b.orientation) continue;
        if (b.length + 1 >= cs.loop(b.vertex, b.orientation).size()) continue;
        if (a.length + 1 >= cs.loop(a.vertex, a.orientation).size()) continue;
        const Label e = cs.loop(a.vertex, a.orientation)[a.length];
        Word w{c.inverse[e]};
        const Word& lb = cs.loop(b.vertex, b.orientation);
        w.insert(w.end(), lb.begin(), lb.begin() + static_cast<std::ptrdiff_t>(b.length));
        const bool def = cs.cycle_at(w, 0, w.size(), a.orientation).has_value();
        EXPECT_EQ(cs.consecutive(a, b), def) << d.name();
        ++checked;
      }
    EXPECT_GT(checked, 0u);
  }
}

TEST(Cycles, SpecialChainCounts) {
  const CycleStructure cs(genus2());
  const std::vector<std::size_t> literal = {8, 32, 48, 48, 64, 64, 64, 64};
  const std::vector<std::size_t> half = {0, 0, 0, 16, 16, 16, 16, 16};
  for (std::size_t n = 1; n <= 8; ++n) {
    EXPECT_EQ(count_special_chains(cs, n), literal[n - 1]) << n;
    EXPECT_EQ(count_special_chains(cs, n, ChainRule::half_turn), half[n - 1]) << n;
  }
}

TEST(Cycles, SeparatedWordsAreSpecialChains) {
  const auto& c = genus2();
  const CycleStructure cs(c);
  for (std::size_t n = 3; n <= 5; ++n) {
    std::size_t twins = 0;
    for_each_word(c, n, [&](const Word& w, const Preimages& p) {
      if (p.separated() >= 2) {
        ++twins;
        EXPECT_TRUE(is_special_chain(w, cs));
        EXPECT_TRUE(ends_in_special_chain(w, cs));
      }
    });
    EXPECT_EQ(twins, 24u);
  }
}

TEST(Cycles, DecompositionCoversTheWord) {
  const auto& c = genus2();
  const CycleStructure cs(c);
  const Word w = parse(c, "a1 b1 a1^-1 a2 b2 b1");
  const auto dec = detect_cycles(w, cs);
  std::size_t covered = 0;
  for (const auto& cy : dec.cycles) {
    EXPECT_EQ(cy.start, covered);
    covered += cy.length;
  }
  EXPECT_EQ(covered, w.size());
  EXPECT_EQ(dec.consecutive.size() + 1, dec.cycles.size());
}
