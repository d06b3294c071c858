#include <gtest/gtest.h>

#include "bowen_series.hpp"

using namespace bowen_series;

namespace {

std::string data(const std::string& f) { return std::string(BS_DATA_DIR) + "/" + f; }

std::vector<std::vector<std::size_t>> rows_1based(const MarkovCoding& c) {
  std::vector<std::vector<std::size_t>> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j : c.P.row(i)) out[c.display_index(i) - 1].push_back(c.display_index(j));
    std::sort(out[c.display_index(i) - 1].begin(), out[c.display_index(i) - 1].end());
  }
  return out;
}

}  // namespace

TEST(Sl2zCoding, CutPointsLabelsAndTransitions) {
  const auto g = build_coding(sl2z());
  const auto& c = g.coding;
  ASSERT_EQ(c.size(), 8u);
  EXPECT_EQ(c.cut_points, (std::vector<std::string>{"inf", "-2", "-1", "-1/2", "0", "1/2", "1", "2"}));
  const std::vector<std::vector<std::size_t>> expected = {{1, 2}, {3, 4}, {7}, {8}, {1}, {2}, {5, 6}, {7, 8}};
  EXPECT_EQ(rows_1based(c), expected);
  std::vector<std::string> labels;
  for (Label x : c.labels) labels.push_back(c.names[x]);
  EXPECT_EQ(labels, (std::vector<std::string>{"T^-1", "T^-1", "S", "S", "S", "S", "T", "T"}));
  EXPECT_TRUE(g.markov.ok());
}

TEST(Sl2zCoding, AmbiguousIntervalsAndAnnotations) {
  const auto g = build_coding(sl2z());
  std::vector<std::size_t> ambiguous;
  for (std::size_t i = 0; i < g.partition.size(); ++i)
    if (g.partition.intervals[i].ambiguous()) ambiguous.push_back(g.coding.display_index(i));
  EXPECT_EQ(ambiguous, (std::vector<std::size_t>{3, 6}));
  for (std::size_t i = 0; i < g.partition.size(); ++i) {
    const auto& info = g.partition.intervals[i];
    EXPECT_GE(info.sides.size(), 1u);
    EXPECT_LE(info.sides.size(), 2u);
  }
}

TEST(Sl2zCoding, PoliciesAndExplicitChoices) {
  const auto d = sl2z();
  CodingOptions cw;
  cw.policy = LabelPolicy::clockwise;
  CodingOptions acw;
  acw.policy = LabelPolicy::anticlockwise;
  const auto a = build_coding(d, cw).coding;
  const auto b = build_coding(d, acw).coding;
  EXPECT_NE(a.labels, b.labels);
  CodingOptions bad;
  bad.choices[3] = d.generators().at("T");  // interval 4 lies only in L(S)
  try {
    build_coding(d, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_coding);
  }
  CodingOptions flip;
  flip.choices[2] = d.generators().at("T^-1");
  const auto f = build_coding(d, flip);
  EXPECT_TRUE(f.markov.ok());
  EXPECT_EQ(f.coding.names[f.coding.labels[2]], "T^-1");
}

TEST(Sl2zCoding, HandWrittenTableMatchesGeneratedCoding) {
  const auto file = load_coding(data("sl2z_coding.json"));
  const auto gen = build_coding(sl2z()).coding;
  EXPECT_EQ(file.P, gen.P);
  EXPECT_EQ(file.labels, gen.labels);
  EXPECT_EQ(file.names, gen.names);
  EXPECT_EQ(file.inverse, gen.inverse);
  EXPECT_EQ(file.cut_points, gen.cut_points);
}

TEST(IdealTriangleCoding, ThreeIntervals) {
  const auto g = build_coding(ideal_triangle());
  EXPECT_EQ(g.coding.size(), 3u);
  EXPECT_TRUE(g.markov.ok());
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(g.coding.P.row(i).size(), 2u);
}

TEST(SurfaceCoding, Genus2Structure) {
  const auto d = surface_4g(2);
  const auto g = build_coding(d);
  const auto& c = g.coding;
  EXPECT_EQ(c.size(), 48u);
  EXPECT_TRUE(g.markov.ok());
  EXPECT_GT(g.markov.checked_points, 0u);
  std::size_t ambiguous = 0;
  for (const auto& info : g.partition.intervals) ambiguous += info.ambiguous();
  EXPECT_EQ(ambiguous, 8u);
  // Every crown interval has level at least two at its top vertex.
  for (const auto& info : g.partition.intervals)
    for (std::size_t v : info.crowns) EXPECT_GE(info.level[v], 2);
  for (const auto& v : c.vertices) {
    EXPECT_EQ(v.loop.size(), 8u);
    EXPECT_EQ(v.n, 4u);
  }
  EXPECT_EQ(c.max_n(), 4u);
}

TEST(SurfaceCoding, ExtendedPrecisionRecomputation) {
  for (int genus : {2, 3}) {
    const auto d = surface_4g(genus);
    const auto g = build_coding(d);
    std::string why;
    EXPECT_TRUE(recompute_extended(d, g.partition, g.coding.labels, g.coding.P, &why)) << why;
  }
}

TEST(SurfaceCoding, AllPoliciesAreMarkov) {
  for (auto pairing : {SurfacePairing::commutator, SurfacePairing::opposite})
    for (auto policy : {LabelPolicy::paper_default, LabelPolicy::clockwise, LabelPolicy::anticlockwise}) {
      CodingOptions opts;
      opts.policy = policy;
      const auto g = build_coding(surface_4g(2, pairing), opts);
      EXPECT_TRUE(g.markov.ok());
      EXPECT_EQ(g.coding.size(), 48u);
    }
}

TEST(MarkovCheck, DetectsAWrongMatrix) {
  const auto d = sl2z();
  auto g = build_coding(d);
  auto dense = std::vector<std::vector<int>>(8, std::vector<int>(8, 0));
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j : g.coding.P.row(i)) dense[i][j] = 1;
  dense[0][1] = 0;
  const auto report = check_markov_property(d, g.partition, g.coding.labels, TransitionMatrix::from_dense(dense));
  EXPECT_FALSE(report.ok());
}

TEST(MarkovCoding, ValidateRejectsZeroRows) {
  auto c = build_coding(sl2z()).coding;
  auto rows = c.P.rows();
  rows[4].clear();
  c.P = TransitionMatrix(rows);
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_coding);
  }
}

TEST(LabelPolicy, Parsing) {
  EXPECT_EQ(parse_label_policy("paper_default"), LabelPolicy::paper_default);
  EXPECT_EQ(parse_label_policy("clockwise"), LabelPolicy::clockwise);
  EXPECT_THROW(parse_label_policy("sideways"), Error);
}
