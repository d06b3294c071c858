#include <gtest/gtest.h>

#include "bowen_series.hpp"

using namespace bowen_series;

namespace {

std::string data(const std::string& f) { return std::string(BS_DATA_DIR) + "/" + f; }

}  // namespace

TEST(ProjectiveRational, ParsesAndNormalizes) {
  EXPECT_TRUE(ProjectiveRational::parse("inf").is_infinity());
  const auto x = ProjectiveRational::parse("-2/4");
  EXPECT_EQ(x.to_string(), "-1/2");
  EXPECT_EQ(ProjectiveRational::parse("3").to_string(), "3");
  EXPECT_THROW(ProjectiveRational::parse("1/0x"), Error);
}

TEST(ExactMatrix, GroupOperations) {
  const ExactMatrix S(0, -1, 1, 0), T(1, 1, 0, 1);
  EXPECT_EQ((S * S).determinant(), 1);
  EXPECT_TRUE((S * S).is_identity());  // projectively -I
  const ExactMatrix ST = S * T;
  EXPECT_TRUE((ST * ST * ST).is_identity());
  EXPECT_TRUE((T * T.inverse()).is_identity());
  EXPECT_EQ(T.apply(ProjectiveRational::parse("-1/2")).to_string(), "1/2");
  EXPECT_TRUE(T.apply(ProjectiveRational::infinity()).is_infinity());
}

TEST(Mobius, ExactAndFloatingAgree) {
  const ExactMatrix T(1, 1, 0, 1);
  const Mobius m = Mobius::from_exact(T);
  const auto x = ProjectiveRational::parse("1/3");
  const BoundaryPoint img = m.apply(BoundaryPoint(x));
  ASSERT_TRUE(img.is_exact());
  EXPECT_EQ(img.exact->to_string(), "4/3");
  EXPECT_NEAR(img.angle, BoundaryPoint(ProjectiveRational::parse("4/3")).angle, 1e-12);
  EXPECT_LT(m.determinant_error(), 1e-12);
  EXPECT_TRUE((m * m.inverse()).is_identity(1e-12));
}

TEST(Mobius, HalfTurnIsAnInvolution) {
  const auto h = Mobius::half_turn({0.3, -0.2});
  EXPECT_TRUE((h * h).is_identity(1e-12));
  EXPECT_NEAR(std::abs(h.apply(std::complex<double>(0.3, -0.2)) - std::complex<double>(0.3, -0.2)), 0.0, 1e-12);
}

TEST(Presets, Sl2zVertexData) {
  const auto d = sl2z();
  EXPECT_EQ(d.num_sides(), 3u);
  const auto r = verify_even_corners(d);
  ASSERT_TRUE(r.ok) << r.summary();
  // Six copies of the domain meet at rho: three geodesics pass through it.
  EXPECT_EQ(r.vertices[0].n, 3u);
  EXPECT_EQ(r.vertices[1].n, 3u);
  EXPECT_EQ(r.cycles[0].copies(), 6u);
  EXPECT_TRUE(r.vertices[2].ideal);
  const auto fixed = side_fixed_point_cycles(d);
  ASSERT_EQ(fixed.size(), 1u);
  EXPECT_EQ(d.generators().spell(fixed[0].word), "S S");
}

TEST(Presets, IdealTriangleHasOnlyIdealVertices) {
  const auto d = ideal_triangle();
  const auto r = verify_even_corners(d);
  EXPECT_TRUE(r.ok);
  for (const auto& v : r.vertices) EXPECT_TRUE(v.ideal);
  EXPECT_EQ(side_fixed_point_cycles(d).size(), 3u);
}

TEST(Presets, SurfaceOctagonRelation) {
  for (auto pairing : {SurfacePairing::commutator, SurfacePairing::opposite}) {
    const auto d = surface_4g(2, pairing);
    const auto r = verify_even_corners(d);
    ASSERT_TRUE(r.ok) << r.summary();
    for (std::size_t v = 0; v < 8; ++v) {
      EXPECT_EQ(r.cycles[v].copies(), 8u);
      EXPECT_EQ(r.vertices[v].n, 4u);
      EXPECT_NEAR(r.cycles[v].angle_sum, kTwoPi, 1e-9);
      EXPECT_TRUE(d.generators().evaluate(r.cycles[v].word).is_identity(1e-9));
    }
  }
  const auto d = surface_4g(2);
  EXPECT_EQ(d.generators().spell(walk_vertex(d, 0).word), "a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1");
}

TEST(Presets, HigherGenus) {
  const auto d = surface_4g(3);
  EXPECT_EQ(d.num_sides(), 12u);
  EXPECT_TRUE(verify_even_corners(d).ok);
  EXPECT_THROW(surface_4g(1), Error);
}

TEST(Presets, UnknownNameIsInvalidInput) {
  try {
    preset_domain("torus");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
  }
}

TEST(EvenCorners, RhombusWithOrderThreeVerticesFails) {
  const auto d = load_domain(data("rhombus_334_domain.json"));
  const auto r = verify_even_corners(d);
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.vertices[1].ok);
  EXPECT_FALSE(r.vertices[3].ok);
  EXPECT_TRUE(r.vertices[0].ok);
  EXPECT_EQ(r.vertices[0].n, 4u);
  try {
    vertex_cycles(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::even_corners);
  }
}

TEST(Domain, RejectsWrongGenerator) {
  try {
    load_domain(data("bad/wrong_generator_domain.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_domain);
  }
}

TEST(Domain, RejectsClockwiseVertices) {
  auto d = sl2z();
  std::vector<DiskPoint> v = d.vertices();
  std::swap(v[0], v[1]);
  EXPECT_THROW(FundamentalDomain::create("bad", v, {0, 2, 1}, d.generators()), Error);
}

TEST(Domain, SideConventions) {
  const auto d = surface_4g(2);
  for (std::size_t k = 0; k < d.num_sides(); ++k) {
    EXPECT_EQ(d.start_vertex(k), k);
    EXPECT_EQ(d.next_side(k), k);
    EXPECT_EQ(d.previous_side(k), (k + 7) % 8);
    const auto& s = d.side(k);
    EXPECT_EQ(d.side(s.partner).partner, k);
    EXPECT_EQ(d.generators().inverse[s.label], d.side(s.partner).label);
  }
}
