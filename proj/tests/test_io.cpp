#include <gtest/gtest.h>

#include <functional>

#include "bowen_series.hpp"

using namespace bowen_series;

namespace {

std::string data(const std::string& f) { return std::string(BS_DATA_DIR) + "/" + f; }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::internal;
}

}  // namespace

TEST(CodingIo, RoundTrip) {
  for (const auto& d : {sl2z(), ideal_triangle()}) {
    const auto c = build_coding(d).coding;
    const auto back = coding_from_json(Json::parse(coding_to_json(c).dump()));
    EXPECT_TRUE(same_coding(c, back)) << d.name();
  }
  const auto g = build_coding(surface_4g(2)).coding;
  const auto back = coding_from_json(Json::parse(coding_to_json(g).dump()));
  EXPECT_EQ(back.P, g.P);
  EXPECT_EQ(back.labels, g.labels);
  EXPECT_EQ(back.names, g.names);
  EXPECT_EQ(sphere_sizes(back, 4), sphere_sizes(g, 4));
}

TEST(CodingIo, SerializationIsDeterministic) {
  const auto a = coding_to_json(build_coding(surface_4g(2)).coding).dump(2);
  const auto b = coding_to_json(build_coding(surface_4g(2)).coding).dump(2);
  EXPECT_EQ(a, b);
}

TEST(CodingIo, BadFilesAreRejected) {
  for (const char* f : {"zero_row_coding.json", "unknown_label_coding.json", "missing_inverse_coding.json",
                        "transition_out_of_range_coding.json", "repeated_transition_coding.json"})
    EXPECT_EQ(kind_of([&] { load_coding(data(std::string("bad/") + f)); }), ErrorKind::invalid_coding) << f;
  EXPECT_EQ(kind_of([&] { load_coding(data("bad/not_json.json")); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([&] { load_coding(data("no_such_file.json")); }), ErrorKind::invalid_input);
}

TEST(DomainIo, RoundTripPreservesCoding) {
  for (const auto& d : {sl2z(), ideal_triangle(), surface_4g(2)}) {
    const auto back = domain_from_json(Json::parse(domain_to_json(d).dump()));
    EXPECT_EQ(back.num_sides(), d.num_sides());
    const auto a = build_coding(d).coding;
    const auto b = build_coding(back).coding;
    EXPECT_EQ(a.P, b.P) << d.name();
    EXPECT_EQ(a.labels, b.labels) << d.name();
  }
}

TEST(DomainIo, HandWrittenHalfPlaneDomain) {
  const auto d = load_domain(data("sl2z_halfplane_domain.json"));
  EXPECT_TRUE(same_coding(build_coding(d).coding, build_coding(sl2z()).coding));
}

TEST(DomainIo, BadDomains) {
  EXPECT_EQ(kind_of([&] { load_domain(data("bad/wrong_generator_domain.json")); }), ErrorKind::invalid_domain);
  const auto rh = load_domain(data("rhombus_334_domain.json"));
  EXPECT_FALSE(verify_even_corners(rh).ok);
  EXPECT_EQ(kind_of([&] { resolve_domain("no_such_preset_or_file"); }), ErrorKind::invalid_input);
}

TEST(ActionIo, FiniteActionAndObservable) {
  const auto c = build_coding(surface_4g(2)).coding;
  const auto a = action_from_json(io::read_json_file(data("genus2_z2_action.json")), c);
  EXPECT_TRUE(validate_action(a, c).ok);
  const auto again = action_from_json(action_to_json(a, c), c);
  EXPECT_EQ(again.permutations, a.permutations);
  const auto phi = finite_observable_from_json(io::read_json_file(data("indicator_phi.json")));
  EXPECT_EQ(phi, (FiniteObservable{BigRational(1), BigRational(0)}));
  EXPECT_EQ(finite_observable_from_json(Json::parse(R"(["1/3", 0.5])")),
            (FiniteObservable{BigRational(1, 3), BigRational(1, 2)}));
}

TEST(ActionIo, TorusActionInversesAreFilledIn) {
  const auto c = build_coding(surface_4g(2)).coding;
  const auto a = action_from_json(io::read_json_file(data("genus2_cat_action.json")), c);
  ASSERT_EQ(a.kind, ActionKind::torus_integer_matrix);
  EXPECT_TRUE(validate_action(a, c).ok);
  const auto f = torus_observable_from_json(io::read_json_file(data("torus_phi.json")));
  EXPECT_EQ(f.phi.terms.size(), 3u);
  EXPECT_TRUE(f.points.empty());
  EXPECT_DOUBLE_EQ(f.phi.mean(), 0.5);
}

TEST(ActionIo, BadActions) {
  const auto c = build_coding(surface_4g(2)).coding;
  for (const char* f : {"relation_violating_action.json", "odd_size_action.json"})
    EXPECT_EQ(kind_of([&] {
                require_valid_action(action_from_json(io::read_json_file(data(std::string("bad/") + f)), c), c);
              }),
              ErrorKind::invalid_action)
        << f;
  EXPECT_EQ(kind_of([&] { action_from_json(Json::parse(R"({"kind":"finite_permutation","size":2,"maps":{"zz":[0,1]}})"), c); }),
            ErrorKind::invalid_action);
  EXPECT_EQ(kind_of([&] { action_from_json(Json::parse(R"({"kind":"finite_permutation","size":2,"maps":{}})"), c); }),
            ErrorKind::invalid_action);
  const auto m = build_coding(sl2z()).coding;
  EXPECT_EQ(kind_of([&] { action_from_json(io::read_json_file(data("genus2_z2_action.json")), m); }),
            ErrorKind::invalid_action);
}

TEST(Reports, ChainReportJson) {
  const auto c = build_coding(sl2z()).coding;
  const auto j = chain_report_to_json(c, analyze(c.P));
  EXPECT_EQ(j.at("classes"), Json::parse("[[1,5,6],[2],[3,4,8],[7]]"));
  EXPECT_EQ(j.at("irreducible"), true);
  EXPECT_EQ(j.at("strictly_irreducible"), false);
  EXPECT_EQ(j.at("alphabet_size"), 8);
  EXPECT_EQ(j.at("covering_constant"), 5);
}

TEST(Reports, SphereCsv) {
  const auto c = build_coding(sl2z()).coding;
  const auto rows = sphere_table(c, 4, 4, kDefaultEnumerationBudget);
  const auto csv = sphere_csv(rows, false);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,W_n,K_n,collisions,special_chain_suffix");
  EXPECT_EQ(csv, sphere_csv(sphere_table(c, 4, 4, kDefaultEnumerationBudget), false));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].n, 2u);
  EXPECT_EQ(rows[1].K, 6);
  EXPECT_EQ(rows[1].W, 12);
}
