#ifndef BOWEN_SERIES_REPORT_HPP
#define BOWEN_SERIES_REPORT_HPP

// Machine-readable outputs shared by the command line tool and the tests.
// Floating point values are printed with 12 significant digits.

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bowen_series/action_io.hpp"
#include "bowen_series/analysis.hpp"
#include "bowen_series/coding_io.hpp"
#include "bowen_series/oracle.hpp"
#include "bowen_series/words.hpp"

namespace bowen_series {

inline std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Intervals renumbered for display and each group sorted, groups ordered by
/// their smallest member.
inline std::vector<std::vector<std::size_t>> display_groups(const MarkovCoding& c,
                                                            const std::vector<std::vector<std::size_t>>& groups) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& g : groups) {
    std::vector<std::size_t> d;
    for (std::size_t i : g) d.push_back(c.display_index(i));
    std::sort(d.begin(), d.end());
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Json chain_report_to_json(const MarkovCoding& c, const ChainReport& r) {
  Json j;
  j["source"] = c.source;
  j["alphabet_size"] = c.size();
  j["irreducible"] = r.irreducible;
  j["strictly_irreducible"] = r.strictly_irreducible;
  j["product_method"] = r.product_method;
  j["class_method"] = r.class_method;
  j["components"] = display_groups(c, r.components);
  j["classes"] = display_groups(c, r.classes);
  Json w = Json::array();
  for (const auto& x : r.allowed_word_counts) w.push_back(x.str());
  j["allowed_word_counts"] = w;
  j["perron_eigenvalue"] = std::stod(fmt12(r.perron));
  j["covering_constant"] = r.covering_constant ? Json(*r.covering_constant) : Json(nullptr);
  Json table = Json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    Json row{{"number", c.display_index(i)}, {"index", i}, {"label", c.names[c.labels[i]]}};
    if (c.cut_points.size() == c.size()) {
      row["from"] = c.cut_points[i];
      row["to"] = c.cut_points[(i + 1) % c.size()];
    }
    table.push_back(row);
  }
  j["interval_numbering"] = table;
  return j;
}

struct SphereRow {
  std::size_t n = 0;
  BigInt W = 0;
  BigInt K = 0;
  BigInt collisions = 0;
  std::optional<std::uint64_t> special_chain_suffix;  ///< only for enumerated lengths
  std::optional<std::uint64_t> oracle_K;
};

/// W_n, K_n and collisions for n = 1..N from the automata; lengths up to
/// `full_enum_limit` are also enumerated, cross-checked and scanned for
/// special-chain suffixes.
inline std::vector<SphereRow> sphere_table(const MarkovCoding& c, std::size_t N, std::size_t full_enum_limit,
                                           std::uint64_t budget = kDefaultEnumerationBudget) {
  const auto W = allowed_word_counts(c.P, N);
  const auto K = sphere_sizes(c, N);
  const auto coll = collision_counts(c, N);
  std::optional<CycleStructure> cs;
  std::vector<SphereRow> rows;
  for (std::size_t n = 1; n <= N; ++n) {
    SphereRow r{n, W[n], K[n], coll.collisions[n], std::nullopt, std::nullopt};
    if (n <= full_enum_limit) {
      EnumerationOptions opts;
      opts.store_words = false;
      opts.special_chains = true;
      opts.budget = budget;
      const auto e = enumerate_sphere(c, n, opts);
      if (e.K != K[n] || e.W != W[n] || BigInt(e.collisions) != coll.collisions[n])
        fail(ErrorKind::internal, "enumeration disagrees with the automata at n = " + std::to_string(n));
      r.special_chain_suffix = e.special_chain_suffix;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::string sphere_csv(const std::vector<SphereRow>& rows, bool with_oracle) {
  std::ostringstream out;
  out << "n,W_n,K_n,collisions,special_chain_suffix";
  if (with_oracle) out << ",oracle_K_n";
  out << "\n";
  for (const auto& r : rows) {
    out << r.n << "," << r.W << "," << r.K << "," << r.collisions << ",";
    if (r.special_chain_suffix) out << *r.special_chain_suffix;
    if (with_oracle) {
      out << ",";
      if (r.oracle_K) out << *r.oracle_K;
    }
    out << "\n";
  }
  return out.str();
}

/// Oracle comparison for n = 1..N: K_n, set equality of the spheres as words
/// and shortestness of every image word.
struct OracleComparison {
  bool ok = true;
  std::vector<std::uint64_t> oracle_K;  ///< index n
  std::vector<std::string> failures;
};

inline OracleComparison compare_with_oracle(const MarkovCoding& c, const GeneratorSet& gens, std::size_t N,
                                            std::uint64_t budget = kDefaultEnumerationBudget,
                                            const OracleOptions& opts = {}) {
  if (gens.names != c.names) fail(ErrorKind::invalid_input, "oracle generators differ from the coding's");
  OracleComparison out;
  CayleyOracle oracle(gens, N, opts);
  out.oracle_K = oracle.sphere_sizes();
  for (std::size_t n = 1; n <= N; ++n) {
    std::set<std::size_t> image;
    bool shortest = true, distinct = true;
    for_each_word(
        c, n,
        [&](const Word& w, const Preimages&) {
          const auto id = oracle.find(w);
          if (!id || oracle.depth_of(*id) != n) {
            shortest = false;
            return;
          }
          distinct = image.insert(*id).second && distinct;
        },
        budget);
    const auto& sphere = oracle.sphere_words(n);
    const bool equal = shortest && distinct && image.size() == sphere.size();
    auto bad = [&](const std::string& s) {
      out.ok = false;
      out.failures.push_back("n = " + std::to_string(n) + ": " + s);
    };
    if (!shortest) bad("an image word is not shortest");
    if (!distinct) bad("two image words represent the same element");
    if (!equal) bad("image sphere differs from the breadth-first sphere");
  }
  return out;
}

inline std::string series_csv(const AverageSeries& s) {
  std::ostringstream out;
  const std::size_t m = s.s.empty() ? 0 : s.s[0].size();
  out << "n";
  for (std::size_t x = 0; x < m; ++x) out << ",s_n[" << x << "]";
  for (std::size_t x = 0; x < m; ++x) out << ",c_N[" << x << "]";
  out << ",error\n";
  for (std::size_t n = 0; n < s.s.size(); ++n) {
    out << n;
    for (double v : s.s[n]) out << "," << fmt12(v);
    for (double v : s.c[n]) out << "," << fmt12(v);
    out << "," << fmt12(s.error[n]) << "\n";
  }
  return out.str();
}

inline Json even_corner_report_to_json(const FundamentalDomain& d, const EvenCornerReport& r) {
  Json j;
  j["name"] = d.name();
  j["sides"] = d.num_sides();
  j["even_corners"] = r.ok;
  Json vs = Json::array();
  for (std::size_t v = 0; v < r.vertices.size(); ++v) {
    const auto& vr = r.vertices[v];
    Json jv{{"vertex", v}, {"ideal", vr.ideal}};
    if (!vr.ideal) {
      jv["n"] = vr.n;
      jv["cycle"] = d.generators().spell(r.cycles[v].word);
      jv["angle_sum"] = std::stod(fmt12(r.cycles[v].angle_sum));
    }
    vs.push_back(jv);
  }
  j["vertices"] = vs;
  Json fixed = Json::array();
  for (const auto& f : side_fixed_point_cycles(d))
    fixed.push_back({{"side", f.side}, {"cycle", d.generators().spell(f.word)}});
  j["side_fixed_point_cycles"] = fixed;
  if (!r.ok) j["violations"] = r.summary();
  return j;
}

}  // namespace bowen_series

#endif  // BOWEN_SERIES_REPORT_HPP
