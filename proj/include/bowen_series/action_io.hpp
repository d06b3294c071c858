#ifndef BOWEN_SERIES_ACTION_IO_HPP
#define BOWEN_SERIES_ACTION_IO_HPP

// JSON action and observable files.
//
// Action:
//   {"kind": "finite_permutation", "size": 2,
//    "maps": {"a1": [1, 0]}, "default": "identity"}
//   {"kind": "torus_integer_matrix", "dimension": 2,
//    "maps": {"a1": [[2, 1], [1, 1]]}, "default": "identity"}
// Labels missing from "maps" get the inverse of their inverse's map when
// that is given, otherwise the identity if "default" is "identity".
//
// Observable:
//   {"values": [1, "1/3", 0.5]}                                   finite
//   {"terms": [{"k": [1, 0], "re": 0.5, "im": 0}, ...],
//    "points": [[0.1, 0.2], ...]}                                  torus

#include <string>

#include "bowen_series/coding_io.hpp"
#include "bowen_series/ergodic.hpp"

namespace bowen_series {

namespace detail {

inline std::vector<std::size_t> inverse_permutation(const std::vector<std::size_t>& p) {
  std::vector<std::size_t> q(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] >= p.size()) fail(ErrorKind::invalid_action, "permutation entry out of range");
    q[p[x]] = x;
  }
  return q;
}

/// Inverse of a unimodular integer matrix, by exact Gauss-Jordan elimination.
inline IntMatrix inverse_matrix(const IntMatrix& m) {
  const std::size_t d = m.size();
  std::vector<std::vector<BigRational>> a(d, std::vector<BigRational>(2 * d, BigRational(0)));
  for (std::size_t i = 0; i < d; ++i) {
    if (m[i].size() != d) fail(ErrorKind::invalid_action, "matrix is not square");
    for (std::size_t j = 0; j < d; ++j) a[i][j] = m[i][j];
    a[i][d + i] = 1;
  }
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && a[piv][col] == 0) ++piv;
    if (piv == d) fail(ErrorKind::invalid_action, "matrix is singular");
    std::swap(a[col], a[piv]);
    const BigRational p = a[col][col];
    for (auto& x : a[col]) x /= p;
    for (std::size_t r = 0; r < d; ++r)
      if (r != col && a[r][col] != 0) {
        const BigRational f = a[r][col];
        for (std::size_t j = 0; j < 2 * d; ++j) a[r][j] -= f * a[col][j];
      }
  }
  IntMatrix out(d, std::vector<std::int64_t>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const BigRational& x = a[i][d + j];
      if (boost::multiprecision::denominator(x) != 1)
        fail(ErrorKind::invalid_action, "matrix inverse is not integral");
      out[i][j] = boost::multiprecision::numerator(x).convert_to<std::int64_t>();
    }
  return out;
}

}  // namespace detail

inline ActionSpec action_from_json(const Json& j, const MarkovCoding& c) {
  try {
    ActionSpec a;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "finite_permutation")
      a.kind = ActionKind::finite_permutation;
    else if (kind == "torus_integer_matrix")
      a.kind = ActionKind::torus_integer_matrix;
    else
      fail(ErrorKind::invalid_action, "unknown action kind '" + kind + "'");
    a.size = a.kind == ActionKind::finite_permutation ? j.at("size").get<std::size_t>()
                                                      : j.at("dimension").get<std::size_t>();
    if (a.size == 0) fail(ErrorKind::invalid_action, "empty ground set or dimension");
    const bool identity_default = j.value("default", std::string()) == "identity";
    const Json& maps = j.at("maps");
    for (auto it = maps.begin(); it != maps.end(); ++it) {
      bool known = false;
      for (const auto& n : c.names) known = known || n == it.key();
      if (!known) fail(ErrorKind::invalid_action, "map for unknown generator '" + it.key() + "'");
    }
    const std::size_t g = c.generators();
    if (a.kind == ActionKind::finite_permutation) {
      std::vector<std::optional<std::vector<std::size_t>>> given(g);
      for (Label x = 0; x < g; ++x)
        if (maps.contains(c.names[x])) given[x] = maps[c.names[x]].get<std::vector<std::size_t>>();
      for (Label x = 0; x < g; ++x) {
        if (given[x]) {
          a.permutations.push_back(*given[x]);
        } else if (given[c.inverse[x]]) {
          if (given[c.inverse[x]]->size() != a.size)
            fail(ErrorKind::invalid_action, "map of " + c.names[c.inverse[x]] + " has the wrong size");
          a.permutations.push_back(detail::inverse_permutation(*given[c.inverse[x]]));
        } else if (identity_default) {
          std::vector<std::size_t> id(a.size);
          std::iota(id.begin(), id.end(), 0);
          a.permutations.push_back(id);
        } else {
          fail(ErrorKind::invalid_action, "no map for generator " + c.names[x]);
        }
      }
    } else {
      std::vector<std::optional<IntMatrix>> given(g);
      for (Label x = 0; x < g; ++x)
        if (maps.contains(c.names[x])) given[x] = maps[c.names[x]].get<IntMatrix>();
      for (Label x = 0; x < g; ++x) {
        if (given[x])
          a.matrices.push_back(*given[x]);
        else if (given[c.inverse[x]])
          a.matrices.push_back(detail::inverse_matrix(*given[c.inverse[x]]));
        else if (identity_default)
          a.matrices.push_back(detail::identity_matrix(a.size));
        else
          fail(ErrorKind::invalid_action, "no map for generator " + c.names[x]);
      }
    }
    return a;
  } catch (const Json::exception& e) {
    fail(ErrorKind::invalid_action, std::string("action file: ") + e.what());
  }
}

inline Json action_to_json(const ActionSpec& a, const MarkovCoding& c) {
  Json j;
  j["kind"] = to_string(a.kind);
  Json maps = Json::object();
  if (a.kind == ActionKind::finite_permutation) {
    j["size"] = a.size;
    for (Label x = 0; x < a.permutations.size(); ++x) maps[c.names[x]] = a.permutations[x];
  } else {
    j["dimension"] = a.size;
    for (Label x = 0; x < a.matrices.size(); ++x) maps[c.names[x]] = a.matrices[x];
  }
  j["maps"] = maps;
  return j;
}

inline FiniteObservable finite_observable_from_json(const Json& j) {
  try {
    FiniteObservable phi;
    const Json& v = j.is_array() ? j : j.at("values");
    for (const auto& x : v) phi.push_back(io::to_rational(x, "observable value"));
    if (phi.empty()) fail(ErrorKind::invalid_input, "observable has no values");
    return phi;
  } catch (const Json::exception& e) {
    fail(ErrorKind::invalid_input, std::string("observable file: ") + e.what());
  }
}

struct TorusObservableFile {
  TorusObservable phi;
  std::vector<std::vector<double>> points;  ///< empty: use the default Halton points
};

inline TorusObservableFile torus_observable_from_json(const Json& j) {
  try {
    TorusObservableFile out;
    for (const auto& t : j.at("terms")) {
      const auto k = t.at("k").get<std::vector<std::int64_t>>();
      const double re = static_cast<double>(io::to_long_double(t.value("re", Json(0)), "coefficient"));
      const double im = static_cast<double>(io::to_long_double(t.value("im", Json(0)), "coefficient"));
      out.phi.terms.push_back({k, {re, im}});
    }
    if (j.contains("points"))
      for (const auto& p : j["points"]) {
        std::vector<double> q;
        for (const auto& x : p) q.push_back(static_cast<double>(io::to_long_double(x, "point coordinate")));
        out.points.push_back(std::move(q));
      }
    return out;
  } catch (const Json::exception& e) {
    fail(ErrorKind::invalid_input, std::string("observable file: ") + e.what());
  }
}

}  // namespace bowen_series

#endif  // BOWEN_SERIES_ACTION_IO_HPP
