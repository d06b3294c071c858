#ifndef BOWEN_SERIES_DOMAIN_IO_HPP
#define BOWEN_SERIES_DOMAIN_IO_HPP

// JSON domain files.
//
//   {
//     "name": "...",
//     "model": "disk" | "halfplane",      // coordinates of interior vertices
//     "vertices": [ {"z": [re, im]} | {"ideal": "p/q" | "inf"} | {"angle": t}, ... ],
//     "sides": [ {"label": "a", "partner": 2,
//                 "matrix": {"exact": [[a, b], [c, d]]}            // half-plane, rational
//                         | {"disk": [[re, im], [re, im], [re, im], [re, im]]},
//                 "endpoints": ["p/q", "inf"]}, ... ]             // optional, exact
//   }
//
// Side k runs from vertex k to vertex k+1 (counterclockwise) and carries the
// exterior label `label`; its partner carries the inverse.  Numbers may be
// JSON numbers or strings; strings keep full precision.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "bowen_series/domain.hpp"
#include "bowen_series/presets.hpp"

namespace bowen_series {

using Json = nlohmann::json;

namespace io {

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::invalid_input, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorKind::invalid_input, path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::invalid_input, "cannot write " + path);
  out << text;
}

inline long double to_long_double(const Json& j, const std::string& what) {
  try {
    if (j.is_number()) return j.get<long double>();
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s.find('/') != std::string::npos) {
        const auto r = ProjectiveRational::parse(s);
        if (r.is_infinity()) fail(ErrorKind::invalid_input, what + " is infinite");
        return r.numerator().convert_to<long double>() / r.denominator().convert_to<long double>();
      }
      std::size_t used = 0;
      const long double v = std::stold(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::invalid_input, what + " is not a number");
}

/// Exact rational from an integer, a decimal or "p/q" string, or the exact
/// binary value of a JSON float.
inline BigRational to_rational(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return BigRational(j.get<long long>());
  if (j.is_number_float()) return BigRational(j.get<double>());
  if (!j.is_string()) fail(ErrorKind::invalid_input, what + " is not a number");
  std::string s = j.get<std::string>();
  try {
    const auto slash = s.find('/');
    if (slash != std::string::npos)
      return BigRational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    bool neg = !s.empty() && s[0] == '-';
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) s = s.substr(1);
    BigInt scale = 1;
    const auto dot = s.find('.');
    if (dot != std::string::npos) {
      const std::string frac = s.substr(dot + 1);
      s = s.substr(0, dot) + frac;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    }
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw std::invalid_argument(s);
    BigRational r(BigInt(s), scale);
    return neg ? BigRational(-r) : r;
  } catch (const std::exception&) {
    fail(ErrorKind::invalid_input, what + " is not a rational number: " + j.dump());
  }
}

inline std::string format_long_double(long double x) {
  std::ostringstream out;
  out.precision(21);
  out << x;
  return out.str();
}

}  // namespace io

inline FundamentalDomain domain_from_json(const Json& j, const Tolerances& tol = default_tolerances()) {
  try {
    const std::string name = j.value("name", std::string("domain"));
    const std::string model = j.value("model", std::string("disk"));
    if (model != "disk" && model != "halfplane") fail(ErrorKind::invalid_input, "model must be disk or halfplane");
    const Json& jv = j.at("vertices");
    const Json& js = j.at("sides");
    if (!jv.is_array() || !js.is_array() || jv.size() != js.size())
      fail(ErrorKind::invalid_input, "vertices and sides must be arrays of equal length");
    const std::size_t n = jv.size();
    std::vector<DiskPoint> vertices;
    std::vector<BasicDiskPoint<long double>> precise;
    for (std::size_t k = 0; k < n; ++k) {
      const Json& v = jv[k];
      const std::string where = "vertex " + std::to_string(k);
      if (v.contains("ideal")) {
        const auto r = ProjectiveRational::parse(v["ideal"].is_string() ? v["ideal"].get<std::string>()
                                                                         : v["ideal"].dump());
        vertices.push_back(DiskPoint::at_infinity(BoundaryPoint(r)));
        precise.push_back(BasicDiskPoint<long double>::at_infinity(BasicBoundaryPoint<long double>(r)));
      } else if (v.contains("angle")) {
        const long double t = io::to_long_double(v["angle"], where);
        vertices.push_back(DiskPoint::at_infinity(BoundaryPoint(static_cast<double>(t))));
        precise.push_back(BasicDiskPoint<long double>::at_infinity(BasicBoundaryPoint<long double>(t)));
      } else if (v.contains("z")) {
        const Json& z = v["z"];
        if (!z.is_array() || z.size() != 2) fail(ErrorKind::invalid_input, where + ": z must be [re, im]");
        std::complex<long double> w(io::to_long_double(z[0], where), io::to_long_double(z[1], where));
        if (model == "halfplane") {
          if (w.imag() <= 0) fail(ErrorKind::invalid_input, where + " is not in the upper half-plane");
          w = halfplane_to_disk<long double>(w);
        }
        vertices.push_back(DiskPoint::interior({static_cast<double>(w.real()), static_cast<double>(w.imag())}));
        precise.push_back(BasicDiskPoint<long double>::interior(w));
      } else {
        fail(ErrorKind::invalid_input, where + " needs one of z, ideal or angle");
      }
    }
    GeneratorSet gens;
    std::vector<std::size_t> partners;
    std::vector<std::optional<Geodesic>> ext(n);
    for (std::size_t k = 0; k < n; ++k) {
      const Json& s = js[k];
      const std::string where = "side " + std::to_string(k);
      gens.names.push_back(s.at("label").get<std::string>());
      const auto p = s.at("partner").get<long long>();
      if (p < 0 || static_cast<std::size_t>(p) >= n) fail(ErrorKind::invalid_domain, where + ": partner out of range");
      partners.push_back(static_cast<std::size_t>(p));
      const Json& m = s.at("matrix");
      if (m.contains("exact")) {
        const Json& e = m["exact"];
        if (!e.is_array() || e.size() != 2 || e[0].size() != 2 || e[1].size() != 2)
          fail(ErrorKind::invalid_input, where + ": exact matrix must be 2x2");
        std::array<BigRational, 4> r{io::to_rational(e[0][0], where), io::to_rational(e[0][1], where),
                                     io::to_rational(e[1][0], where), io::to_rational(e[1][1], where)};
        BigInt l = 1;
        for (const auto& x : r) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
        std::array<BigInt, 4> z;
        for (int i = 0; i < 4; ++i) z[i] = boost::multiprecision::numerator(r[i]) * (l / boost::multiprecision::denominator(r[i]));
        const ExactMatrix em(z[0], z[1], z[2], z[3]);
        gens.matrices.push_back(Mobius::from_exact(em));
        gens.precise.push_back(BasicMobius<long double>::from_exact(em));
      } else if (m.contains("disk")) {
        const Json& e = m["disk"];
        if (!e.is_array() || e.size() != 4) fail(ErrorKind::invalid_input, where + ": disk matrix needs 4 complex entries");
        std::array<std::complex<long double>, 4> c;
        for (int i = 0; i < 4; ++i) {
          if (!e[i].is_array() || e[i].size() != 2) fail(ErrorKind::invalid_input, where + ": entries are [re, im]");
          c[i] = {io::to_long_double(e[i][0], where), io::to_long_double(e[i][1], where)};
        }
        auto lo = [](std::complex<long double> z) {
          return std::complex<double>(static_cast<double>(z.real()), static_cast<double>(z.imag()));
        };
        gens.matrices.push_back(Mobius::from_disk(lo(c[0]), lo(c[1]), lo(c[2]), lo(c[3])));
        gens.precise.push_back(BasicMobius<long double>::from_disk(c[0], c[1], c[2], c[3]));
      } else {
        fail(ErrorKind::invalid_input, where + ": matrix needs exact or disk entries");
      }
      if (s.contains("endpoints")) {
        const Json& e = s["endpoints"];
        if (!e.is_array() || e.size() != 2) fail(ErrorKind::invalid_input, where + ": endpoints must be a pair");
        auto text = [](const Json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
        ext[k] = Geodesic{BoundaryPoint(ProjectiveRational::parse(text(e[0]))),
                          BoundaryPoint(ProjectiveRational::parse(text(e[1])))};
      }
    }
    gens.inverse = partners;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < k; ++l)
        if (gens.names[k] == gens.names[l]) fail(ErrorKind::invalid_domain, "duplicate label " + gens.names[k]);
    auto d = FundamentalDomain::create(name, vertices, partners, gens, ext, tol);
    d.set_extended_vertices(precise);
    return d;
  } catch (const Json::exception& e) {
    fail(ErrorKind::invalid_input, std::string("domain file: ") + e.what());
  }
}

inline Json domain_to_json(const FundamentalDomain& d) {
  Json j;
  j["name"] = d.name();
  j["model"] = "disk";
  const auto precise = d.extended_vertices();
  Json vs = Json::array();
  for (std::size_t k = 0; k < d.num_sides(); ++k) {
    const auto& v = d.vertex(k);
    if (v.ideal && v.boundary.exact)
      vs.push_back({{"ideal", v.boundary.exact->to_string()}});
    else if (v.ideal)
      vs.push_back({{"angle", io::format_long_double(precise[k].boundary.angle)}});
    else
      vs.push_back(Json{{"z", Json::array({io::format_long_double(precise[k].z.real()),
                                               io::format_long_double(precise[k].z.imag())})}});
  }
  j["vertices"] = vs;
  const auto& g = d.generators();
  const auto ext = g.extended();
  Json ss = Json::array();
  for (std::size_t k = 0; k < d.num_sides(); ++k) {
    const Side& s = d.side(k);
    Json js;
    js["label"] = g.names[s.label];
    js["partner"] = s.partner;
    const Mobius& m = g.matrices[s.label];
    if (m.exact()) {
      const auto& e = m.exact()->entries();
      Json rows = Json::array({Json::array({e[0].str(), e[1].str()}), Json::array({e[2].str(), e[3].str()})});
      js["matrix"] = Json{{"exact", rows}};
    } else {
      Json entries = Json::array();
      for (const auto& z : ext[s.label].entries())
        entries.push_back(Json::array({io::format_long_double(z.real()), io::format_long_double(z.imag())}));
      js["matrix"] = Json{{"disk", entries}};
    }
    if (s.extension.back.exact && s.extension.forward.exact)
      js["endpoints"] = Json::array({s.extension.back.exact->to_string(), s.extension.forward.exact->to_string()});
    ss.push_back(js);
  }
  j["sides"] = ss;
  return j;
}

inline FundamentalDomain load_domain(const std::string& path, const Tolerances& tol = default_tolerances()) {
  return domain_from_json(io::read_json_file(path), tol);
}

/// A preset name ("sl2z", "ideal_triangle", "surface_4g") or a file path.
inline FundamentalDomain resolve_domain(const std::string& source, int genus = 2,
                                        SurfacePairing pairing = SurfacePairing::commutator,
                                        const Tolerances& tol = default_tolerances()) {
  if (is_preset_name(source)) return preset_domain(source, genus, pairing, tol);
  return load_domain(source, tol);
}

}  // namespace bowen_series

#endif  // BOWEN_SERIES_DOMAIN_IO_HPP
