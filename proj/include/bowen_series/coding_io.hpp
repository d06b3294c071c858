#ifndef BOWEN_SERIES_CODING_IO_HPP
#define BOWEN_SERIES_CODING_IO_HPP

// JSON coding files.
//
//   {
//     "format": "bowen-series-coding", "version": 1,
//     "source": "sl2z", "provenance": "geometric" | "combinatorial",
//     "generators": [ {"name": "S", "inverse": "S", "side": 0}, ... ],
//     "alphabet_size": 8,
//     "index_base": 0,                       // interval numbering in this file
//     "cut_points": ["-2", ...],             // optional, full precision strings
//     "labels": ["T^-1", ...],               // one generator name per interval
//     "transitions": [[0, 1], ...],          // row i lists the J with p_IJ = 1
//     "matrix": [[1, 1, 0, ...], ...],       // alternative to transitions
//     "vertices": [ {"loop": ["S", "T"], "n": 2, "start_side": 0}, ... ],
//     "display": [1, 2, ...]                 // optional display numbering
//   }

#include <set>
#include <string>

#include "bowen_series/coding.hpp"
#include "bowen_series/domain_io.hpp"

namespace bowen_series {

inline constexpr const char* kCodingFormat = "bowen-series-coding";

inline Json coding_to_json(const MarkovCoding& c) {
  Json j;
  j["format"] = kCodingFormat;
  j["version"] = 1;
  j["source"] = c.source;
  j["provenance"] = c.provenance;
  Json gens = Json::array();
  for (Label x = 0; x < c.generators(); ++x) {
    Json g{{"name", c.names[x]}, {"inverse", c.names[c.inverse[x]]}};
    if (x < c.side_of_label.size()) g["side"] = c.side_of_label[x];
    gens.push_back(g);
  }
  j["generators"] = gens;
  j["alphabet_size"] = c.size();
  j["index_base"] = 0;
  if (!c.cut_points.empty()) j["cut_points"] = c.cut_points;
  Json labels = Json::array();
  for (Label x : c.labels) labels.push_back(c.names[x]);
  j["labels"] = labels;
  j["transitions"] = c.P.rows();
  Json vs = Json::array();
  for (const auto& v : c.vertices) {
    Json loop = Json::array();
    for (Label x : v.loop) loop.push_back(c.names[x]);
    vs.push_back({{"loop", loop}, {"n", v.n}, {"start_side", v.start_side}});
  }
  j["vertices"] = vs;
  if (!c.display.empty()) j["display"] = c.display;
  return j;
}

inline MarkovCoding coding_from_json(const Json& j) {
  try {
    if (j.contains("format") && j["format"] != kCodingFormat)
      fail(ErrorKind::invalid_coding, "unknown coding format " + j["format"].dump());
    MarkovCoding c;
    c.source = j.value("source", std::string("imported"));
    c.provenance = j.value("provenance", std::string("combinatorial"));
    const Json& gens = j.at("generators");
    if (!gens.is_array() || gens.empty()) fail(ErrorKind::invalid_coding, "generators must be a nonempty array");
    for (const auto& g : gens) c.names.push_back(g.at("name").get<std::string>());
    std::set<std::string> unique(c.names.begin(), c.names.end());
    if (unique.size() != c.names.size()) fail(ErrorKind::invalid_coding, "duplicate generator names");
    auto label_of = [&](const std::string& name) -> Label {
      for (Label x = 0; x < c.names.size(); ++x)
        if (c.names[x] == name) return x;
      fail(ErrorKind::invalid_coding, "label '" + name + "' is not a declared generator");
    };
    bool sides = true;
    for (const auto& g : gens) {
      if (!g.contains("inverse")) fail(ErrorKind::invalid_coding, "missing generator involution for " + g["name"].dump());
      c.inverse.push_back(label_of(g["inverse"].get<std::string>()));
      if (g.contains("side"))
        c.side_of_label.push_back(g["side"].get<std::size_t>());
      else
        sides = false;
    }
    if (!sides) c.side_of_label.clear();
    const std::size_t base = j.value("index_base", 0);
    if (base > 1) fail(ErrorKind::invalid_coding, "index_base must be 0 or 1");
    for (const auto& l : j.at("labels")) c.labels.push_back(label_of(l.get<std::string>()));
    const std::size_t m = j.value("alphabet_size", c.labels.size());
    if (m != c.labels.size()) fail(ErrorKind::invalid_coding, "alphabet_size differs from the number of labels");
    if (j.contains("transitions")) {
      const Json& t = j["transitions"];
      if (!t.is_array() || t.size() != m) fail(ErrorKind::invalid_coding, "one transition row per interval required");
      std::vector<std::vector<int>> dense(m, std::vector<int>(m, 0));
      for (std::size_t i = 0; i < m; ++i)
        for (const auto& x : t[i]) {
          if (!x.is_number_integer()) fail(ErrorKind::invalid_coding, "transition entries must be interval indices");
          const long long k = x.get<long long>() - static_cast<long long>(base);
          if (k < 0 || static_cast<std::size_t>(k) >= m)
            fail(ErrorKind::invalid_coding, "transition target out of range in row " + std::to_string(i + base));
          if (dense[i][k]) fail(ErrorKind::invalid_coding, "repeated transition in row " + std::to_string(i + base));
          dense[i][k] = 1;
        }
      c.P = TransitionMatrix::from_dense(dense);
    } else if (j.contains("matrix")) {
      std::vector<std::vector<int>> dense;
      for (const auto& row : j["matrix"]) {
        std::vector<int> r;
        for (const auto& x : row) {
          if (!x.is_number_integer()) fail(ErrorKind::invalid_coding, "matrix entries must be 0 or 1");
          r.push_back(x.get<int>());
        }
        dense.push_back(std::move(r));
      }
      c.P = TransitionMatrix::from_dense(dense);
    } else {
      fail(ErrorKind::invalid_coding, "coding needs transitions or matrix");
    }
    if (j.contains("cut_points"))
      for (const auto& p : j["cut_points"]) c.cut_points.push_back(p.is_string() ? p.get<std::string>() : p.dump());
    if (j.contains("vertices"))
      for (const auto& v : j["vertices"]) {
        CodingVertex cv;
        for (const auto& x : v.at("loop")) cv.loop.push_back(label_of(x.get<std::string>()));
        cv.n = v.value("n", std::size_t{0});
        cv.start_side = v.value("start_side", std::size_t{0});
        c.vertices.push_back(std::move(cv));
      }
    if (j.contains("display")) {
      for (const auto& x : j["display"]) c.display.push_back(x.get<std::size_t>());
      std::set<std::size_t> d(c.display.begin(), c.display.end());
      if (c.display.size() != m || d.size() != m || *d.begin() != 1 || *d.rbegin() != m)
        fail(ErrorKind::invalid_coding, "display must be a numbering 1..N");
    } else if (base == 1) {
      for (std::size_t i = 0; i < m; ++i) c.display.push_back(i + 1);
    }
    c.validate();
    return c;
  } catch (const Json::exception& e) {
    fail(ErrorKind::invalid_coding, std::string("coding file: ") + e.what());
  }
}

inline MarkovCoding load_coding(const std::string& path) {
  return coding_from_json(io::read_json_file(path));
}

inline void save_coding(const MarkovCoding& c, const std::string& path) {
  io::write_text_file(path, coding_to_json(c).dump(2) + "\n");
}

/// Equality of everything a coding file records.
inline bool same_coding(const MarkovCoding& a, const MarkovCoding& b) {
  if (a.names != b.names || a.inverse != b.inverse || a.labels != b.labels || !(a.P == b.P)) return false;
  if (a.vertices.size() != b.vertices.size()) return false;
  for (std::size_t v = 0; v < a.vertices.size(); ++v)
    if (a.vertices[v].loop != b.vertices[v].loop || a.vertices[v].n != b.vertices[v].n ||
        a.vertices[v].start_side != b.vertices[v].start_side)
      return false;
  return a.side_of_label == b.side_of_label && a.cut_points == b.cut_points && a.display == b.display;
}

}  // namespace bowen_series

#endif  // BOWEN_SERIES_CODING_IO_HPP
