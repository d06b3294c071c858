#ifndef BOWEN_SERIES_DOMAIN_HPP
#define BOWEN_SERIES_DOMAIN_HPP

// Fundamental polygons with paired sides.
//
// Conventions.  Vertices are listed counterclockwise; side k joins vertex k to
// vertex k+1.  Every side carries its *exterior* label x: the copy xR lies
// across the side, and the interior label is x^{-1}.  Each generator is the
// exterior label of exactly one side, so generator indices coincide with side
// indices for geometric domains.  Reading labels along a path that crosses
// from gR into gxR yields x, so a path from O to gO reads a word for g.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bowen_series/common.hpp"
#include "bowen_series/mobius.hpp"

namespace bowen_series {

/// Names, inverse involution and (optionally) matrices of the generators.
struct GeneratorSet {
  std::vector<std::string> names;
  std::vector<Label> inverse;
  std::vector<Mobius> matrices;  // empty for purely combinatorial codings
  /// Optional extended-precision copies used for independent recomputation.
  std::vector<BasicMobius<long double>> precise;

  std::size_t size() const { return names.size(); }

  std::optional<Label> find(const std::string& name) const {
    for (Label k = 0; k < names.size(); ++k)
      if (names[k] == name) return k;
    return std::nullopt;
  }

  Label at(const std::string& name) const {
    if (auto k = find(name)) return *k;
    fail(ErrorKind::invalid_input, "unknown generator '" + name + "'");
  }

  Mobius evaluate(const Word& w) const {
    Mobius m;
    for (Label x : w) m = m * matrices.at(x);
    return m;
  }

  std::vector<BasicMobius<long double>> extended() const {
    if (precise.size() == matrices.size()) return precise;
    std::vector<BasicMobius<long double>> out;
    for (const auto& m : matrices) out.push_back(m.template cast<long double>());
    return out;
  }

  std::string spell(const Word& w, const std::string& sep = " ") const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += sep;
      out += names.at(w[i]);
    }
    return out;
  }

  Word inverse_word(const Word& w) const {
    Word out(w.rbegin(), w.rend());
    for (auto& x : out) x = inverse.at(x);
    return out;
  }
};

struct Side {
  Label label = 0;           ///< exterior label
  std::size_t partner = 0;   ///< side whose exterior label is label^{-1}
  Geodesic extension;        ///< back: beyond the start vertex; forward: beyond the end vertex
};

class FundamentalDomain {
 public:
  /// Builds and validates a domain.  `extensions` may supply exact side
  /// endpoints; they are checked against the computed ones.
  static FundamentalDomain create(std::string name, std::vector<DiskPoint> vertices,
                                  std::vector<std::size_t> partners, GeneratorSet generators,
                                  std::vector<std::optional<Geodesic>> extensions = {},
                                  const Tolerances& tol = default_tolerances()) {
    FundamentalDomain d;
    d.name_ = std::move(name);
    d.vertices_ = std::move(vertices);
    d.generators_ = std::move(generators);
    d.tol_ = tol;
    const std::size_t n = d.vertices_.size();
    if (n < 3) fail(ErrorKind::invalid_domain, "a fundamental domain needs at least 3 sides");
    if (partners.size() != n || d.generators_.size() != n || d.generators_.inverse.size() != n ||
        d.generators_.matrices.size() != n)
      fail(ErrorKind::invalid_domain, "sides, pairing and generators must have one entry per side");
    extensions.resize(n);
    d.sides_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      Side& s = d.sides_[k];
      s.label = k;
      s.partner = partners[k];
      s.extension = geodesic_through(d.vertices_[k], d.vertices_[(k + 1) % n]);
      if (const auto& given = extensions[k]) {
        if (!same_point(s.extension.back, given->back, 1e-9) ||
            !same_point(s.extension.forward, given->forward, 1e-9))
          fail(ErrorKind::invalid_domain,
               "declared endpoints of side " + std::to_string(k) + " do not match its vertices");
        s.extension = *given;
      }
    }
    d.validate();
    return d;
  }

  const std::string& name() const { return name_; }
  std::size_t num_sides() const { return sides_.size(); }
  const std::vector<DiskPoint>& vertices() const { return vertices_; }
  const DiskPoint& vertex(std::size_t k) const { return vertices_.at(k); }
  const std::vector<Side>& sides() const { return sides_; }
  const Side& side(std::size_t k) const { return sides_.at(k); }
  const GeneratorSet& generators() const { return generators_; }
  const Tolerances& tolerances() const { return tol_; }

  /// Extended-precision vertices for independent recomputation; defaults
  /// to the double vertices.
  std::vector<BasicDiskPoint<long double>> extended_vertices() const {
    if (precise_vertices_.size() == vertices_.size()) return precise_vertices_;
    std::vector<BasicDiskPoint<long double>> out;
    for (const auto& p : vertices_) {
      BasicDiskPoint<long double> q;
      q.ideal = p.ideal;
      q.z = {static_cast<long double>(p.z.real()), static_cast<long double>(p.z.imag())};
      if (p.ideal)
        q.boundary = p.boundary.exact ? BasicBoundaryPoint<long double>(*p.boundary.exact)
                                      : BasicBoundaryPoint<long double>(static_cast<long double>(p.boundary.angle));
      out.push_back(q);
    }
    return out;
  }

  void set_extended_vertices(std::vector<BasicDiskPoint<long double>> v) {
    if (v.size() != vertices_.size()) fail(ErrorKind::invalid_domain, "extended vertex count mismatch");
    precise_vertices_ = std::move(v);
  }

  std::size_t start_vertex(std::size_t side) const { return side; }
  std::size_t end_vertex(std::size_t side) const { return (side + 1) % num_sides(); }
  std::size_t previous_side(std::size_t vertex) const {
    return (vertex + num_sides() - 1) % num_sides();
  }
  std::size_t next_side(std::size_t vertex) const { return vertex; }

  /// Side s(x) whose exterior label is x.
  std::size_t side_of_label(Label x) const {
    for (std::size_t k = 0; k < sides_.size(); ++k)
      if (sides_[k].label == x) return k;
    fail(ErrorKind::invalid_domain, "label without a side");
  }

  /// Interior angle at an interior vertex.
  double interior_angle(std::size_t v) const {
    const DiskPoint& p = vertices_.at(v);
    if (p.ideal) return 0.0;
    const std::size_t n = num_sides();
    return angle_at(p.z, vertices_[(v + 1) % n].z, vertices_[(v + n - 1) % n].z);
  }

  bool contains(std::complex<double> z, double slack = 0.0) const {
    if (std::abs(z) >= 1.0) return false;
    for (const auto& s : sides_)
      if (side_of(s.extension, z) < -slack) return false;
    return true;
  }

  /// A point in the relative interior of side k.
  std::complex<double> point_on_side(std::size_t k) const {
    const DiskPoint& p = vertices_[start_vertex(k)];
    const DiskPoint& q = vertices_[end_vertex(k)];
    if (!p.ideal || !q.ideal) {
      const DiskPoint& base = p.ideal ? q : p;
      const DiskPoint& other = p.ideal ? p : q;
      const auto to = Mobius::move_to_origin(base.z);
      return to.inverse().apply(0.5 * to.apply(other.z));
    }
    const std::complex<double> m = 0.5 * (p.z + q.z);
    if (std::abs(m) < 1e-15) return {0.0, 0.0};
    const double half = 0.5 * std::acos(std::clamp(std::real(p.z * std::conj(q.z)), -1.0, 1.0));
    return ((1.0 - std::sin(half)) / std::cos(half)) * (m / std::abs(m));
  }

  /// Point at small hyperbolic offset from side k, outside (+1) or inside (-1).
  std::complex<double> offset_from_side(std::size_t k, double sign, double eps = 1e-3) const {
    const std::complex<double> m = point_on_side(k);
    const auto to = Mobius::move_to_origin(m);
    std::complex<double> dir = to.apply(sides_[k].extension.forward.on_circle());
    dir /= std::abs(dir);
    const std::complex<double> right = std::complex<double>(0, -1) * dir;
    return to.inverse().apply(sign * eps * right);
  }

 private:
  void validate() const {
    const std::size_t n = num_sides();
    const auto& g = generators_;
    auto side_name = [&](std::size_t k) {
      return "side " + std::to_string(k) + " (" + g.names[sides_[k].label] + ")";
    };
    for (std::size_t k = 0; k < n; ++k) {
      const Side& s = sides_[k];
      if (s.partner >= n || sides_[s.partner].partner != k)
        fail(ErrorKind::invalid_domain, "side pairing is not an involution at " + side_name(k));
      if (g.inverse[s.label] != sides_[s.partner].label || g.inverse[g.inverse[s.label]] != s.label)
        fail(ErrorKind::invalid_domain,
             "interior and exterior labels are not mutually inverse at " + side_name(k));
      if (!(g.matrices[g.inverse[s.label]] * g.matrices[s.label]).is_identity(tol_.mat))
        fail(ErrorKind::invalid_domain, "generator matrices of " + side_name(k) + " are not inverse");
      if (g.matrices[s.label].determinant_error() > tol_.det)
        fail(ErrorKind::invalid_domain, "generator of " + side_name(k) + " is not normalized");
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (vertices_[v].ideal) continue;
      if (std::abs(vertices_[v].z) >= 1.0)
        fail(ErrorKind::invalid_domain, "vertex " + std::to_string(v) + " is not inside the disk");
      const double a = interior_angle(v);
      if (!(a > tol_.geo && a < std::numbers::pi - tol_.geo))
        fail(ErrorKind::invalid_domain,
             "interior angle at vertex " + std::to_string(v) + " is not strictly between 0 and pi");
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t v = 0; v < n; ++v) {
        if (vertices_[v].ideal || v == start_vertex(k) || v == end_vertex(k)) continue;
        if (side_of(sides_[k].extension, vertices_[v].z) <= 0.0)
          fail(ErrorKind::invalid_domain, "polygon is not convex or not counterclockwise at " + side_name(k));
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      // x^{-1} carries s(x) onto s(x^{-1}), reversing orientation.
      const Side& s = sides_[k];
      const Mobius back = g.matrices[g.inverse[s.label]];
      if (!maps_vertex(back, end_vertex(k), start_vertex(s.partner)) ||
          !maps_vertex(back, start_vertex(k), end_vertex(s.partner)))
        fail(ErrorKind::invalid_domain, "generator " + g.names[g.inverse[s.label]] +
                                            " does not carry " + side_name(k) + " onto its partner");
      // The copy across the side is xR: the interior label brings it back.
      const auto outside = offset_from_side(k, +1.0);
      if (contains(outside) || !contains(back.apply(outside)))
        fail(ErrorKind::invalid_domain, "labelling convention violated at " + side_name(k));
    }
  }

  bool maps_vertex(const Mobius& m, std::size_t from, std::size_t to) const {
    const DiskPoint& p = vertices_[from];
    const DiskPoint& q = vertices_[to];
    if (p.ideal != q.ideal) return false;
    if (p.ideal) return same_point(m.apply(p.boundary, tol_.boundary), q.boundary, tol_.geo);
    return std::abs(m.apply(p.z) - q.z) <= tol_.geo;
  }

  std::string name_;
  std::vector<DiskPoint> vertices_;
  std::vector<BasicDiskPoint<long double>> precise_vertices_;
  std::vector<Side> sides_;
  GeneratorSet generators_;
  Tolerances tol_;
};

/// Combinatorics around one vertex of R.
struct VertexCycle {
  std::size_t vertex = 0;
  bool ideal = false;
  /// Labels read walking counterclockwise round the vertex until returning
  /// to R; its length is the number 2n(v) of copies of R meeting there.
  Word word;
  /// R-vertex corresponding to v inside each copy g_k R, k = 0..len-1.
  std::vector<std::size_t> visited;
  double angle_sum = 0.0;
  std::size_t n = 0;  ///< number of tessellation geodesics through v

  std::size_t copies() const { return word.size(); }
};

/// Walks round vertex v crossing sides counterclockwise.  Crossing the side
/// ending at the current R-vertex u reads its exterior label x and continues
/// at the start vertex of the partner side.
inline VertexCycle walk_vertex(const FundamentalDomain& d, std::size_t v) {
  VertexCycle out;
  out.vertex = v;
  out.ideal = d.vertex(v).ideal;
  if (out.ideal) return out;
  const std::size_t limit = 64 * d.num_sides() + 64;
  std::size_t u = v;
  double sum = 0.0;
  while (true) {
    if (d.vertex(u).ideal)
      fail(ErrorKind::invalid_domain,
           "vertex cycle at " + std::to_string(v) + " reaches an ideal vertex");
    out.visited.push_back(u);
    sum += d.interior_angle(u);
    const std::size_t s = d.previous_side(u);
    out.word.push_back(d.side(s).label);
    u = d.start_vertex(d.side(s).partner);
    if (sum >= kTwoPi - d.tolerances().geo || out.word.size() > limit) break;
  }
  out.angle_sum = sum;
  if (std::abs(sum - kTwoPi) > d.tolerances().geo || u != v)
    fail(ErrorKind::invalid_domain, "angles round vertex " + std::to_string(v) +
                                        " do not close up to 2pi");
  return out;
}

struct VertexReport {
  std::size_t vertex = 0;
  bool ideal = false;
  bool ok = true;
  std::size_t copies = 0;
  std::size_t n = 0;
  std::vector<Geodesic> geodesics;  ///< distinct complete geodesics through v
  std::string message;
};

struct EvenCornerReport {
  bool ok = true;
  std::vector<VertexReport> vertices;
  std::vector<VertexCycle> cycles;

  std::string summary() const {
    std::ostringstream out;
    for (const auto& v : vertices)
      if (!v.ok) out << "vertex " << v.vertex << ": " << v.message << "\n";
    return out.str();
  }
};

/// Region elements g_k = x_1 ... x_k along a vertex walk.
inline std::vector<Word> region_words(const VertexCycle& c) {
  std::vector<Word> out;
  Word w;
  for (std::size_t k = 0; k < c.word.size(); ++k) {
    out.push_back(w);
    w.push_back(c.word[k]);
  }
  return out;
}

/// Local check that every side extension through each interior vertex runs
/// along sides of the copies of R round that vertex.
inline EvenCornerReport verify_even_corners(const FundamentalDomain& d) {
  EvenCornerReport report;
  const auto& gens = d.generators();
  for (std::size_t v = 0; v < d.num_sides(); ++v) {
    VertexReport vr;
    vr.vertex = v;
    vr.ideal = d.vertex(v).ideal;
    if (vr.ideal) {
      report.vertices.push_back(vr);
      report.cycles.push_back(walk_vertex(d, v));
      continue;
    }
    VertexCycle cycle;
    try {
      cycle = walk_vertex(d, v);
    } catch (const Error& e) {
      vr.ok = false;
      vr.message = e.what();
      report.ok = false;
      report.vertices.push_back(vr);
      report.cycles.push_back(cycle);
      continue;
    }
    vr.copies = cycle.copies();
    if (!gens.evaluate(cycle.word).is_identity(d.tolerances().mat)) {
      vr.ok = false;
      vr.message = "vertex relation " + gens.spell(cycle.word) + " is not the identity";
    }
    const auto words = region_words(cycle);
    std::vector<std::size_t> rays_per_geodesic;
    for (std::size_t k = 0; k < words.size() && vr.ok; ++k) {
      const Mobius g = gens.evaluate(words[k]);
      const std::size_t u = cycle.visited[k];
      for (std::size_t s : {d.previous_side(u), d.next_side(u)}) {
        const Geodesic& ext = d.side(s).extension;
        Geodesic image{g.apply(ext.back), g.apply(ext.forward)};
        if (std::abs(side_of(image, d.vertex(v).z)) > 100 * d.tolerances().geo) {
          vr.ok = false;
          vr.message = "image of side " + std::to_string(s) + " misses the vertex";
          break;
        }
        auto it = std::find_if(vr.geodesics.begin(), vr.geodesics.end(),
                               [&](const Geodesic& h) { return same_geodesic(h, image, d.tolerances().geo); });
        if (it == vr.geodesics.end()) {
          vr.geodesics.push_back(image);
          rays_per_geodesic.push_back(1);
        } else {
          ++rays_per_geodesic[static_cast<std::size_t>(it - vr.geodesics.begin())];
        }
      }
    }
    if (vr.ok) {
      // Each ray is shared by two neighbouring copies, so a geodesic through v
      // is seen four times when both of its rays are sides.
      for (std::size_t k = 0; k < vr.geodesics.size(); ++k) {
        if (rays_per_geodesic[k] != 4) {
          vr.ok = false;
          std::ostringstream msg;
          msg << "extension of a side through vertex " << v << " is not a side of the "
              << cycle.copies() << " copies meeting there (sides "
              << gens.names[d.side(d.previous_side(v)).label] << ", "
              << gens.names[d.side(d.next_side(v)).label] << ")";
          vr.message = msg.str();
          break;
        }
      }
      if (vr.ok && 2 * vr.geodesics.size() != cycle.copies()) {
        vr.ok = false;
        vr.message = "number of copies is not twice the number of geodesics";
      }
    }
    vr.n = vr.ok ? vr.geodesics.size() : 0;
    cycle.n = vr.n;
    report.ok = report.ok && vr.ok;
    report.vertices.push_back(vr);
    report.cycles.push_back(cycle);
  }
  return report;
}

/// Vertex cycles of a domain with even corners; throws when the corners are
/// not even or a relation fails.
inline std::vector<VertexCycle> vertex_cycles(const FundamentalDomain& d) {
  auto report = verify_even_corners(d);
  if (!report.ok) fail(ErrorKind::even_corners, report.summary());
  return report.cycles;
}

/// Relation x x = id at the fixed point of a self-paired side.
struct SideFixedPointCycle {
  std::size_t side = 0;
  Word word;
};

inline std::vector<SideFixedPointCycle> side_fixed_point_cycles(const FundamentalDomain& d) {
  std::vector<SideFixedPointCycle> out;
  const auto& gens = d.generators();
  for (std::size_t k = 0; k < d.num_sides(); ++k) {
    if (d.side(k).partner != k) continue;
    const Word w = {d.side(k).label, d.side(k).label};
    if (!gens.evaluate(w).is_identity(d.tolerances().mat))
      fail(ErrorKind::invalid_domain, "self-paired side " + std::to_string(k) + " is not an involution");
    out.push_back({k, w});
  }
  return out;
}

}  // namespace bowen_series

#endif  // BOWEN_SERIES_DOMAIN_HPP
