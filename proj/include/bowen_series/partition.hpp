#ifndef BOWEN_SERIES_PARTITION_HPP
#define BOWEN_SERIES_PARTITION_HPP

// Boundary cut points and interval annotations.
//
// L(k) is the counterclockwise arc from the back to the forward endpoint of
// the extension of side k, i.e. the part of the circle cut off by the side
// away from R.  Around an interior vertex v the 2n(v) endpoints of the
// geodesics through v cut the circle into arcs; starting from the arc shared
// by the two sides at v (top level n(v)) the levels descend to 0 on the arc
// opposite.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "bowen_series/domain.hpp"

namespace bowen_series {

struct CutPoint {
  BoundaryPoint point;
  /// Provenance: point = word(endpoint `forward` of the extension of `side`).
  Word word;
  std::size_t side = 0;
  bool forward = false;
};

struct IntervalInfo {
  std::size_t start = 0;  ///< cut point index of the clockwise end
  std::size_t end = 0;    ///< cut point index of the counterclockwise end
  std::vector<std::size_t> sides;       ///< sides k with I inside L(k)
  std::vector<int> level;               ///< level at each vertex, -1 at ideal vertices
  std::vector<std::size_t> crowns;      ///< vertices whose crown contains I
  std::optional<std::size_t> top_vertex;
  bool in_M = false;                    ///< I inside M(k) for its unique side k
  std::vector<std::size_t> in_A;        ///< sides k with I inside A(k)

  bool ambiguous() const { return sides.size() == 2; }
};

struct VertexArcs {
  std::size_t vertex = 0;
  std::size_t n = 0;
  /// Cut point indices of the 2n endpoints, counterclockwise from the back
  /// endpoint of the side starting at v.
  std::vector<std::size_t> endpoints;
};

class BoundaryPartition {
 public:
  std::vector<CutPoint> cuts;
  std::vector<IntervalInfo> intervals;
  std::vector<std::size_t> side_back;     ///< cut index of each side's back endpoint
  std::vector<std::size_t> side_forward;  ///< cut index of each side's forward endpoint
  std::vector<VertexArcs> vertices;       ///< one per vertex of R (empty arcs when ideal)

  std::size_t size() const { return intervals.size(); }

  /// Position of interval i within the cyclic run of intervals from cut a to cut b.
  bool in_run(std::size_t i, std::size_t a, std::size_t b) const {
    const std::size_t m = size();
    return (i + m - a) % m < (b + m - a) % m;
  }

  bool in_L(std::size_t interval, std::size_t side) const {
    return in_run(interval, side_back[side], side_forward[side]);
  }

  std::vector<std::size_t> L(std::size_t side) const { return collect([&](std::size_t i) { return in_L(i, side); }); }

  std::vector<std::size_t> M(std::size_t side) const {
    return collect([&](std::size_t i) { return intervals[i].in_M && intervals[i].sides[0] == side; });
  }

  std::vector<std::size_t> A(std::size_t side) const {
    return collect([&](std::size_t i) {
      const auto& a = intervals[i].in_A;
      return std::find(a.begin(), a.end(), side) != a.end();
    });
  }

  std::vector<std::size_t> crown(std::size_t vertex) const {
    return collect([&](std::size_t i) {
      const auto& c = intervals[i].crowns;
      return std::find(c.begin(), c.end(), vertex) != c.end();
    });
  }

  /// Index of the cut point equal to x (exactly, or within eps).
  std::optional<std::size_t> find(const BoundaryPoint& x, double eps) const {
    const auto it = std::lower_bound(cuts.begin(), cuts.end(), x.angle,
                                     [](const CutPoint& c, double a) { return c.point.angle < a; });
    const std::size_t m = cuts.size();
    const std::size_t base = static_cast<std::size_t>(it - cuts.begin());
    for (std::size_t off : {m - 1, std::size_t{0}, std::size_t{1}}) {
      const std::size_t k = (base + off) % m;
      if (same_point(cuts[k].point, x, eps)) return k;
    }
    return std::nullopt;
  }

 private:
  template <typename Pred>
  std::vector<std::size_t> collect(Pred pred) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
      if (pred(i)) out.push_back(i);
    return out;
  }
};

/// Endpoints of the geodesics of the tessellation that meet the boundary of
/// R: the side extensions and, at each interior vertex, the n(v) geodesics
/// through it.  Sorted by angle; coincident points merged.
inline std::vector<CutPoint> endpoint_set(const FundamentalDomain& d, const EvenCornerReport& report) {
  if (!report.ok) fail(ErrorKind::even_corners, report.summary());
  const auto& gens = d.generators();
  const double eps = d.tolerances().point;
  std::vector<CutPoint> raw;
  for (std::size_t k = 0; k < d.num_sides(); ++k) {
    raw.push_back({d.side(k).extension.back, {}, k, false});
    raw.push_back({d.side(k).extension.forward, {}, k, true});
  }
  for (std::size_t v = 0; v < d.num_sides(); ++v) {
    const VertexCycle& c = report.cycles[v];
    if (c.ideal) continue;
    const auto words = region_words(c);
    for (std::size_t k = 0; k < words.size(); ++k) {
      const Mobius g = gens.evaluate(words[k]);
      const std::size_t u = c.visited[k];
      for (std::size_t s : {d.previous_side(u), d.next_side(u)}) {
        const Geodesic& ext = d.side(s).extension;
        raw.push_back({g.apply(ext.back, d.tolerances().boundary), words[k], s, false});
        raw.push_back({g.apply(ext.forward, d.tolerances().boundary), words[k], s, true});
      }
    }
  }
  std::stable_sort(raw.begin(), raw.end(),
                   [](const CutPoint& a, const CutPoint& b) { return a.point.angle < b.point.angle; });
  std::vector<CutPoint> out;
  for (auto& c : raw) {
    if (!out.empty() && same_point(out.back().point, c.point, eps)) {
      if (c.word.size() < out.back().word.size()) out.back() = c;
      continue;
    }
    out.push_back(std::move(c));
  }
  if (out.size() > 1 && same_point(out.front().point, out.back().point, eps)) {
    if (out.back().word.size() < out.front().word.size()) out.front() = out.back();
    out.pop_back();
  }
  // Points closer than the merge tolerance but not merged would make the
  // matching ambiguous.
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& a = out[k].point;
    const auto& b = out[(k + 1) % out.size()].point;
    if (out.size() > 1 && !(a.exact && b.exact) && angular_distance(a.angle, b.angle) <= 1e3 * eps)
      fail(ErrorKind::numeric, "cut points " + describe(a) + " and " + describe(b) + " nearly coincide");
  }
  return out;
}

inline std::vector<CutPoint> endpoint_set(const FundamentalDomain& d) {
  return endpoint_set(d, verify_even_corners(d));
}

/// Builds intervals with L, level, crown, M and A annotations.
inline BoundaryPartition annotate_intervals(const FundamentalDomain& d, const EvenCornerReport& report,
                                            std::vector<CutPoint> cuts) {
  BoundaryPartition part;
  part.cuts = std::move(cuts);
  const std::size_t m = part.cuts.size();
  const std::size_t sides = d.num_sides();
  const double eps = d.tolerances().point;
  if (m < 2) fail(ErrorKind::invalid_domain, "fewer than two cut points");
  auto index_of = [&](const BoundaryPoint& x) {
    auto k = part.find(x, eps);
    if (!k) fail(ErrorKind::internal, "geodesic endpoint " + describe(x) + " missing from the cut points");
    return *k;
  };
  part.intervals.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    part.intervals[i].start = i;
    part.intervals[i].end = (i + 1) % m;
    part.intervals[i].level.assign(sides, -1);
  }
  for (std::size_t k = 0; k < sides; ++k) {
    part.side_back.push_back(index_of(d.side(k).extension.back));
    part.side_forward.push_back(index_of(d.side(k).extension.forward));
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < sides; ++k)
      if (part.in_L(i, k)) part.intervals[i].sides.push_back(k);

  part.vertices.resize(sides);
  for (std::size_t v = 0; v < sides; ++v) {
    VertexArcs& arcs = part.vertices[v];
    arcs.vertex = v;
    const VertexReport& vr = report.vertices[v];
    if (vr.ideal) continue;
    arcs.n = vr.n;
    for (const auto& g : vr.geodesics) {
      arcs.endpoints.push_back(index_of(g.back));
      arcs.endpoints.push_back(index_of(g.forward));
    }
    const std::size_t b_next = part.side_back[d.next_side(v)];
    const std::size_t f_prev = part.side_forward[d.previous_side(v)];
    std::sort(arcs.endpoints.begin(), arcs.endpoints.end(),
              [&](std::size_t x, std::size_t y) { return (x + m - b_next) % m < (y + m - b_next) % m; });
    const std::size_t n = arcs.n;
    if (arcs.endpoints.size() != 2 * n || arcs.endpoints[0] != b_next || arcs.endpoints[1] != f_prev)
      fail(ErrorKind::internal, "endpoints round vertex " + std::to_string(v) + " are out of order");
    for (std::size_t j = 0; j < 2 * n; ++j) {
      const int level = static_cast<int>(n - std::min(j, 2 * n - j));
      const std::size_t a = arcs.endpoints[j];
      const std::size_t b = arcs.endpoints[(j + 1) % (2 * n)];
      for (std::size_t i = 0; i < m; ++i) {
        if (!part.in_run(i, a, b)) continue;
        IntervalInfo& info = part.intervals[i];
        info.level[v] = level;
        if (level >= 2) info.crowns.push_back(v);
        if (level == static_cast<int>(n)) info.top_vertex = v;
      }
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    IntervalInfo& info = part.intervals[i];
    const std::string where = "interval " + std::to_string(i + 1);
    if (info.sides.empty())
      fail(ErrorKind::invalid_domain, where + " lies in no L-set");
    if (info.sides.size() > 2)
      fail(ErrorKind::invalid_domain, where + " lies in three or more L-sets");
    if (info.sides.size() == 2) {
      std::size_t p = info.sides[0], q = info.sides[1];
      if ((p + 1) % sides == q) std::swap(p, q);
      // q precedes p: q ends at v = p's start vertex
      const std::size_t v = p;
      if ((q + 1) % sides != p || d.vertex(v).ideal || info.top_vertex != v)
        fail(ErrorKind::invalid_domain, where + " lies in the L-sets of two sides that do not meet at its top vertex");
    }
    info.in_M = info.sides.size() == 1;
    for (std::size_t k : info.sides) {
      const bool in_crown = std::any_of(info.crowns.begin(), info.crowns.end(), [&](std::size_t v) {
        return v == d.start_vertex(k) || v == d.end_vertex(k);
      });
      if (!in_crown) info.in_A.push_back(k);
    }
  }
  if (sides > 3)
    for (std::size_t k = 0; k < sides; ++k)
      if (part.A(k).empty()) fail(ErrorKind::invalid_domain, "A-set of side " + std::to_string(k) + " is empty");
  return part;
}

inline BoundaryPartition build_partition(const FundamentalDomain& d) {
  const auto report = verify_even_corners(d);
  return annotate_intervals(d, report, endpoint_set(d, report));
}

}  // namespace bowen_series

#endif  // BOWEN_SERIES_PARTITION_HPP
