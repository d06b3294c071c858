#ifndef BOWEN_SERIES_CODING_HPP
#define BOWEN_SERIES_CODING_HPP

// Label choice, the Markov map f = e(I)^{-1} on I, and the transition matrix.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bowen_series/partition.hpp"

namespace bowen_series {

/// Square 0/1 matrix stored both as sorted row lists and densely.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(std::vector<std::vector<std::size_t>> rows) : rows_(std::move(rows)) {
    const std::size_t n = rows_.size();
    dense_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& r = rows_[i];
      std::sort(r.begin(), r.end());
      r.erase(std::unique(r.begin(), r.end()), r.end());
      for (std::size_t j : r) {
        if (j >= n) fail(ErrorKind::invalid_coding, "transition to a symbol outside the alphabet");
        dense_[i * n + j] = 1;
      }
    }
  }

  static TransitionMatrix from_dense(const std::vector<std::vector<int>>& a) {
    std::vector<std::vector<std::size_t>> rows(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].size() != a.size()) fail(ErrorKind::invalid_coding, "matrix is not square");
      for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[i][j] != 0 && a[i][j] != 1) fail(ErrorKind::invalid_coding, "matrix entries must be 0 or 1");
        if (a[i][j]) rows[i].push_back(j);
      }
    }
    return TransitionMatrix(std::move(rows));
  }

  std::size_t size() const { return rows_.size(); }
  bool operator()(std::size_t i, std::size_t j) const { return dense_[i * size() + j] != 0; }
  const std::vector<std::size_t>& row(std::size_t i) const { return rows_.at(i); }
  const std::vector<std::vector<std::size_t>>& rows() const { return rows_; }
  std::size_t ones() const {
    std::size_t s = 0;
    for (const auto& r : rows_) s += r.size();
    return s;
  }

  friend bool operator==(const TransitionMatrix& a, const TransitionMatrix& b) { return a.rows_ == b.rows_; }

 private:
  std::vector<std::vector<std::size_t>> rows_;
  std::vector<std::uint8_t> dense_;
};

/// Combinatorial data of one vertex of R: its counterclockwise loop word
/// and the number of geodesics through it (0 for ideal vertices).
struct CodingVertex {
  Word loop;
  std::size_t n = 0;
  std::size_t start_side = 0;  ///< side of R starting at this vertex
};

/// Alphabet, labels and transitions, plus the generator data needed by the
/// word and ergodic modules.  Geometric codings also keep their cut points.
struct MarkovCoding {
  std::string source;
  std::string provenance = "geometric";
  std::vector<std::string> names;   ///< generator names
  std::vector<Label> inverse;       ///< generator involution
  std::vector<std::string> cut_points;  ///< textual cut points (angles or exact rationals)
  std::vector<Label> labels;        ///< pi(I) for each interval
  TransitionMatrix P;
  std::vector<CodingVertex> vertices;
  std::vector<std::size_t> side_of_label;  ///< side s(x) of each generator
  /// Optional display numbering of intervals (1-based), e.g. left to right on R for sl2z.
  std::vector<std::size_t> display;

  std::size_t size() const { return labels.size(); }
  std::size_t generators() const { return names.size(); }
  std::size_t display_index(std::size_t i) const { return display.empty() ? i + 1 : display[i]; }
  std::size_t max_n() const {
    std::size_t n = 0;
    for (const auto& v : vertices) n = std::max(n, v.n);
    return n;
  }

  /// Structural checks shared by the geometric and imported paths.
  void validate() const {
    const std::size_t g = names.size();
    if (labels.empty()) fail(ErrorKind::invalid_coding, "empty alphabet");
    if (P.size() != labels.size()) fail(ErrorKind::invalid_coding, "matrix size differs from the alphabet size");
    if (inverse.size() != g) fail(ErrorKind::invalid_coding, "missing generator involution");
    for (Label x = 0; x < g; ++x)
      if (inverse[x] >= g || inverse[inverse[x]] != x)
        fail(ErrorKind::invalid_coding, "generator inverse map is not an involution at " + names[x]);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] >= g) fail(ErrorKind::invalid_coding, "label of interval " + std::to_string(display_index(i)) + " is not a generator");
      if (P.row(i).empty()) fail(ErrorKind::invalid_coding, "row " + std::to_string(display_index(i)) + " of P is zero");
    }
    for (const auto& v : vertices)
      for (Label x : v.loop)
        if (x >= g) fail(ErrorKind::invalid_coding, "vertex cycle uses an unknown generator");
  }
};

enum class LabelPolicy { paper_default, clockwise, anticlockwise, explicit_map };

inline LabelPolicy parse_label_policy(const std::string& s) {
  if (s == "paper_default" || s == "default") return LabelPolicy::paper_default;
  if (s == "clockwise") return LabelPolicy::clockwise;
  if (s == "anticlockwise" || s == "counterclockwise") return LabelPolicy::anticlockwise;
  if (s == "explicit") return LabelPolicy::explicit_map;
  fail(ErrorKind::invalid_input, "unknown label policy '" + s + "'");
}

/// Chooses e(I) with I inside L(e).  Ambiguity only arises on top-level
/// intervals, which lie in the L-sets of the two sides at their vertex:
/// `anticlockwise` takes the side leaving the vertex counterclockwise,
/// `clockwise` the side arriving at it, `paper_default` the generator name
/// that sorts first.  `choices` overrides individual intervals.
inline std::vector<Label> assign_labels(const FundamentalDomain& d, const BoundaryPartition& part,
                                        LabelPolicy policy,
                                        const std::map<std::size_t, Label>& choices = {}) {
  const auto& gens = d.generators();
  std::vector<Label> out(part.size());
  for (std::size_t i = 0; i < part.size(); ++i) {
    const auto& info = part.intervals[i];
    std::size_t side = info.sides[0];
    if (info.ambiguous()) {
      const std::size_t v = *info.top_vertex;
      const std::size_t next = d.next_side(v), prev = d.previous_side(v);
      switch (policy) {
        case LabelPolicy::anticlockwise: side = next; break;
        case LabelPolicy::clockwise: side = prev; break;
        default:
          side = gens.names[d.side(next).label] < gens.names[d.side(prev).label] ? next : prev;
          break;
      }
    }
    out[i] = d.side(side).label;
    if (auto it = choices.find(i); it != choices.end()) {
      const Label x = it->second;
      if (x >= gens.size() || !part.in_L(i, d.side_of_label(x)))
        fail(ErrorKind::invalid_coding, "interval " + std::to_string(i + 1) + " is not contained in L(" +
                                            (x < gens.size() ? gens.names[x] : std::string("?")) + ")");
      out[i] = x;
    }
  }
  return out;
}

struct MarkovViolation {
  std::size_t interval = 0;
  std::string message;
};

struct MarkovCheckReport {
  std::vector<MarkovViolation> violations;
  std::size_t checked_pairs = 0;
  std::size_t checked_points = 0;
  bool ok() const { return violations.empty(); }
};

namespace detail {

/// Image arc of interval i under the inverse of its label: cut point indices
/// (a, b) of f(start), f(end), or nullopt with a diagnostic.
template <typename Real, typename Apply>
std::optional<std::pair<std::size_t, std::size_t>> image_arc(const BoundaryPartition& part,
                                                             std::size_t i, Apply&& apply,
                                                             double eps, std::string& why) {
  const auto& info = part.intervals[i];
  const auto fa = apply(part.cuts[info.start].point);
  const auto fb = apply(part.cuts[info.end].point);
  const auto a = part.find(fa, eps);
  const auto b = part.find(fb, eps);
  if (!a || !b) {
    why = "image endpoint " + describe(a ? fb : fa) + " of interval " + std::to_string(i + 1) + " is not a cut point";
    return std::nullopt;
  }
  if (*a == *b) {
    why = "image of interval " + std::to_string(i + 1) + " degenerates";
    return std::nullopt;
  }
  return std::make_pair(*a, *b);
}

}  // namespace detail

/// Builds P from labels: f(I) is the counterclockwise arc between the images
/// of the endpoints of I, and must be a union of whole intervals.
inline TransitionMatrix transition_matrix(const FundamentalDomain& d, const BoundaryPartition& part,
                                          const std::vector<Label>& labels) {
  const auto& gens = d.generators();
  const double eps = d.tolerances().point;
  const std::size_t m = part.size();
  std::vector<std::vector<std::size_t>> rows(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Mobius f = gens.matrices[gens.inverse[labels[i]]];
    std::string why;
    const auto arc = detail::image_arc<double>(
        part, i, [&](const BoundaryPoint& x) { return f.apply(x, d.tolerances().boundary); }, eps, why);
    if (!arc) fail(ErrorKind::markov_property, why);
    for (std::size_t j = 0; j < m; ++j)
      if (part.in_run(j, arc->first, arc->second)) rows[i].push_back(j);
  }
  return TransitionMatrix(std::move(rows));
}

/// Markov-property suite: endpoint images land on cut points, the image
/// arc is oriented as predicted (checked at interior sample points), every
/// J meeting f(I) is contained in it, and f maps every cut point to a cut
/// point under both adjacent branches.
inline MarkovCheckReport check_markov_property(const FundamentalDomain& d, const BoundaryPartition& part,
                                               const std::vector<Label>& labels, const TransitionMatrix& P) {
  MarkovCheckReport report;
  const auto& gens = d.generators();
  const double eps = d.tolerances().point;
  const std::size_t m = part.size();
  auto add = [&](std::size_t i, std::string msg) { report.violations.push_back({i, std::move(msg)}); };
  for (std::size_t i = 0; i < m; ++i) {
    const Mobius f = gens.matrices[gens.inverse[labels[i]]];
    const auto& info = part.intervals[i];
    // image of the interior of I, sampled
    const double a0 = part.cuts[info.start].point.angle;
    const double span = ccw_span(a0, part.cuts[info.end].point.angle);
    std::vector<bool> hit(m, false);
    constexpr int samples = 64;
    for (int s = 1; s < samples; ++s) {
      const BoundaryPoint x(a0 + span * s / samples);
      const BoundaryPoint y = f.apply(x, d.tolerances().boundary);
      // locate y
      std::size_t j = m - 1;
      for (std::size_t k = 0; k < m; ++k)
        if (arc_contains(part.cuts[k].point.angle, part.cuts[(k + 1) % m].point.angle, y.angle) ||
            angular_distance(part.cuts[k].point.angle, y.angle) <= eps) {
          j = k;
          break;
        }
      hit[j] = true;
    }
    for (std::size_t j = 0; j < m; ++j) {
      ++report.checked_pairs;
      if (hit[j] && !P(i, j))
        add(i, "f(" + std::to_string(i + 1) + ") meets interval " + std::to_string(j + 1) + " without containing it");
    }
    std::string why;
    auto arc = detail::image_arc<double>(
        part, i, [&](const BoundaryPoint& x) { return f.apply(x, d.tolerances().boundary); }, eps, why);
    if (!arc) add(i, why);
  }
  for (std::size_t k = 0; k < m; ++k) {
    // cut point k is the end of interval k-1 and the start of interval k
    for (std::size_t i : {(k + m - 1) % m, k}) {
      const Mobius f = gens.matrices[gens.inverse[labels[i]]];
      ++report.checked_points;
      const auto y = f.apply(part.cuts[k].point, d.tolerances().boundary);
      if (!part.find(y, eps))
        add(i, "f maps cut point " + describe(part.cuts[k].point) + " to " + describe(y) + " outside P");
    }
  }
  return report;
}

/// Recomputes cut points from their provenance and P from the labels in
/// long double arithmetic and compares with the double precision result.
inline bool recompute_extended(const FundamentalDomain& d, const BoundaryPartition& part,
                               const std::vector<Label>& labels, const TransitionMatrix& P,
                               std::string* why = nullptr) {
  using LD = long double;
  const auto& gens = d.generators();
  const auto ext = gens.extended();
  auto evaluate = [&](const Word& w) {
    BasicMobius<LD> g;
    for (Label x : w) g = g * ext[x];
    return g;
  };
  auto to_ld = [](const BoundaryPoint& x) {
    if (x.exact) return BasicBoundaryPoint<LD>(*x.exact);
    return BasicBoundaryPoint<LD>(static_cast<LD>(x.angle));
  };
  // side extensions recomputed from the vertices
  const auto verts = d.extended_vertices();
  std::vector<BasicGeodesic<LD>> sides;
  for (std::size_t k = 0; k < d.num_sides(); ++k) {
    auto g = geodesic_through(verts[d.start_vertex(k)], verts[d.end_vertex(k)]);
    if (d.side(k).extension.back.exact) g.back = to_ld(d.side(k).extension.back);
    if (d.side(k).extension.forward.exact) g.forward = to_ld(d.side(k).extension.forward);
    sides.push_back(g);
  }
  std::vector<BasicBoundaryPoint<LD>> cuts;
  for (const auto& c : part.cuts) {
    const auto& s = sides[c.side];
    cuts.push_back(evaluate(c.word).apply(c.forward ? s.forward : s.back, LD(1e-12)));
  }
  const LD tight = LD(1e-14);
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    if (angular_distance<LD>(cuts[k].angle, static_cast<LD>(part.cuts[k].point.angle)) > LD(1e-12)) {
      if (why) *why = "cut point " + std::to_string(k) + " moves under extended precision";
      return false;
    }
  }
  auto find = [&](const BasicBoundaryPoint<LD>& y) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < cuts.size(); ++k)
      if (same_point(cuts[k], y, tight)) return k;
    return std::nullopt;
  };
  const std::size_t m = part.size();
  for (std::size_t i = 0; i < m; ++i) {
    const auto f = ext[gens.inverse[labels[i]]];
    const auto a = find(f.apply(cuts[part.intervals[i].start], LD(1e-12)));
    const auto b = find(f.apply(cuts[part.intervals[i].end], LD(1e-12)));
    if (!a || !b) {
      if (why) *why = "extended image of interval " + std::to_string(i + 1) + " misses the cut points";
      return false;
    }
    std::vector<std::size_t> row;
    for (std::size_t j = 0; j < m; ++j)
      if (part.in_run(j, *a, *b)) row.push_back(j);
    if (row != P.row(i)) {
      if (why) *why = "row " + std::to_string(i + 1) + " differs under extended precision";
      return false;
    }
  }
  return true;
}

/// Text form of a cut point: the exact rational when known, else the angle
/// with full precision.
inline std::string cut_point_text(const BoundaryPoint& x) {
  if (x.exact) return x.exact->to_string();
  std::ostringstream out;
  out.precision(17);
  out << x.angle;
  return out.str();
}

/// Combinatorial vertex data from the geometric vertex walks.
inline std::vector<CodingVertex> coding_vertices(const FundamentalDomain& d, const EvenCornerReport& report) {
  std::vector<CodingVertex> out;
  for (std::size_t v = 0; v < d.num_sides(); ++v) {
    CodingVertex cv;
    cv.loop = report.cycles[v].word;
    cv.n = report.vertices[v].n;
    cv.start_side = d.next_side(v);
    out.push_back(cv);
  }
  return out;
}

/// Display numbering for domains with exact cut points: left to right on the
/// real line of the half-plane, starting with the interval ending at the
/// smallest finite cut point.  Equals the internal order when infinity is a
/// cut point.
inline std::vector<std::size_t> halfplane_display(const BoundaryPartition& part) {
  for (const auto& c : part.cuts)
    if (!c.point.exact) return {};
  std::vector<std::size_t> idx(part.size());
  for (std::size_t i = 0; i < part.size(); ++i) idx[i] = i + 1;
  return idx;
}

struct CodingOptions {
  LabelPolicy policy = LabelPolicy::paper_default;
  std::map<std::size_t, Label> choices;
  bool check_markov = true;
};

/// Everything produced from a domain.
struct GeometricCoding {
  EvenCornerReport corners;
  BoundaryPartition partition;
  MarkovCoding coding;
  MarkovCheckReport markov;
};

/// Assembles a MarkovCoding from explicit labels.  Labels are only checked
/// for the Markov property here; containment I in L(e) is the business of
/// assign_labels.
inline MarkovCoding build_markov_map(const FundamentalDomain& d, const EvenCornerReport& corners,
                                     const BoundaryPartition& part, const std::vector<Label>& labels) {
  if (labels.size() != part.size()) fail(ErrorKind::invalid_coding, "one label per interval required");
  MarkovCoding c;
  c.source = d.name();
  c.names = d.generators().names;
  c.inverse = d.generators().inverse;
  for (const auto& cut : part.cuts) c.cut_points.push_back(cut_point_text(cut.point));
  c.labels = labels;
  c.P = transition_matrix(d, part, labels);
  c.vertices = coding_vertices(d, corners);
  for (Label x = 0; x < c.names.size(); ++x) c.side_of_label.push_back(d.side_of_label(x));
  c.display = halfplane_display(part);
  c.validate();
  return c;
}

inline GeometricCoding build_coding(const FundamentalDomain& d, const CodingOptions& opts = {}) {
  GeometricCoding out;
  out.corners = verify_even_corners(d);
  if (!out.corners.ok) fail(ErrorKind::even_corners, out.corners.summary());
  out.partition = annotate_intervals(d, out.corners, endpoint_set(d, out.corners));
  const auto labels = assign_labels(d, out.partition, opts.policy, opts.choices);
  out.coding = build_markov_map(d, out.corners, out.partition, labels);
  if (opts.check_markov) {
    out.markov = check_markov_property(d, out.partition, labels, out.coding.P);
    if (!out.markov.ok()) fail(ErrorKind::markov_property, out.markov.violations.front().message);
  }
  return out;
}

}  // namespace bowen_series

#endif  // BOWEN_SERIES_CODING_HPP
