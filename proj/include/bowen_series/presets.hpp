#ifndef BOWEN_SERIES_PRESETS_HPP
#define BOWEN_SERIES_PRESETS_HPP

// Built-in fundamental domains.

#include <string>
#include <vector>

#include "bowen_series/domain.hpp"

namespace bowen_series {

enum class SurfacePairing { commutator, opposite };

inline SurfacePairing parse_pairing(const std::string& s) {
  if (s == "commutator") return SurfacePairing::commutator;
  if (s == "opposite") return SurfacePairing::opposite;
  fail(ErrorKind::invalid_input, "unknown side pairing '" + s + "' (commutator|opposite)");
}

/// Side partner of side k in the regular 4g-gon.
inline std::size_t surface_partner(std::size_t k, std::size_t sides, SurfacePairing pairing) {
  if (pairing == SurfacePairing::opposite) return (k + sides / 2) % sides;
  return (k % 4 < 2) ? k + 2 : k - 2;
}

/// Generator names for the regular 4g-gon.  With the commutator pairing the
/// vertex relation reads [a1,b1][a2,b2]...[ag,bg].
inline std::vector<std::string> surface_names(int g, SurfacePairing pairing) {
  const std::size_t n = 4 * static_cast<std::size_t>(g);
  std::vector<std::string> names(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (pairing == SurfacePairing::opposite) {
      const std::size_t i = k % (n / 2);
      names[k] = "c" + std::to_string(i + 1) + (k < n / 2 ? "" : "^-1");
      continue;
    }
    const std::string idx = std::to_string(g - static_cast<int>(k / 4));
    switch (k % 4) {
      case 0: names[k] = "b" + idx; break;
      case 1: names[k] = "a" + idx + "^-1"; break;
      case 2: names[k] = "b" + idx + "^-1"; break;
      default: names[k] = "a" + idx; break;
    }
  }
  return names;
}

/// Euclidean radius of the vertices and of the side midpoints of the regular
/// 4g-gon with interior angle pi/(2g).
template <typename Real>
std::pair<Real, Real> surface_radii(int g) {
  const Real q = std::numbers::pi_v<Real> / Real(4 * g);  // pi/N and half the interior angle
  const Real cot = std::cos(q) / std::sin(q);
  const Real circum = std::acosh(cot * cot);
  const Real in = std::acosh(cot);
  return {std::tanh(circum / Real(2)), std::tanh(in / Real(2))};
}

/// Exterior-label matrices of the regular 4g-gon.  Vertex k sits at angle
/// (2k-1)pi/N and side k has its midpoint at angle 2k pi/N.  The label of
/// side k carries the partner side j onto side k: rotate j onto k, then
/// half-turn about the midpoint of k.
template <typename Real>
std::vector<BasicMobius<Real>> surface_generators(int g, SurfacePairing pairing) {
  const std::size_t n = 4 * static_cast<std::size_t>(g);
  const Real step = Real(2) * std::numbers::pi_v<Real> / Real(n);
  const Real mid = surface_radii<Real>(g).second;
  std::vector<BasicMobius<Real>> out;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = surface_partner(k, n, pairing);
    const auto m = std::polar(mid, step * Real(k));
    const Real turn = step * (Real(k) - Real(j));
    out.push_back(BasicMobius<Real>::half_turn(m) * BasicMobius<Real>::rotation(turn));
  }
  return out;
}

inline FundamentalDomain surface_4g(int g, SurfacePairing pairing = SurfacePairing::commutator,
                                    const Tolerances& tol = default_tolerances()) {
  if (g < 2) fail(ErrorKind::invalid_input, "surface presets need genus g >= 2");
  if (g > 64) fail(ErrorKind::invalid_input, "genus too large");
  const std::size_t n = 4 * static_cast<std::size_t>(g);
  const double step = kTwoPi / static_cast<double>(n);
  const double rv = surface_radii<double>(g).first;
  std::vector<DiskPoint> vertices;
  std::vector<std::size_t> partners;
  for (std::size_t k = 0; k < n; ++k) {
    vertices.push_back(DiskPoint::interior(std::polar(rv, step * (static_cast<double>(k) - 0.5))));
    partners.push_back(surface_partner(k, n, pairing));
  }
  GeneratorSet gens;
  gens.names = surface_names(g, pairing);
  gens.matrices = surface_generators<double>(g, pairing);
  gens.precise = surface_generators<long double>(g, pairing);
  gens.inverse = partners;
  const std::string name = "surface_4g(" + std::to_string(g) + "," +
                           (pairing == SurfacePairing::commutator ? "commutator" : "opposite") + ")";
  auto domain = FundamentalDomain::create(name, vertices, partners, gens, {}, tol);
  using LD = long double;
  const LD rv_ld = surface_radii<LD>(g).first;
  const LD step_ld = LD(2) * std::numbers::pi_v<LD> / LD(n);
  std::vector<BasicDiskPoint<LD>> precise;
  for (std::size_t k = 0; k < n; ++k)
    precise.push_back(BasicDiskPoint<LD>::interior(std::polar(rv_ld, step_ld * (LD(k) - LD(0.5)))));
  domain.set_extended_vertices(std::move(precise));
  return domain;
}

namespace detail {

inline DiskPoint halfplane_vertex(double x, double y) {
  return DiskPoint::interior(halfplane_to_disk<double>({x, y}));
}

inline DiskPoint exact_ideal(long long p, long long q) {
  return DiskPoint::at_infinity(BoundaryPoint(ProjectiveRational(p, q)));
}

inline Geodesic exact_geodesic(ProjectiveRational back, ProjectiveRational forward) {
  return {BoundaryPoint(back), BoundaryPoint(forward)};
}

inline Mobius exact(long long a, long long b, long long c, long long d) {
  return Mobius::from_exact(ExactMatrix(a, b, c, d));
}

}  // namespace detail

/// The modular group with domain |z| > 1, |Re z| < 1/2.
inline FundamentalDomain sl2z(const Tolerances& tol = default_tolerances()) {
  using detail::exact;
  const double h = std::sqrt(3.0) / 2.0;
  std::vector<DiskPoint> vertices = {detail::halfplane_vertex(-0.5, h),
                                     detail::halfplane_vertex(0.5, h),
                                     DiskPoint::at_infinity(BoundaryPoint(ProjectiveRational::infinity()))};
  GeneratorSet gens;
  gens.names = {"S", "T", "T^-1"};
  gens.inverse = {0, 2, 1};
  gens.matrices = {exact(0, -1, 1, 0), exact(1, 1, 0, 1), exact(1, -1, 0, 1)};
  const auto inf = ProjectiveRational::infinity();
  std::vector<std::optional<Geodesic>> ext = {
      detail::exact_geodesic(ProjectiveRational(-1), ProjectiveRational(1)),
      detail::exact_geodesic(ProjectiveRational(1, 2), inf),
      detail::exact_geodesic(inf, ProjectiveRational(-1, 2))};
  return FundamentalDomain::create("sl2z", vertices, {0, 2, 1}, gens, ext, tol);
}

/// Ideal triangle 0, 1, infinity with three order-two side pairings.
inline FundamentalDomain ideal_triangle(const Tolerances& tol = default_tolerances()) {
  using detail::exact;
  std::vector<DiskPoint> vertices = {detail::exact_ideal(0, 1), detail::exact_ideal(1, 1),
                                     DiskPoint::at_infinity(BoundaryPoint(ProjectiveRational::infinity()))};
  GeneratorSet gens;
  gens.names = {"b", "c", "a"};
  gens.inverse = {0, 1, 2};
  gens.matrices = {exact(1, -1, 2, -1), exact(1, -2, 1, -1), exact(0, -1, 1, 0)};
  return FundamentalDomain::create("ideal_triangle", vertices, {0, 1, 2}, gens, {}, tol);
}

/// Looks up a preset by name: sl2z, ideal_triangle, surface_4g.
inline FundamentalDomain preset_domain(const std::string& name, int genus = 2,
                                       SurfacePairing pairing = SurfacePairing::commutator,
                                       const Tolerances& tol = default_tolerances()) {
  if (name == "sl2z") return sl2z(tol);
  if (name == "ideal_triangle") return ideal_triangle(tol);
  if (name == "surface_4g") return surface_4g(genus, pairing, tol);
  fail(ErrorKind::invalid_input, "unknown preset '" + name + "'");
}

inline bool is_preset_name(const std::string& name) {
  return name == "sl2z" || name == "ideal_triangle" || name == "surface_4g";
}

}  // namespace bowen_series

#endif  // BOWEN_SERIES_PRESETS_HPP
