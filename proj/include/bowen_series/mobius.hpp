#ifndef BOWEN_SERIES_MOBIUS_HPP
#define BOWEN_SERIES_MOBIUS_HPP

// Hyperbolic disk primitives: exact points of the real projective line,
// integral Mobius matrices, and floating-point Mobius maps of the unit disk.
//
// The working model is the unit disk.  Presets that are naturally stated in
// the upper half-plane carry an exact integral matrix alongside the disk
// matrix; the two are related by the Cayley transform z -> (z - i)/(z + i),
// which sends infinity to the boundary point of angle 0 and preserves the
// counterclockwise order of the boundary.

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <regex>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "bowen_series/common.hpp"

namespace bowen_series {

/// A point p/q of the real projective line (half-plane boundary), exact.
/// Normalized so that gcd(p, q) = 1 and q > 0, with infinity stored as 1/0.
class ProjectiveRational {
 public:
  ProjectiveRational() : p_(0), q_(1) {}
  ProjectiveRational(BigInt p, BigInt q) : p_(std::move(p)), q_(std::move(q)) {
    normalize();
  }
  explicit ProjectiveRational(long long value) : p_(value), q_(1) {}

  static ProjectiveRational infinity() { return ProjectiveRational(1, 0); }

  /// Parses "inf", "p" or "p/q".
  static ProjectiveRational parse(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "oo") return infinity();
    static const std::regex form(R"([+-]?[0-9]+(/[+-]?[0-9]+)?)");
    if (!std::regex_match(text, form)) fail(ErrorKind::invalid_input, "cannot parse rational '" + text + "'");
    const auto slash = text.find('/');
    if (slash == std::string::npos) return ProjectiveRational(BigInt(text), BigInt(1));
    return ProjectiveRational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
  }

  const BigInt& numerator() const { return p_; }
  const BigInt& denominator() const { return q_; }
  bool is_infinity() const { return q_ == 0; }

  /// Boundary angle of the Cayley image.
  template <typename Real = double>
  Real angle() const {
    const Real p = p_.convert_to<Real>();
    const Real q = q_.convert_to<Real>();
    return normalize_angle(Real(2) * std::atan2(-q, p));
  }

  template <typename Real = double>
  Real value() const {
    return p_.convert_to<Real>() / q_.convert_to<Real>();
  }

  std::string to_string() const {
    if (is_infinity()) return "inf";
    if (q_ == 1) return p_.str();
    return p_.str() + "/" + q_.str();
  }

  friend bool operator==(const ProjectiveRational& a, const ProjectiveRational& b) {
    return a.p_ == b.p_ && a.q_ == b.q_;
  }

  /// Order along the boundary starting at infinity (angle 0).
  friend bool cyclic_less(const ProjectiveRational& a, const ProjectiveRational& b) {
    if (a.is_infinity()) return !b.is_infinity();
    if (b.is_infinity()) return false;
    return a.p_ * b.q_ < b.p_ * a.q_;
  }

 private:
  void normalize() {
    if (p_ == 0 && q_ == 0) fail(ErrorKind::numeric, "0/0 is not a projective point");
    if (q_ == 0) {
      p_ = 1;
      return;
    }
    const BigInt g = boost::multiprecision::gcd(p_, q_);
    p_ /= g;
    q_ /= g;
    if (q_ < 0) {
      p_ = -p_;
      q_ = -q_;
    }
  }

  BigInt p_;
  BigInt q_;
};

/// Integral 2x2 matrix acting on the upper half-plane, up to scalar multiples.
/// Stored primitive (entries coprime) with the first nonzero entry positive.
class ExactMatrix {
 public:
  ExactMatrix() : e_{1, 0, 0, 1} {}
  ExactMatrix(BigInt a, BigInt b, BigInt c, BigInt d)
      : e_{std::move(a), std::move(b), std::move(c), std::move(d)} {
    normalize();
  }

  static ExactMatrix identity() { return {}; }

  const BigInt& a() const { return e_[0]; }
  const BigInt& b() const { return e_[1]; }
  const BigInt& c() const { return e_[2]; }
  const BigInt& d() const { return e_[3]; }
  const std::array<BigInt, 4>& entries() const { return e_; }

  BigInt determinant() const { return e_[0] * e_[3] - e_[1] * e_[2]; }

  ExactMatrix operator*(const ExactMatrix& o) const {
    return {e_[0] * o.e_[0] + e_[1] * o.e_[2], e_[0] * o.e_[1] + e_[1] * o.e_[3],
            e_[2] * o.e_[0] + e_[3] * o.e_[2], e_[2] * o.e_[1] + e_[3] * o.e_[3]};
  }

  ExactMatrix inverse() const { return {e_[3], -e_[1], -e_[2], e_[0]}; }

  bool is_identity() const { return e_[1] == 0 && e_[2] == 0 && e_[0] == e_[3]; }

  ProjectiveRational apply(const ProjectiveRational& x) const {
    const BigInt& p = x.numerator();
    const BigInt& q = x.denominator();
    return {e_[0] * p + e_[1] * q, e_[2] * p + e_[3] * q};
  }

  friend bool operator==(const ExactMatrix& x, const ExactMatrix& y) { return x.e_ == y.e_; }

  std::string to_string() const {
    std::ostringstream out;
    out << "[[" << e_[0] << "," << e_[1] << "],[" << e_[2] << "," << e_[3] << "]]";
    return out.str();
  }

 private:
  void normalize() {
    BigInt g = 0;
    for (const auto& x : e_) g = boost::multiprecision::gcd(g, x);
    if (g == 0) fail(ErrorKind::numeric, "zero matrix");
    for (auto& x : e_) x /= g;
    for (const auto& x : e_) {
      if (x == 0) continue;
      if (x < 0)
        for (auto& y : e_) y = -y;
      break;
    }
    if (determinant() <= 0) fail(ErrorKind::numeric, "exact matrix must have positive determinant");
  }

  std::array<BigInt, 4> e_;
};

/// A point of the unit circle given by its angle, optionally tagged with an
/// exact half-plane coordinate.
template <typename Real>
struct BasicBoundaryPoint {
  Real angle = 0;
  std::optional<ProjectiveRational> exact;

  BasicBoundaryPoint() = default;
  explicit BasicBoundaryPoint(Real theta) : angle(normalize_angle(theta)) {}
  explicit BasicBoundaryPoint(const ProjectiveRational& x)
      : angle(x.template angle<Real>()), exact(x) {}

  std::complex<Real> on_circle() const { return std::polar(Real(1), angle); }
  bool is_exact() const { return exact.has_value(); }
};

using BoundaryPoint = BasicBoundaryPoint<double>;

/// Equality of boundary points: exact when both are exact, angular otherwise.
template <typename Real>
bool same_point(const BasicBoundaryPoint<Real>& x, const BasicBoundaryPoint<Real>& y, Real eps) {
  if (x.exact && y.exact) return *x.exact == *y.exact;
  return angular_distance(x.angle, y.angle) <= eps;
}

/// Counterclockwise boundary order starting from angle 0.
template <typename Real>
bool boundary_less(const BasicBoundaryPoint<Real>& x, const BasicBoundaryPoint<Real>& y) {
  if (x.exact && y.exact) return cyclic_less(*x.exact, *y.exact);
  return x.angle < y.angle;
}

template <typename Real>
std::string describe(const BasicBoundaryPoint<Real>& x) {
  std::ostringstream out;
  out.precision(17);
  out << "angle " << x.angle;
  if (x.exact) out << " (" << x.exact->to_string() << ")";
  return out.str();
}

/// Cayley transform from the upper half-plane to the disk and back.
template <typename Real>
std::complex<Real> halfplane_to_disk(std::complex<Real> z) {
  const std::complex<Real> i(0, 1);
  return (z - i) / (z + i);
}

template <typename Real>
std::optional<std::complex<Real>> disk_to_halfplane(std::complex<Real> w, Real eps = Real(1e-14)) {
  const std::complex<Real> i(0, 1);
  if (std::abs(Real(1) - w) <= eps) return std::nullopt;  // infinity
  return i * (Real(1) + w) / (Real(1) - w);
}

/// Orientation-preserving Mobius map of the disk, z -> (az + b)/(cz + d),
/// normalized to determinant 1.  Carries an exact half-plane matrix when the
/// map is integral.
template <typename Real>
class BasicMobius {
 public:
  using Complex = std::complex<Real>;

  BasicMobius() : m_{Complex(1), Complex(0), Complex(0), Complex(1)}, exact_(ExactMatrix()) {}

  static BasicMobius identity() { return {}; }

  static BasicMobius from_disk(Complex a, Complex b, Complex c, Complex d) {
    BasicMobius out;
    out.m_ = {a, b, c, d};
    out.exact_.reset();
    out.normalize();
    return out;
  }

  /// Conjugates an integral half-plane matrix into the disk model.
  static BasicMobius from_exact(const ExactMatrix& h) {
    const Complex i(0, 1);
    const Complex a = h.a().template convert_to<Real>();
    const Complex b = h.b().template convert_to<Real>();
    const Complex c = h.c().template convert_to<Real>();
    const Complex d = h.d().template convert_to<Real>();
    // C = [[1, -i], [1, i]],  C^{-1} ~ [[i, i], [-1, 1]]
    const Complex ca = a - i * c, cb = b - i * d;
    const Complex cc = a + i * c, cd = b + i * d;
    BasicMobius out;
    out.m_ = {ca * i - cb, ca * i + cb, cc * i - cd, cc * i + cd};
    out.exact_ = h;
    out.normalize();
    return out;
  }

  /// Rotation z -> e^{i theta} z.
  static BasicMobius rotation(Real theta) {
    const Complex h = std::polar(Real(1), theta / Real(2));
    return from_disk(h, Complex(0), Complex(0), std::conj(h));
  }

  /// Disk automorphism sending p to 0: z -> (z - p)/(1 - conj(p) z).
  static BasicMobius move_to_origin(Complex p) {
    return from_disk(Complex(1), -p, -std::conj(p), Complex(1));
  }

  /// Half-turn (order two rotation) about an interior point.
  static BasicMobius half_turn(Complex p) {
    const BasicMobius to = move_to_origin(p);
    return to.inverse() * rotation(std::numbers::pi_v<Real>) * to;
  }

  const std::array<Complex, 4>& entries() const { return m_; }
  const std::optional<ExactMatrix>& exact() const { return exact_; }
  bool is_exact() const { return exact_.has_value(); }

  /// Composition: (this * o)(z) = this(o(z)).
  BasicMobius operator*(const BasicMobius& o) const {
    BasicMobius out;
    out.m_ = {m_[0] * o.m_[0] + m_[1] * o.m_[2], m_[0] * o.m_[1] + m_[1] * o.m_[3],
              m_[2] * o.m_[0] + m_[3] * o.m_[2], m_[2] * o.m_[1] + m_[3] * o.m_[3]};
    if (exact_ && o.exact_)
      out.exact_ = *exact_ * *o.exact_;
    else
      out.exact_.reset();
    out.normalize();
    return out;
  }

  BasicMobius inverse() const {
    BasicMobius out;
    out.m_ = {m_[3], -m_[1], -m_[2], m_[0]};
    if (exact_)
      out.exact_ = exact_->inverse();
    else
      out.exact_.reset();
    return out;
  }

  Complex apply(Complex z) const { return (m_[0] * z + m_[1]) / (m_[2] * z + m_[3]); }

  BasicBoundaryPoint<Real> apply(const BasicBoundaryPoint<Real>& x, Real eps_boundary = Real(1e-9)) const {
    if (exact_ && x.exact) return BasicBoundaryPoint<Real>(exact_->apply(*x.exact));
    const Complex w = apply(x.on_circle());
    if (std::abs(std::abs(w) - Real(1)) > eps_boundary)
      fail(ErrorKind::numeric, "Mobius image of a boundary point left the circle");
    return BasicBoundaryPoint<Real>(std::arg(w));
  }

  /// Applies the map to a point of the upper half-plane; nullopt is infinity.
  std::optional<Complex> apply_halfplane(Complex z) const {
    return disk_to_halfplane<Real>(apply(halfplane_to_disk<Real>(z)));
  }

  Real determinant_error() const {
    return std::abs(m_[0] * m_[3] - m_[1] * m_[2] - Complex(1));
  }

  /// Representative of the projective class with the first significant entry
  /// having positive real part (imaginary part when the real part vanishes).
  BasicMobius canonical(Real eps = Real(1e-12)) const {
    BasicMobius out = *this;
    for (const auto& x : m_) {
      if (std::abs(x) <= eps) continue;
      const bool flip = std::abs(x.real()) > eps ? x.real() < 0 : x.imag() < 0;
      if (flip)
        for (auto& y : out.m_) y = -y;
      break;
    }
    return out;
  }

  /// Distance between projective classes (max entry difference up to sign).
  Real distance(const BasicMobius& o) const {
    Real plus = 0, minus = 0;
    for (int k = 0; k < 4; ++k) {
      plus = std::max(plus, std::abs(m_[k] - o.m_[k]));
      minus = std::max(minus, std::abs(m_[k] + o.m_[k]));
    }
    return std::min(plus, minus);
  }

  bool is_identity(Real eps) const {
    if (exact_) return exact_->is_identity();
    return distance(BasicMobius()) <= eps;
  }

  Real trace_abs() const { return std::abs(m_[0] + m_[3]); }

  template <typename Other>
  BasicMobius<Other> cast() const {
    using C = std::complex<Other>;
    auto conv = [](const Complex& z) { return C(Other(z.real()), Other(z.imag())); };
    if (exact_) return BasicMobius<Other>::from_exact(*exact_);
    return BasicMobius<Other>::from_disk(conv(m_[0]), conv(m_[1]), conv(m_[2]), conv(m_[3]));
  }

 private:
  void normalize() {
    const Complex det = m_[0] * m_[3] - m_[1] * m_[2];
    if (std::abs(det) == Real(0)) fail(ErrorKind::numeric, "singular Mobius matrix");
    const Complex s = std::sqrt(det);
    for (auto& x : m_) x /= s;
  }

  std::array<Complex, 4> m_;
  std::optional<ExactMatrix> exact_;
};

using Mobius = BasicMobius<double>;

/// A point of the closed disk: interior (complex) or on the boundary.
template <typename Real>
struct BasicDiskPoint {
  bool ideal = false;
  std::complex<Real> z;              ///< interior coordinate, or e^{i angle} when ideal
  BasicBoundaryPoint<Real> boundary;  ///< meaningful when ideal

  static BasicDiskPoint interior(std::complex<Real> w) {
    BasicDiskPoint p;
    p.z = w;
    return p;
  }
  static BasicDiskPoint at_infinity(const BasicBoundaryPoint<Real>& b) {
    BasicDiskPoint p;
    p.ideal = true;
    p.boundary = b;
    p.z = b.on_circle();
    return p;
  }
};

using DiskPoint = BasicDiskPoint<double>;

/// Unordered pair of distinct boundary points.
template <typename Real>
struct BasicGeodesic {
  BasicBoundaryPoint<Real> back;
  BasicBoundaryPoint<Real> forward;
};

using Geodesic = BasicGeodesic<double>;

template <typename Real>
bool same_geodesic(const BasicGeodesic<Real>& g, const BasicGeodesic<Real>& h, Real eps) {
  return (same_point(g.back, h.back, eps) && same_point(g.forward, h.forward, eps)) ||
         (same_point(g.back, h.forward, eps) && same_point(g.forward, h.back, eps));
}

/// Complete geodesic through p then q, oriented from p towards q: `back` is
/// the endpoint beyond p and `forward` the endpoint beyond q.
template <typename Real>
BasicGeodesic<Real> geodesic_through(const BasicDiskPoint<Real>& p, const BasicDiskPoint<Real>& q) {
  using Complex = std::complex<Real>;
  if (p.ideal && q.ideal) return {p.boundary, q.boundary};
  if (!p.ideal) {
    const auto to = BasicMobius<Real>::move_to_origin(p.z);
    const Complex w = to.apply(q.z);
    if (std::abs(w) == Real(0)) fail(ErrorKind::numeric, "geodesic through coincident points");
    const Complex dir = w / std::abs(w);
    const auto from = to.inverse();
    BasicGeodesic<Real> out;
    out.forward = BasicBoundaryPoint<Real>(std::arg(from.apply(dir)));
    out.back = BasicBoundaryPoint<Real>(std::arg(from.apply(-dir)));
    if (q.ideal) out.forward = q.boundary;
    return out;
  }
  // p ideal, q interior
  const auto to = BasicMobius<Real>::move_to_origin(q.z);
  const Complex w = to.apply(p.z);
  const auto from = to.inverse();
  return {p.boundary, BasicBoundaryPoint<Real>(std::arg(from.apply(-w / std::abs(w))))};
}

/// Signed position of an interior point relative to the directed geodesic
/// back -> forward: positive on the left, negative on the right, ~0 on it.
template <typename Real>
Real side_of(const BasicGeodesic<Real>& g, std::complex<Real> z) {
  const auto to = BasicMobius<Real>::move_to_origin(z);
  const Real b = std::arg(to.apply(g.back.on_circle()));
  const Real f = std::arg(to.apply(g.forward.on_circle()));
  // The origin lies on the side of the longer complementary arc.  The left
  // side of back -> forward is bounded by the ccw arc forward -> back.
  return ccw_span(f, b) - std::numbers::pi_v<Real>;
}

/// Counterclockwise angle at interior vertex v from the ray towards `from` to
/// the ray towards `to`.
template <typename Real>
Real angle_at(std::complex<Real> v, std::complex<Real> from, std::complex<Real> to) {
  const auto m = BasicMobius<Real>::move_to_origin(v);
  return ccw_span(std::arg(m.apply(from)), std::arg(m.apply(to)));
}

/// True when the open counterclockwise arc (from, to) contains theta.
template <typename Real>
bool arc_contains(Real from, Real to, Real theta) {
  const Real span = ccw_span(from, to);
  const Real t = ccw_span(from, theta);
  return t > Real(0) && t < span;
}

}  // namespace bowen_series

#endif  // BOWEN_SERIES_MOBIUS_HPP
