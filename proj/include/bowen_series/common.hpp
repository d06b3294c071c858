#ifndef BOWEN_SERIES_COMMON_HPP
#define BOWEN_SERIES_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bowen_series {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Index of a generator label in a GeneratorSet.
using Label = std::size_t;
/// A word in the generators, read left to right.
using Word = std::vector<Label>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Numerical tolerances used throughout the library.
struct Tolerances {
  double det = 1e-9;       ///< determinant normalization
  double mat = 1e-9;       ///< matrix identity comparisons
  double boundary = 1e-9;  ///< |image| == 1 for boundary points
  double geo = 1e-9;       ///< geometric coincidences (rays, angles)
  double point = 1e-12;    ///< angular matching of cut points
  double key = 1e-7;       ///< quantization of oracle group-element keys
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

/// Failure categories; the command line tool maps each to its own exit code.
enum class ErrorKind {
  invalid_input,
  invalid_domain,
  even_corners,
  markov_property,
  invalid_coding,
  budget_exceeded,
  invalid_action,
  numeric,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::invalid_domain: return "invalid domain";
    case ErrorKind::even_corners: return "even corners";
    case ErrorKind::markov_property: return "markov property";
    case ErrorKind::invalid_coding: return "invalid coding";
    case ErrorKind::budget_exceeded: return "budget exceeded";
    case ErrorKind::invalid_action: return "invalid action";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

/// Reduces an angle to [0, 2pi).
template <typename Real>
Real normalize_angle(Real theta) {
  const Real two_pi = Real(2) * std::numbers::pi_v<Real>;
  theta = std::fmod(theta, two_pi);
  if (theta < Real(0)) theta += two_pi;
  if (theta >= two_pi) theta -= two_pi;
  return theta;
}

/// Smallest distance between two angles on the circle.
template <typename Real>
Real angular_distance(Real a, Real b) {
  const Real two_pi = Real(2) * std::numbers::pi_v<Real>;
  Real d = normalize_angle(a - b);
  return d > two_pi - d ? two_pi - d : d;
}

/// Length of the counterclockwise arc from `from` to `to`, in [0, 2pi).
template <typename Real>
Real ccw_span(Real from, Real to) {
  return normalize_angle(to - from);
}

}  // namespace bowen_series

#endif  // BOWEN_SERIES_COMMON_HPP
