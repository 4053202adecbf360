#ifndef QWSPEC_TYPES_HPP
#define QWSPEC_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qwspec {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Vec2 = Eigen::Matrix<Complex<Real>, 2, 1>;

template <typename Real>
using Mat2 = Eigen::Matrix<Complex<Real>, 2, 2>;

template <typename Real>
using VectorXc = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using MatrixXc = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Half-line of the two-phase coin: `minus` is x < 0, `plus` is x >= 0.
enum class Side { minus, plus };

inline const char* to_string(Side side) { return side == Side::minus ? "m" : "p"; }

/// Thrown when an operation's precondition is violated (bad lambda, short window, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by the dense eigensolver when it fails its own contract.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sign function onto {-1, 0, +1}.
template <typename Real>
constexpr int sgn(Real v) {
  return (Real(0) < v) - (v < Real(0));
}

/// Sign with a dead zone: |v| <= tol maps to 0.
template <typename Real>
constexpr int sgn(Real v, Real tol) {
  return v > tol ? 1 : (v < -tol ? -1 : 0);
}

}  // namespace qwspec

#endif  // QWSPEC_TYPES_HPP
