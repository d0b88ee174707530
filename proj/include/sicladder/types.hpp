#ifndef SICLADDER_TYPES_HPP
#define SICLADDER_TYPES_HPP

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sicladder {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Default tolerance for structural checks.
inline constexpr double kStructuralTol = 1e-10;

inline void require_odd_dimension(int d) {
  if (d < 3 || d % 2 == 0)
    throw std::invalid_argument("odd d required (d >= 3), got d = " + std::to_string(d));
}

/// Least non-negative residue of k mod n.
constexpr long mod(long k, long n) {
  const long r = k % n;
  return r < 0 ? r + n : r;
}

/// exp(2 pi i k / n), with k reduced first so the angle never drifts.
template <typename Real>
Complex<Real> root_of_unity(long n, long k) {
  const Real angle = Real(2) * std::numbers::pi_v<Real> * Real(mod(k, n)) / Real(n);
  return {std::cos(angle), std::sin(angle)};
}

/// Largest entry modulus of a matrix expression.
template <typename Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol = 1e-12) {
  if (u.rows() != u.cols()) return false;
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Mat residual = u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
  return static_cast<double>(max_abs(residual)) < tol;
}

/// Scalar c with a ~= c * b in the least-squares sense, and the residual
/// max |a - c b|. Used for "equal up to a global phase" checks.
template <typename Real>
std::pair<Complex<Real>, Real> proportionality(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  const Complex<Real> num = b.conjugate().cwiseProduct(a).sum();
  const Real den = b.squaredNorm();
  const Complex<Real> c = den > Real(0) ? num / den : Complex<Real>(0);
  return {c, max_abs(a - c * b)};
}

}  // namespace sicladder

#endif  // SICLADDER_TYPES_HPP
