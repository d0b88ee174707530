#ifndef SICLADDER_SIC_HPP
#define SICLADDER_SIC_HPP

// Fiducial vectors, their Weyl-Heisenberg overlap tables, SIC verification
// and the frame potential sum_p |<psi|D_p|psi>|^4 with its gradient.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sicladder/wh.hpp"

namespace sicladder::sic {

struct FiducialMetadata {
  std::optional<std::uint64_t> seed;
  double potential = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> symmetry_tags;
  long iterations = 0;
  int restart = -1;
  std::string subspace;  // "full" or "zauner:<eigenvalue index>"
};

template <typename Real = double>
struct Fiducial {
  int d = 0;
  CVector<Real> vector;
  FiducialMetadata metadata;

  /// Wraps `v`, which must already be a unit vector to 1e-12.
  static Fiducial from_unit(CVector<Real> v, FiducialMetadata meta = {}) {
    const int d = int(v.size());
    if (d < 1) throw std::invalid_argument("Fiducial: empty vector");
    if (std::abs(double(v.norm()) - 1.0) > 1e-12)
      throw std::invalid_argument("Fiducial: vector is not normalized");
    return {d, std::move(v), std::move(meta)};
  }

  /// Normalizes `v` first.
  static Fiducial normalized(CVector<Real> v, FiducialMetadata meta = {}) {
    const Real n = v.norm();
    if (!(n > Real(0))) throw std::invalid_argument("Fiducial: zero vector");
    v /= n;
    return {int(v.size()), std::move(v), std::move(meta)};
  }
};

namespace detail {

template <typename Real>
std::vector<Complex<Real>> root_table(int d) {
  std::vector<Complex<Real>> w(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) w[std::size_t(k)] = root_of_unity<Real>(d, k);
  return w;
}

template <typename Real>
void require_normalized(const CVector<Real>& v, const char* who) {
  if (std::abs(double(v.norm()) - 1.0) > 1e-12)
    throw std::invalid_argument(std::string(who) + ": fiducial is not normalized");
}

}  // namespace detail

/// c_p = <psi|D_p|psi> for all p in linear order; psi need not be normalized.
template <typename Real, typename Derived>
CVector<Real> raw_overlaps(const Eigen::MatrixBase<Derived>& psi) {
  const int d = int(psi.size());
  require_odd_dimension(d);
  const auto w = detail::root_table<Real>(d);
  const long h = wh::half_inverse(d);
  CVector<Real> c(long(d) * d);
  std::vector<Complex<Real>> a(static_cast<std::size_t>(d));
  for (long i = 0; i < d; ++i) {
    for (long k = 0; k < d; ++k) a[std::size_t(k)] = std::conj(psi(mod(k + i, d))) * psi(k);
    for (long j = 0; j < d; ++j) {
      Complex<Real> s(0);
      for (long k = 0; k < d; ++k) s += a[std::size_t(k)] * w[std::size_t(mod(j * k, d))];
      c(i * d + j) = w[std::size_t(mod(h * i * j, d))] * s;
    }
  }
  return c;
}

/// sum_p w_p D_p psi.
template <typename Real, typename DerivedW, typename DerivedPsi>
CVector<Real> displacement_combination(const Eigen::MatrixBase<DerivedW>& weights,
                                       const Eigen::MatrixBase<DerivedPsi>& psi) {
  const int d = int(psi.size());
  const auto w = detail::root_table<Real>(d);
  const long h = wh::half_inverse(d);
  CVector<Real> out = CVector<Real>::Zero(d);
  for (long i = 0; i < d; ++i)
    for (long k = 0; k < d; ++k) {
      Complex<Real> s(0);
      const long shift = mod(h * i + k, d);
      for (long j = 0; j < d; ++j) s += weights(i * d + j) * w[std::size_t(mod(j * shift, d))];
      out(mod(k + i, d)) += s * psi(k);
    }
  return out;
}

template <typename Real = double>
struct OverlapTable {
  int d = 0;
  CVector<Real> overlaps;  // indexed by DisplacementIndex::linear()
  RVector<Real> phases;    // arg of overlaps; NaN at p = 0 and where |overlap| <= 1e-14

  Complex<Real> at(const wh::DisplacementIndex& p) const { return overlaps(p.linear()); }
};

template <typename Real>
OverlapTable<Real> overlaps(const Fiducial<Real>& psi) {
  detail::require_normalized(psi.vector, "overlaps");
  OverlapTable<Real> t{psi.d, raw_overlaps<Real>(psi.vector), {}};
  t.phases.resize(t.overlaps.size());
  for (Eigen::Index k = 0; k < t.overlaps.size(); ++k)
    t.phases(k) = (k == 0 || std::abs(t.overlaps(k)) <= Real(1e-14))
                      ? std::numeric_limits<Real>::quiet_NaN()
                      : std::arg(t.overlaps(k));
  return t;
}

/// sum_p |<psi|D_p|psi>|^4 for a unit vector; at least 2d/(d+1), with
/// equality exactly at SIC fiducials.
template <typename Real>
Real frame_potential(const Fiducial<Real>& psi) {
  detail::require_normalized(psi.vector, "frame_potential");
  return raw_overlaps<Real>(psi.vector).cwiseAbs2().cwiseAbs2().sum();
}

inline double welch_bound(int d) { return 2.0 * d / (d + 1.0); }

/// f(x) = sum_p |<psi|D_p|psi>|^4 / |psi|^8 on the real coordinates
/// x = [Re psi; Im psi], psi = B z for an isometry B (identity for the full
/// space). Scale invariant, so unnormalized iterates are fine.
template <typename Real = double>
class FramePotentialObjective {
 public:
  explicit FramePotentialObjective(int d) : d_(d), basis_(CMatrix<Real>::Identity(d, d)) {
    require_odd_dimension(d);
  }
  FramePotentialObjective(int d, CMatrix<Real> basis) : d_(d), basis_(std::move(basis)) {
    require_odd_dimension(d);
    if (basis_.rows() != d) throw std::invalid_argument("FramePotentialObjective: basis has wrong row count");
  }

  int dimension() const { return d_; }
  Eigen::Index parameters() const { return 2 * basis_.cols(); }
  const CMatrix<Real>& basis() const { return basis_; }

  CVector<Real> to_complex(const RVector<Real>& x) const {
    const Eigen::Index k = basis_.cols();
    CVector<Real> z(k);
    for (Eigen::Index a = 0; a < k; ++a) z(a) = Complex<Real>(x(a), x(a + k));
    return z;
  }

  RVector<Real> to_real(const CVector<Real>& z) const {
    const Eigen::Index k = z.size();
    RVector<Real> x(2 * k);
    x.head(k) = z.real();
    x.tail(k) = z.imag();
    return x;
  }

  CVector<Real> embed(const RVector<Real>& x) const { return basis_ * to_complex(x); }

  Real value(const RVector<Real>& x) const {
    const CVector<Real> psi = embed(x);
    const Real n = psi.squaredNorm();
    return raw_overlaps<Real>(psi).cwiseAbs2().cwiseAbs2().sum() / (n * n * n * n);
  }

  /// Value and gradient with respect to x.
  Real value_and_gradient(const RVector<Real>& x, RVector<Real>& grad) const {
    const CVector<Real> psi = embed(x);
    const Real n = psi.squaredNorm();
    const CVector<Real> c = raw_overlaps<Real>(psi);
    const RVector<Real> mod2 = c.cwiseAbs2();
    const Real s = mod2.cwiseAbs2().sum();
    const CVector<Real> weights = mod2.template cast<Complex<Real>>().cwiseProduct(c.conjugate());
    // df/d(conj psi) = 4 sum_p |c_p|^2 conj(c_p) D_p psi / n^4 - 4 s psi / n^5
    const Real n4 = n * n * n * n;
    const CVector<Real> g_psi =
        (Real(4) / n4) * displacement_combination<Real>(weights, psi) - (Real(4) * s / (n4 * n)) * psi;
    grad = Real(2) * to_real(basis_.adjoint() * g_psi);
    return s / n4;
  }

  /// Residuals |c_p|^2 / |psi|^4 - 1/(d+1) for p != 0 and their Jacobian in x.
  void residuals(const RVector<Real>& x, RVector<Real>& r, Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>& jac) const {
    const CVector<Real> psi = embed(x);
    const Real n = psi.squaredNorm();
    const CVector<Real> c = raw_overlaps<Real>(psi);
    const long m = long(d_) * d_ - 1;
    r.resize(m);
    jac.resize(m, parameters());
    const Real target = Real(1) / Real(d_ + 1);
    for (long k = 1; k <= m; ++k) {
      const auto p = wh::DisplacementIndex::from_linear(k, d_);
      const Real mod2 = std::norm(c(k));
      r(k - 1) = mod2 / (n * n) - target;
      // d|c_p|^2/d(conj psi) = conj(c_p) D_p psi + c_p D_{-p} psi
      const CVector<Real> g = (std::conj(c(k)) * wh::displace<Real>(p, psi) + c(k) * wh::displace<Real>(-p, psi)) / (n * n) -
                              (Real(2) * mod2 / (n * n * n)) * psi;
      jac.row(k - 1) = (Real(2) * to_real(basis_.adjoint() * g)).transpose();
    }
  }

 private:
  int d_;
  CMatrix<Real> basis_;
};

struct SicReport {
  int d = 0;
  bool is_sic = false;
  double max_modulus_deviation = 0;  // max_{p != 0} | |c_p|^2 - 1/(d+1) |
  double frame_potential = 0;
  double tight_frame_residual = 0;   // |sum_p D_p psi psi^dag D_p^dag - d 1|_max
  double tol = 0;
};

template <typename Real>
SicReport verify_sic(const Fiducial<Real>& psi, double tol = kStructuralTol) {
  const auto table = overlaps(psi);
  const int d = psi.d;
  SicReport r;
  r.d = d;
  r.tol = tol;
  const double target = 1.0 / (d + 1.0);
  for (Eigen::Index k = 1; k < table.overlaps.size(); ++k)
    r.max_modulus_deviation =
        std::max(r.max_modulus_deviation, std::abs(double(std::norm(table.overlaps(k))) - target));
  r.frame_potential = double(table.overlaps.cwiseAbs2().cwiseAbs2().sum());

  CMatrix<Real> frame = CMatrix<Real>::Zero(d, d);
  for (const auto& p : wh::all_indices(d)) {
    const CVector<Real> v = wh::displace<Real>(p, psi.vector);
    frame.noalias() += v * v.adjoint();
  }
  r.tight_frame_residual = double(max_abs(frame - Real(d) * CMatrix<Real>::Identity(d, d)));
  r.is_sic = r.max_modulus_deviation < tol && r.tight_frame_residual < tol;
  return r;
}

template <typename Real = double>
struct SymmetryCheck {
  bool symmetric = false;
  Complex<Real> phase;
  double residual = 0;  // |U psi - phase psi|
};

/// Whether U psi = lambda psi for a unit-modulus lambda.
template <typename Real>
SymmetryCheck<Real> check_projective_symmetry(const Fiducial<Real>& psi, const CMatrix<Real>& u,
                                              double tol = 1e-8) {
  if (u.rows() != psi.d || u.cols() != psi.d)
    throw std::invalid_argument("check_projective_symmetry: dimension mismatch");
  const CVector<Real> image = u * psi.vector;
  SymmetryCheck<Real> out;
  out.phase = psi.vector.dot(image);  // <psi|U psi>
  out.residual = double((image - out.phase * psi.vector).norm());
  out.symmetric = out.residual < tol && std::abs(double(std::abs(out.phase)) - 1.0) < tol;
  return out;
}

/// Columns D_p psi in linear index order.
template <typename Real>
CMatrix<Real> orbit(const Fiducial<Real>& psi) {
  detail::require_normalized(psi.vector, "orbit");
  const int d = psi.d;
  CMatrix<Real> out(d, long(d) * d);
  for (const auto& p : wh::all_indices(d)) out.col(p.linear()) = wh::displace<Real>(p, psi.vector);
  return out;
}

/// Global phase rotated so the largest-modulus entry (first on ties) is real positive.
template <typename Real>
CVector<Real> canonical_phase(CVector<Real> v) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < v.size(); ++k)
    if (std::abs(v(k)) > std::abs(v(best))) best = k;
  if (std::abs(v(best)) > Real(0)) v *= std::conj(v(best)) / std::abs(v(best));
  return v;
}

}  // namespace sicladder::sic

#endif  // SICLADDER_SIC_HPP
