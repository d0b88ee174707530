#ifndef SICLADDER_WH_HPP
#define SICLADDER_WH_HPP

// Weyl-Heisenberg group in odd dimension d: clock and shift, displacement
// operators D_{i,j} = tau^{ij} X^i Z^j with tau = -exp(i pi / d), the parity
// operator, phase point operators and their Grassmannian projectors.

#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "sicladder/random.hpp"
#include "sicladder/types.hpp"

namespace sicladder::wh {

/// A point p = (i, j) of Z_d x Z_d labelling D_{i,j}.
struct DisplacementIndex {
  long i = 0;
  long j = 0;
  int d = 3;

  DisplacementIndex() = default;
  DisplacementIndex(long i_, long j_, int d_) : i(mod(i_, d_)), j(mod(j_, d_)), d(d_) {
    require_odd_dimension(d_);
  }

  /// Position in the row-major enumeration of Z_d x Z_d.
  long linear() const { return i * d + j; }
  bool is_zero() const { return i == 0 && j == 0; }

  static DisplacementIndex from_linear(long k, int d) { return {k / d, k % d, d}; }

  friend DisplacementIndex operator+(const DisplacementIndex& p, const DisplacementIndex& q) {
    check_same(p, q);
    return {p.i + q.i, p.j + q.j, p.d};
  }
  friend DisplacementIndex operator-(const DisplacementIndex& p) { return {-p.i, -p.j, p.d}; }
  friend bool operator==(const DisplacementIndex&, const DisplacementIndex&) = default;

  static void check_same(const DisplacementIndex& p, const DisplacementIndex& q) {
    if (p.d != q.d) throw std::invalid_argument("displacement indices of different dimension");
  }
};

/// Every index of Z_d x Z_d in linear order.
inline std::vector<DisplacementIndex> all_indices(int d) {
  require_odd_dimension(d);
  std::vector<DisplacementIndex> out;
  out.reserve(static_cast<std::size_t>(d) * d);
  for (long k = 0; k < long(d) * d; ++k) out.push_back(DisplacementIndex::from_linear(k, d));
  return out;
}

/// (d+1)/2, the inverse of 2 mod d; tau = omega^{half_inverse}.
inline long half_inverse(int d) { return (d + 1) / 2; }

template <typename Real = double>
struct Roots {
  Complex<Real> omega;
  Complex<Real> tau;
};

template <typename Real = double>
Roots<Real> roots(int d) {
  require_odd_dimension(d);
  const Real angle = std::numbers::pi_v<Real> / Real(d);
  return {root_of_unity<Real>(d, 1), -Complex<Real>(std::cos(angle), std::sin(angle))};
}

/// tau^k, evaluated as omega^{k (d+1)/2} so the exponent stays an exact residue.
template <typename Real = double>
Complex<Real> tau_pow(int d, long k) {
  return root_of_unity<Real>(d, mod(k, d) * half_inverse(d));
}

template <typename Real = double>
struct ClockShift {
  CMatrix<Real> X;
  CMatrix<Real> Z;
};

template <typename Real = double>
ClockShift<Real> clock_shift(int d) {
  require_odd_dimension(d);
  ClockShift<Real> out{CMatrix<Real>::Zero(d, d), CMatrix<Real>::Zero(d, d)};
  for (int k = 0; k < d; ++k) {
    out.X(mod(k + 1, d), k) = 1;
    out.Z(k, k) = root_of_unity<Real>(d, k);
  }
  return out;
}

/// D_{i,j}: maps e_k to omega^{(d+1)/2 ij + jk} e_{k+i}.
template <typename Real = double>
CMatrix<Real> displacement(const DisplacementIndex& p) {
  const int d = p.d;
  CMatrix<Real> out = CMatrix<Real>::Zero(d, d);
  const long base = half_inverse(d) * p.i * p.j;
  for (long k = 0; k < d; ++k) out(mod(k + p.i, d), k) = root_of_unity<Real>(d, base + p.j * k);
  return out;
}

/// D_p psi without forming the matrix.
template <typename Real, typename Derived>
CVector<Real> displace(const DisplacementIndex& p, const Eigen::MatrixBase<Derived>& psi) {
  const int d = p.d;
  if (psi.size() != d) throw std::invalid_argument("displace: dimension mismatch");
  CVector<Real> out(d);
  const long base = half_inverse(d) * p.i * p.j;
  for (long k = 0; k < d; ++k)
    out(mod(k + p.i, d)) = root_of_unity<Real>(d, base + p.j * k) * psi(k);
  return out;
}

/// sigma(p, q) = p_j q_i - p_i q_j mod d, so that D_p D_q = tau^{sigma(p,q)} D_{p+q}.
inline long symplectic_form(const DisplacementIndex& p, const DisplacementIndex& q) {
  DisplacementIndex::check_same(p, q);
  return mod(p.j * q.i - p.i * q.j, p.d);
}

/// <i|U_P|j> = delta_{0, i+j}.
template <typename Real = double>
CMatrix<Real> parity(int d) {
  require_odd_dimension(d);
  CMatrix<Real> out = CMatrix<Real>::Zero(d, d);
  for (int k = 0; k < d; ++k) out(mod(-k, d), k) = 1;
  return out;
}

template <typename Real = double>
struct PhasePointOperator {
  DisplacementIndex p;
  CMatrix<Real> matrix;     // Hermitian, unitary, squares to 1
  CMatrix<Real> projector;  // (1 + matrix) / 2, rank (d+1)/2
};

/// A_p = D_p U_P D_p^dagger.
template <typename Real = double>
PhasePointOperator<Real> phase_point(const DisplacementIndex& p) {
  const CMatrix<Real> dp = displacement<Real>(p);
  PhasePointOperator<Real> out{p, dp * parity<Real>(p.d) * dp.adjoint(), {}};
  out.projector = (CMatrix<Real>::Identity(p.d, p.d) + out.matrix) / Real(2);
  return out;
}

struct Multiplicities {
  int plus = 0;
  int minus = 0;
  int other = 0;
};

/// Counts eigenvalues near +1 and -1 of a Hermitian involution.
template <typename Real>
Multiplicities involution_spectrum(const CMatrix<Real>& a, double tol = 1e-8) {
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(a, Eigen::EigenvaluesOnly);
  Multiplicities m;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double ev = static_cast<double>(es.eigenvalues()(k));
    if (std::abs(ev - 1.0) < tol) {
      ++m.plus;
    } else if (std::abs(ev + 1.0) < tol) {
      ++m.minus;
    } else {
      ++m.other;
    }
  }
  return m;
}

template <typename Real>
bool is_projector(const CMatrix<Real>& p, double tol = kStructuralTol) {
  if (p.rows() != p.cols()) return false;
  return static_cast<double>(max_abs(p - p.adjoint())) < tol &&
         static_cast<double>(max_abs(p * p - p)) < tol;
}

/// Tr (P - Q)^2 for orthogonal projectors P and Q.
template <typename Real>
Real chordal_distance(const CMatrix<Real>& p, const CMatrix<Real>& q, double tol = kStructuralTol) {
  if (p.rows() != q.rows() || p.cols() != q.cols())
    throw std::invalid_argument("chordal_distance: dimension mismatch");
  if (!is_projector(p, tol) || !is_projector(q, tol))
    throw std::invalid_argument("chordal_distance: input is not a Hermitian idempotent");
  return (p - q).squaredNorm();  // Frobenius norm equals the trace form for Hermitian P - Q
}

struct GrassmannReport {
  int d = 0;
  bool equidistant = false;
  double distance2 = 0;      // mean squared chordal distance over all pairs
  double max_deviation = 0;  // max |distance^2 - mean|
};

/// Pairwise chordal distances between the d^2 projectors (1 + A_p)/2.
template <typename Real = double>
GrassmannReport grassmann_equidistance_check(int d, double tol = kStructuralTol) {
  require_odd_dimension(d);
  std::vector<CMatrix<Real>> projectors;
  for (const auto& p : all_indices(d)) {
    projectors.push_back(phase_point<Real>(p).projector);
    if (!is_projector(projectors.back(), tol)) throw std::logic_error("grassmann_equidistance_check: not a projector");
  }

  std::vector<double> distances;
  distances.reserve(projectors.size() * (projectors.size() - 1) / 2);
  for (std::size_t a = 0; a < projectors.size(); ++a)
    for (std::size_t b = a + 1; b < projectors.size(); ++b)
      distances.push_back(static_cast<double>((projectors[a] - projectors[b]).squaredNorm()));

  GrassmannReport r;
  r.d = d;
  r.distance2 = std::accumulate(distances.begin(), distances.end(), 0.0) / double(distances.size());
  for (double x : distances) r.max_deviation = std::max(r.max_deviation, std::abs(x - r.distance2));
  r.equidistant = r.max_deviation < tol;
  return r;
}

struct GroupLawReport {
  int d = 0;
  long pairs_checked = 0;
  bool exhaustive = false;
  double group_law_residual = 0;  // max |D_p D_q - tau^{sigma(p,q)} D_{p+q}|
  double trace_residual = 0;      // max |Tr(D_p^dag D_q) - d delta_{pq}|
  double unitarity_residual = 0;  // max |D_p^dag D_p - 1|
};

/// Checks the group law and trace orthogonality over all pairs (p, q), or
/// over `max_pairs` pairs drawn from `seed` when d^4 exceeds it.
template <typename Real = double>
GroupLawReport group_law_check(int d, long max_pairs = -1, std::uint64_t seed = 1) {
  require_odd_dimension(d);
  const auto indices = all_indices(d);
  std::vector<CMatrix<Real>> ops;
  ops.reserve(indices.size());
  for (const auto& p : indices) ops.push_back(displacement<Real>(p));

  GroupLawReport r;
  r.d = d;
  const long n = long(indices.size());
  const CMatrix<Real> id = CMatrix<Real>::Identity(d, d);
  for (const auto& op : ops) r.unitarity_residual = std::max(r.unitarity_residual, double(max_abs(op.adjoint() * op - id)));

  auto check_pair = [&](long a, long b) {
    const auto& p = indices[std::size_t(a)];
    const auto& q = indices[std::size_t(b)];
    CMatrix<Real> product(d, d);
    for (long c = 0; c < d; ++c) product.col(c) = displace<Real>(p, ops[std::size_t(b)].col(c));
    const CMatrix<Real> expected = tau_pow<Real>(d, symplectic_form(p, q)) * ops[std::size_t((p + q).linear())];
    r.group_law_residual = std::max(r.group_law_residual, double(max_abs(product - expected)));
    const Complex<Real> tr = ops[std::size_t(a)].conjugate().cwiseProduct(ops[std::size_t(b)]).sum();
    r.trace_residual = std::max(r.trace_residual, double(std::abs(tr - Complex<Real>(a == b ? Real(d) : Real(0)))));
    ++r.pairs_checked;
  };

  r.exhaustive = max_pairs < 0 || n * n <= max_pairs;
  if (r.exhaustive) {
    for (long a = 0; a < n; ++a)
      for (long b = 0; b < n; ++b) check_pair(a, b);
  } else {
    Rng rng(seed);
    for (long k = 0; k < max_pairs; ++k) check_pair(long(rng.below(std::uint64_t(n))), long(rng.below(std::uint64_t(n))));
  }
  return r;
}

// CRT factorization C^{ab} = C^a (x) C^b for coprime a, b. The basis
// bijection is e_k -> e_{k mod a} (x) e_{k mod b}, with the a-factor major.
// Under it X_{ab} -> X_a (x) X_b and Z_{ab} -> Z_a^u (x) Z_b^v where
// u = b^{-1} mod a and v = a^{-1} mod b.

struct CrtFactorization {
  int a = 1;
  int b = 1;
  long u = 0;
  long v = 0;
};

inline long inverse_mod(long x, long n) {
  if (n == 1) return 0;
  long t = 0, new_t = 1, r = n, new_r = mod(x, n);
  while (new_r != 0) {
    const long q = r / new_r;
    std::tie(t, new_t) = std::pair{new_t, t - q * new_t};
    std::tie(r, new_r) = std::pair{new_r, r - q * new_r};
  }
  if (r != 1) throw std::invalid_argument("inverse_mod: not invertible");
  return mod(t, n);
}

inline CrtFactorization crt_factorization(int a, int b) {
  if (a < 1 || b < 1 || std::gcd(a, b) != 1)
    throw std::invalid_argument("crt_factorization: factors must be coprime positive integers");
  return {a, b, inverse_mod(b, a), inverse_mod(a, b)};
}

/// Position of e_k in the a-major tensor basis.
inline long crt_position(const CrtFactorization& f, long k) {
  return mod(k, f.a) * f.b + mod(k, f.b);
}

/// Permutation V with V e_k = e_{crt_position(k)}.
template <typename Real = double>
CMatrix<Real> crt_permutation(const CrtFactorization& f) {
  const long n = long(f.a) * f.b;
  CMatrix<Real> v = CMatrix<Real>::Zero(n, n);
  for (long k = 0; k < n; ++k) v(crt_position(f, k), k) = 1;
  return v;
}

/// Factor indices (p_a, p_b) with V D_p V^dagger proportional to D_{p_a} (x) D_{p_b}.
/// Dimension-1 factors are reported with d = 1 and zero components.
struct CrtIndexPair {
  long ia = 0, ja = 0;
  long ib = 0, jb = 0;
};

inline CrtIndexPair crt_index(const CrtFactorization& f, long i, long j) {
  return {mod(i, f.a), mod(f.u * j, f.a), mod(i, f.b), mod(f.v * j, f.b)};
}

}  // namespace sicladder::wh

#endif  // SICLADDER_WH_HPP
