#ifndef SICLADDER_ETF_HPP
#define SICLADDER_ETF_HPP

// Equiangular tight frames built from a SIC: the lift of psi (x) psi into
// the symmetric subspace, Naimark complements, and the alignment relation
// between a SIC in dimension d and one in dimension d(d-2).
//
// Symmetric subspace basis order: |00>, ..., |d-1 d-1>, then
// (|ij> + |ji>)/sqrt(2) for i < j lexicographically. Antisymmetric basis:
// (|ij> - |ji>)/sqrt(2) for i < j. Block forms list the (d+1)/2 (resp.
// (d-1)/2) invariant copies of C^d one after the other.

#include <vector>

#include <Eigen/QR>

#include "sicladder/clifford.hpp"
#include "sicladder/search.hpp"
#include "sicladder/sic.hpp"

namespace sicladder::etf {

template <typename Real = double>
struct EtfFamily {
  int ambient_dim = 0;
  int count = 0;
  CMatrix<Real> vectors;  // ambient_dim x count, unit columns
  double c1 = 0;          // count / ambient_dim
  double c2 = 0;          // (count - ambient_dim) / (ambient_dim (count - 1))
};

inline double etf_c1(int n, int dim) { return double(n) / dim; }
inline double etf_c2(int n, int dim) { return n > 1 ? double(n - dim) / (double(dim) * (n - 1)) : 0.0; }

template <typename Real>
EtfFamily<Real> make_family(CMatrix<Real> vectors) {
  EtfFamily<Real> f;
  f.ambient_dim = int(vectors.rows());
  f.count = int(vectors.cols());
  if (f.ambient_dim < 1 || f.count < 1) throw std::invalid_argument("make_family: empty frame");
  f.vectors = std::move(vectors);
  f.c1 = etf_c1(f.count, f.ambient_dim);
  f.c2 = etf_c2(f.count, f.ambient_dim);
  return f;
}

// ---------------------------------------------------------------------------
// Symmetric and antisymmetric subspaces of C^d (x) C^d.

inline int sym_dim(int d) { return d * (d + 1) / 2; }
inline int antisym_dim(int d) { return d * (d - 1) / 2; }

/// Position of |(i,j)>, i < j, in the symmetric basis.
inline long sym_pair_position(int d, long i, long j) {
  // pairs with first index < i come first
  return d + i * (2L * d - i - 1) / 2 + (j - i - 1);
}

/// Position of |[i,j]>, i < j, in the antisymmetric basis.
inline long antisym_pair_position(int d, long i, long j) { return sym_pair_position(d, i, j) - d; }

/// d^2 x d(d+1)/2 isometry whose columns are the symmetric basis vectors.
template <typename Real = double>
CMatrix<Real> symmetric_basis(int d) {
  CMatrix<Real> b = CMatrix<Real>::Zero(long(d) * d, sym_dim(d));
  const Real s = Real(1) / std::sqrt(Real(2));
  for (long i = 0; i < d; ++i) b(i * d + i, i) = 1;
  for (long i = 0; i < d; ++i)
    for (long j = i + 1; j < d; ++j) {
      const long col = sym_pair_position(d, i, j);
      b(i * d + j, col) = s;
      b(j * d + i, col) = s;
    }
  return b;
}

template <typename Real = double>
CMatrix<Real> antisymmetric_basis(int d) {
  CMatrix<Real> b = CMatrix<Real>::Zero(long(d) * d, antisym_dim(d));
  const Real s = Real(1) / std::sqrt(Real(2));
  for (long i = 0; i < d; ++i)
    for (long j = i + 1; j < d; ++j) {
      const long col = antisym_pair_position(d, i, j);
      b(i * d + j, col) = s;
      b(j * d + i, col) = -s;
    }
  return b;
}

/// tau^{ij} (X (x) X)^i (Z^{(d+1)/2} (x) Z^{(d+1)/2})^j on C^{d^2}.
template <typename Real = double>
CMatrix<Real> lifted_displacement(const wh::DisplacementIndex& p) {
  const int d = p.d;
  const auto cs = wh::clock_shift<Real>(d);
  const long h = wh::half_inverse(d);
  CMatrix<Real> xi = CMatrix<Real>::Identity(d, d), zj = CMatrix<Real>::Identity(d, d);
  for (long k = 0; k < p.i; ++k) xi = (xi * cs.X).eval();
  for (long k = 0; k < mod(h * p.j, d); ++k) zj = (zj * cs.Z).eval();
  const CMatrix<Real> single = xi * zj;
  return wh::tau_pow<Real>(d, p.i * p.j) * CMatrix<Real>(Eigen::kroneckerProduct(single, single));
}

/// Symmetric basis reordered into (d+1)/2 blocks on which every lifted
/// displacement acts as D_p. Block delta in [0, (d-1)/2] collects the pairs
/// {k, k + delta}; within it column k holds the pair starting at
/// k - delta (d+1)/2, which absorbs the phase omega^{delta (d+1)/2} of Z~.
template <typename Real = double>
CMatrix<Real> symmetric_block_basis(int d) {
  require_odd_dimension(d);
  const CMatrix<Real> sym = symmetric_basis<Real>(d);
  CMatrix<Real> out(long(d) * d, sym_dim(d));
  const long h = wh::half_inverse(d);
  for (long delta = 0; delta <= (d - 1) / 2; ++delta)
    for (long k = 0; k < d; ++k) {
      const long a = mod(k - delta * h, d), b = mod(a + delta, d);
      const long src = delta == 0 ? a : sym_pair_position(d, std::min(a, b), std::max(a, b));
      out.col(delta * d + k) = sym.col(src);
    }
  return out;
}

/// Antisymmetric analogue with (d-1)/2 blocks: block delta - 1 holds
/// (|a, a+delta> - |a+delta, a>)/sqrt(2) with a = k - delta (d+1)/2.
template <typename Real = double>
CMatrix<Real> antisymmetric_block_basis(int d) {
  require_odd_dimension(d);
  CMatrix<Real> out = CMatrix<Real>::Zero(long(d) * d, antisym_dim(d));
  const long h = wh::half_inverse(d);
  const Real s = Real(1) / std::sqrt(Real(2));
  for (long delta = 1; delta <= (d - 1) / 2; ++delta)
    for (long k = 0; k < d; ++k) {
      const long a = mod(k - delta * h, d), b = mod(a + delta, d);
      const long col = (delta - 1) * d + k;
      out(a * d + b, col) = s;
      out(b * d + a, col) = -s;
    }
  return out;
}

/// Coordinates of v (x) v in the symmetric basis.
template <typename Real>
CVector<Real> symmetric_square(const CVector<Real>& v) {
  const int d = int(v.size());
  CVector<Real> out(sym_dim(d));
  const Real root2 = std::sqrt(Real(2));
  for (long i = 0; i < d; ++i) out(i) = v(i) * v(i);
  for (long i = 0; i < d; ++i)
    for (long j = i + 1; j < d; ++j) out(sym_pair_position(d, i, j)) = root2 * v(i) * v(j);
  return out;
}

template <typename Real = double>
struct SymLift {
  EtfFamily<Real> family;
  bool input_is_sic = false;  // false: the overlap pattern is unspecified
};

/// The d^2 vectors D~_p (psi (x) psi) in C^{d(d+1)/2}, in linear index order.
/// Since D~_{i,j} = D_{i,j'} (x) D_{i,j'} with j' = (d+1) j / 2, each is the
/// symmetric square of D_{i,j'} psi.
template <typename Real>
SymLift<Real> sym_lift(const sic::Fiducial<Real>& psi) {
  const int d = psi.d;
  require_odd_dimension(d);
  const long h = wh::half_inverse(d);
  CMatrix<Real> vectors(sym_dim(d), long(d) * d);
  for (const auto& p : wh::all_indices(d))
    vectors.col(p.linear()) = symmetric_square<Real>(wh::displace<Real>(wh::DisplacementIndex(p.i, h * p.j, d), psi.vector));
  SymLift<Real> out{make_family<Real>(std::move(vectors)), sic::verify_sic(psi, 1e-9).is_sic};
  return out;
}

struct EtfReport {
  int ambient_dim = 0;
  int count = 0;
  double c1 = 0;
  double c2 = 0;                  // expected from (count, ambient_dim)
  double observed_c2 = 0;         // mean off-diagonal |Gram|^2
  double norm_residual = 0;       // max | |v|^2 - 1 |
  double tight_residual = 0;      // |sum v v^dag - c1 1|_max
  double equiangular_spread = 0;  // max - min of off-diagonal |Gram|^2
  double c2_residual = 0;         // max | |Gram|^2 - c2 | off the diagonal
  bool is_etf = false;
};

template <typename Real>
EtfReport verify_etf(const EtfFamily<Real>& family, double tol = kStructuralTol) {
  EtfReport r;
  r.ambient_dim = family.ambient_dim;
  r.count = family.count;
  r.c1 = etf_c1(family.count, family.ambient_dim);
  r.c2 = etf_c2(family.count, family.ambient_dim);

  const CMatrix<Real> gram = family.vectors.adjoint() * family.vectors;
  const CMatrix<Real> frame = family.vectors * family.vectors.adjoint();
  r.tight_residual =
      double(max_abs(frame - Real(r.c1) * CMatrix<Real>::Identity(family.ambient_dim, family.ambient_dim)));

  double lo = std::numeric_limits<double>::infinity(), hi = 0, sum = 0;
  long pairs = 0;
  for (Eigen::Index a = 0; a < gram.rows(); ++a) {
    r.norm_residual = std::max(r.norm_residual, std::abs(double(gram(a, a).real()) - 1.0));
    for (Eigen::Index b = 0; b < gram.cols(); ++b) {
      if (a == b) continue;
      const double g2 = double(std::norm(gram(a, b)));
      lo = std::min(lo, g2);
      hi = std::max(hi, g2);
      sum += g2;
      ++pairs;
      r.c2_residual = std::max(r.c2_residual, std::abs(g2 - r.c2));
    }
  }
  if (pairs > 0) {
    r.observed_c2 = sum / double(pairs);
    r.equiangular_spread = hi - lo;
  }
  r.is_etf = r.norm_residual < tol && r.tight_residual < tol && r.c2_residual < tol;
  return r;
}

/// Complement of a tight frame: the rows of V / sqrt(c1) are completed to a
/// unitary by an orthonormal basis of their orthogonal complement, taken from
/// a full QR factorization with each new row's first nonzero coordinate made
/// real positive. Returns the normalized columns of the added rows.
template <typename Real>
EtfFamily<Real> naimark_complement(const EtfFamily<Real>& family, double tol = 1e-8) {
  const int n = family.count, dim = family.ambient_dim;
  if (n <= dim) throw std::invalid_argument("naimark_complement: need more vectors than the ambient dimension");
  const auto report = verify_etf(family, 1.0);
  if (report.tight_residual > tol || report.norm_residual > tol)
    throw std::invalid_argument("naimark_complement: input is not a unit-norm tight frame");

  const CMatrix<Real> rows = family.vectors / std::sqrt(Real(report.c1));  // orthonormal rows
  const CMatrix<Real> cols = rows.adjoint();                               // n x dim
  Eigen::HouseholderQR<CMatrix<Real>> qr(cols);
  const CMatrix<Real> q = qr.householderQ() * CMatrix<Real>::Identity(n, n);
  CMatrix<Real> complement = q.rightCols(n - dim).adjoint();  // (n - dim) x n, orthogonal to `rows`

  for (Eigen::Index r = 0; r < complement.rows(); ++r)
    for (Eigen::Index c = 0; c < complement.cols(); ++c)
      if (std::abs(complement(r, c)) > Real(1e-10)) {
        complement.row(r) *= std::conj(complement(r, c)) / std::abs(complement(r, c));
        break;
      }

  for (Eigen::Index c = 0; c < complement.cols(); ++c) complement.col(c).normalize();
  return make_family<Real>(std::move(complement));
}

/// The Naimark complement of the symmetric lift in covariant form: a unit
/// vector Psi in C^{(d-1)/2} (x) C^d (copy-major) with
/// <Psi|1 (x) D_p|Psi> = -(d+1) <psi|D_{i,j'}|psi>^2 / (d-1) for p != 0.
/// The reduced state rho = (1/d) sum_p c_p D_p^dag on C^d is 2/(d-1) times a
/// rank (d-1)/2 projector; Psi is its canonical purification.
template <typename Real>
CVector<Real> covariant_complement(const sic::Fiducial<Real>& psi, double tol = 1e-8) {
  const int d = psi.d;
  require_odd_dimension(d);
  const auto table = sic::overlaps(psi);
  const long h = wh::half_inverse(d);

  CMatrix<Real> rho = CMatrix<Real>::Identity(d, d) / Real(d);
  for (const auto& p : wh::all_indices(d)) {
    if (p.is_zero()) continue;
    const Complex<Real> c = table.at(wh::DisplacementIndex(p.i, h * p.j, d));
    const Complex<Real> target = -Real(d + 1) * c * c / Real(d - 1);
    rho += (target / Real(d)) * wh::displacement<Real>(p).adjoint();
  }
  rho = (rho + rho.adjoint()).eval() / Real(2);

  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(rho);
  const int copies = (d - 1) / 2;
  const double expected = 2.0 / (d - 1);
  for (int k = 0; k < d; ++k) {
    const double ev = double(es.eigenvalues()(k));
    const bool top = k >= d - copies;
    if (std::abs(ev - (top ? expected : 0.0)) > tol)
      throw std::invalid_argument("covariant_complement: input is not a SIC fiducial to tolerance");
  }
  CVector<Real> out(long(copies) * d);
  for (int a = 0; a < copies; ++a) {
    // eigenvectors come in ascending order; copy a takes the a-th largest
    const Eigen::Index col = d - 1 - a;
    out.segment(long(a) * d, d) = std::sqrt(std::max(es.eigenvalues()(col), Real(0))) * es.eigenvectors().col(col);
  }
  out.normalize();
  return out;
}

/// The frame {(1_n (x) D_p) v} for v in C^n (x) C^d, copy-major.
template <typename Real>
EtfFamily<Real> block_orbit(const CVector<Real>& v, int d) {
  if (v.size() % d) throw std::invalid_argument("block_orbit: dimension is not a multiple of d");
  const long copies = v.size() / d;
  CMatrix<Real> vectors(v.size(), long(d) * d);
  for (const auto& p : wh::all_indices(d))
    for (long a = 0; a < copies; ++a)
      vectors.col(p.linear()).segment(a * d, d) = wh::displace<Real>(p, v.segment(a * d, d));
  return make_family<Real>(std::move(vectors));
}

template <typename Real = double>
struct ParityEmbedding {
  CVector<Real> vector;    // in C^{d-2} (x) C^d, (d-2)-factor major
  CMatrix<Real> isometry;  // E (x) 1_d; E^dag recovers the input
};

/// E: C^{(d-1)/2} -> C^{d-2} onto the +1 eigenspace of the parity operator,
/// e_0 -> e_0 and e_k -> (e_k + e_{d-2-k})/sqrt(2).
template <typename Real = double>
CMatrix<Real> parity_plus_isometry(int n) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("parity_plus_isometry: odd n required");
  const int m = (n + 1) / 2;
  CMatrix<Real> e = CMatrix<Real>::Zero(n, m);
  e(0, 0) = 1;
  const Real s = Real(1) / std::sqrt(Real(2));
  for (int k = 1; k < m; ++k) {
    e(k, k) = s;
    e(n - k, k) = s;
  }
  return e;
}

/// Embeds v in C^{(d-1)/2} (x) C^d into the +1 eigenspace of U_P^{(d-2)} (x) 1.
template <typename Real>
ParityEmbedding<Real> parity_eigenspace_embed(const CVector<Real>& v, int d) {
  require_odd_dimension(d);
  if (v.size() != antisym_dim(d))
    throw std::invalid_argument("parity_eigenspace_embed: expected dimension d(d-1)/2");
  const CMatrix<Real> e = parity_plus_isometry<Real>(d - 2);
  ParityEmbedding<Real> out;
  out.isometry = Eigen::kroneckerProduct(e, CMatrix<Real>::Identity(d, d));
  out.vector = out.isometry * v;
  return out;
}

/// Parity on C^n; the 1x1 identity when n = 1.
template <typename Real = double>
CMatrix<Real> parity_any(int n) {
  return n == 1 ? CMatrix<Real>::Identity(1, 1) : wh::parity<Real>(n);
}

struct AlignmentReport {
  int d = 0;
  long D = 0;  // d(d-2)
  bool parity_symmetric = false;
  double parity_residual = 0;
  double kvadfas_residual = 0;      // max_{p != 0} |<Psi|1 (x) D_p|Psi> + (d+1) c_{i,j'}^2 / (d-1)|
  double phase_match_residual = 0;  // same comparison on phases only (radians)
  std::optional<double> full_sic_residual;
  bool high_is_sic = false;
};

/// Rewrites a vector of C^{d(d-2)} in the (d-2)-major CRT tensor basis.
template <typename Real>
CVector<Real> to_crt_tensor(const CVector<Real>& v, int a, int b) {
  const auto f = wh::crt_factorization(a, b);
  CVector<Real> out(v.size());
  for (long k = 0; k < v.size(); ++k) out(wh::crt_position(f, k)) = v(k);
  return out;
}

/// <Psi|A (x) B|Psi> for Psi in C^a (x) C^b, (a)-major.
template <typename Real>
Complex<Real> product_expectation(const CVector<Real>& psi, const CMatrix<Real>& a, const CMatrix<Real>& b) {
  const long na = a.rows(), nb = b.rows();
  const Eigen::Map<const CMatrix<Real>> m(psi.data(), nb, na);  // column x = first-factor index
  return (m.conjugate().cwiseProduct(b * m * a.transpose())).sum();
}

/// Tests the alignment relation between a SIC psi_low in dimension d and a
/// vector psi_high in dimension d(d-2), viewed as C^{d-2} (x) C^d through the
/// (d-2)-major CRT bijection.
template <typename Real>
AlignmentReport alignment_check(const sic::Fiducial<Real>& low, const sic::Fiducial<Real>& high,
                                bool full_mal = false, double tol = 1e-8) {
  const int d = low.d;
  require_odd_dimension(d);
  const int a = d - 2;
  if (high.d != d * a)
    throw std::invalid_argument("alignment_check: high-dimensional fiducial must have dimension d(d-2)");
  if (!sic::verify_sic(low, tol).is_sic)
    throw std::invalid_argument("alignment_check: low-dimensional fiducial is not a SIC");

  AlignmentReport r;
  r.d = d;
  r.D = long(d) * a;
  r.high_is_sic = high.d >= 3 && sic::verify_sic(high, tol).is_sic;

  const CVector<Real> psi = to_crt_tensor<Real>(high.vector, a, d);
  const CMatrix<Real> parity_a = parity_any<Real>(a);
  const CMatrix<Real> id_a = CMatrix<Real>::Identity(a, a);
  const CMatrix<Real> id_d = CMatrix<Real>::Identity(d, d);

  const CVector<Real> flipped = CMatrix<Real>(Eigen::kroneckerProduct(parity_a, id_d)) * psi;
  const Complex<Real> lambda = psi.dot(flipped);
  r.parity_residual = double((flipped - lambda * psi).norm());
  r.parity_symmetric = r.parity_residual < tol;

  const auto low_table = sic::overlaps(low);
  const long h = wh::half_inverse(d);
  for (const auto& p : wh::all_indices(d)) {
    if (p.is_zero()) continue;
    const Complex<Real> c = low_table.at(wh::DisplacementIndex(p.i, h * p.j, d));
    const Complex<Real> target = -Real(d + 1) * c * c / Real(d - 1);
    const Complex<Real> value = product_expectation<Real>(psi, id_a, wh::displacement<Real>(p));
    r.kvadfas_residual = std::max(r.kvadfas_residual, double(std::abs(value - target)));
    r.phase_match_residual = std::max(r.phase_match_residual, double(std::abs(std::arg(value * std::conj(target)))));
  }

  if (full_mal) {
    const double target = 1.0 / (double(d - 1) * (d - 1));
    double worst = 0;
    for (long pa = 0; pa < long(a) * a; ++pa) {
      const CMatrix<Real> da = a == 1 ? id_a : wh::displacement<Real>(wh::DisplacementIndex::from_linear(pa, a));
      for (const auto& p : wh::all_indices(d)) {
        if (pa == 0 && p.is_zero()) continue;
        const double v = double(std::norm(product_expectation<Real>(psi, da, wh::displacement<Real>(p))));
        worst = std::max(worst, std::abs(v - target));
      }
    }
    r.full_sic_residual = worst;
  }
  return r;
}

/// <Psi|1_{d-2} (x) D_p|Psi> for all p in Z_d^2, Psi given in the standard
/// basis of C^{d(d-2)}.
template <typename Real>
std::vector<Complex<Real>> restricted_overlaps(const CVector<Real>& high, int d) {
  require_odd_dimension(d);
  const int a = d - 2;
  if (high.size() != long(d) * a) throw std::invalid_argument("restricted_overlaps: expected dimension d(d-2)");
  const CVector<Real> psi = to_crt_tensor<Real>(high, a, d);
  const Eigen::Map<const CMatrix<Real>> m(psi.data(), d, a);
  std::vector<Complex<Real>> out;
  out.reserve(std::size_t(d) * d);
  for (const auto& p : wh::all_indices(d)) {
    CMatrix<Real> moved(d, a);
    for (long c = 0; c < a; ++c) moved.col(c) = wh::displace<Real>(p, CVector<Real>(m.col(c)));
    out.push_back(m.conjugate().cwiseProduct(moved).sum());
  }
  return out;
}

/// max_{p != 0} |r_p + (d+1) c_{i,j'}^2 / (d-1)| for restricted overlaps r of a
/// high vector against the overlap table of a low SIC.
template <typename Real>
double kvadfas_residual(const std::vector<Complex<Real>>& restricted, const sic::OverlapTable<Real>& low) {
  const int d = low.d;
  const long h = wh::half_inverse(d);
  double worst = 0;
  for (const auto& p : wh::all_indices(d)) {
    if (p.is_zero()) continue;
    const Complex<Real> c = low.at(wh::DisplacementIndex(p.i, h * p.j, d));
    const Complex<Real> target = -Real(d + 1) * c * c / Real(d - 1);
    worst = std::max(worst, double(std::abs(restricted[std::size_t(p.linear())] - target)));
  }
  return worst;
}

/// Orthonormal basis of span(A) intersected with span(B), both orthonormal.
template <typename Real>
CMatrix<Real> intersect_subspaces(const CMatrix<Real>& a, const CMatrix<Real>& b, double tol = 1e-9) {
  Eigen::JacobiSVD<CMatrix<Real>> svd(a.adjoint() * b, Eigen::ComputeFullU);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > Real(1 - tol)) keep.push_back(k);
  CMatrix<Real> out(a.rows(), Eigen::Index(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.col(Eigen::Index(k)) = a * svd.matrixU().col(keep[k]);
  return out;
}

/// The +1 eigenspace of U_P^{(d-2)} (x) 1_d, as columns in the standard basis
/// of C^{d(d-2)}.
template <typename Real = double>
CMatrix<Real> parity_subspace_basis(int d) {
  require_odd_dimension(d);
  const auto f = wh::crt_factorization(d - 2, d);
  const CMatrix<Real> e = parity_plus_isometry<Real>(d - 2);
  return wh::crt_permutation<Real>(f).adjoint() * CMatrix<Real>(Eigen::kroneckerProduct(e, CMatrix<Real>::Identity(d, d)));
}

template <typename Real = double>
struct AlignedSubspace {
  std::string tag;  // "parity" or "parity+zauner:k"
  CMatrix<Real> basis;
};

/// Search spaces for a parity-symmetric SIC in dimension d(d-2): the parity
/// eigenspace intersected with each Zauner eigenspace, largest first, then
/// the parity eigenspace itself.
template <typename Real = double>
std::vector<AlignedSubspace<Real>> aligned_search_subspaces(int d) {
  const CMatrix<Real> parity = parity_subspace_basis<Real>(d);
  std::vector<AlignedSubspace<Real>> out;
  if (d > 3) {
    const auto spaces = clifford::order3_eigenspaces(clifford::zauner<Real>(d * (d - 2)).matrix);
    for (int k = 0; k < 3; ++k) {
      CMatrix<Real> meet = intersect_subspaces<Real>(parity, spaces[std::size_t(k)].basis);
      if (meet.cols() > 0) out.push_back({"parity+zauner:" + std::to_string(k), std::move(meet)});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& x, const auto& y) { return x.basis.cols() > y.basis.cols(); });
  }
  out.push_back({"parity", parity});
  return out;
}

/// Searches dimension d(d-2) for a SIC fixed by U_P^{(d-2)} (x) 1_d, trying the
/// spaces of aligned_search_subspaces in order with the given options; the
/// first success wins. Found fiducials carry the symmetry tag "parity".
inline sic::SearchOutcome search_parity_symmetric(int d, sic::SearchOptions options = {}) {
  require_odd_dimension(d);
  sic::SearchOutcome total;
  for (auto& space : aligned_search_subspaces<double>(d)) {
    options.subspace = std::move(space.basis);
    options.subspace_tag = space.tag;
    auto outcome = sic::search_fiducial(d * (d - 2), options);
    total.restarts_tried += outcome.restarts_tried;
    total.best_potential = std::min(total.best_potential, outcome.best_potential);
    if (outcome.fiducial) {
      auto& tags = outcome.fiducial->metadata.symmetry_tags;
      tags.push_back("parity");
      if (space.tag.find("zauner") != std::string::npos) tags.push_back("zauner");
      total.fiducial = std::move(outcome.fiducial);
      return total;
    }
  }
  return total;
}

template <typename Real = double>
struct OrbitAlignment {
  double kvadfas_residual = std::numeric_limits<double>::infinity();
  clifford::SymplecticMatrix F;
  wh::DisplacementIndex q;
  bool conjugated = false;
  sic::Fiducial<Real> low;  // D_q U_F psi, conjugated if flagged
};

/// Scans the extended Clifford orbit of a low SIC (U_F D_q psi and its complex
/// conjugate) for the member best aligned with a high vector.
template <typename Real>
OrbitAlignment<Real> best_alignment(const sic::Fiducial<Real>& low, const sic::Fiducial<Real>& high) {
  const int d = low.d;
  require_odd_dimension(d);
  const auto restricted = restricted_overlaps<Real>(high.vector, d);
  OrbitAlignment<Real> best;
  best.F = clifford::SymplecticMatrix::identity(d);
  best.q = wh::DisplacementIndex(0, 0, d);
  best.low = low;
  for (const auto& f : clifford::enumerate_sl2(d)) {
    const CVector<Real> moved = clifford::weil_representative<Real>(f).matrix * low.vector;
    for (const auto& q : wh::all_indices(d)) {
      const CVector<Real> v = wh::displace<Real>(q, moved);
      for (int conj = 0; conj < 2; ++conj) {
        auto candidate = sic::Fiducial<Real>::normalized(conj ? CVector<Real>(v.conjugate()) : v);
        const double r = kvadfas_residual<Real>(restricted, sic::overlaps(candidate));
        if (r < best.kvadfas_residual) {
          best.kvadfas_residual = r;
          best.F = f;
          best.q = q;
          best.conjugated = conj != 0;
          best.low = std::move(candidate);
        }
      }
    }
  }
  return best;
}

}  // namespace sicladder::etf

#endif  // SICLADDER_ETF_HPP
