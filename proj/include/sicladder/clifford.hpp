#ifndef SICLADDER_CLIFFORD_HPP
#define SICLADDER_CLIFFORD_HPP

// SL(2, Z_d) and its unitary representatives U_F, fixed up to phase by
// U_F D_p U_F^dagger = D_{Fp}.

#include <array>
#include <map>
#include <vector>

#include "sicladder/random.hpp"
#include "sicladder/wh.hpp"

namespace sicladder::clifford {

/// [[alpha, beta], [gamma, delta]] mod d with unit determinant.
struct SymplecticMatrix {
  long alpha = 1, beta = 0, gamma = 0, delta = 1;
  int d = 3;

  SymplecticMatrix() = default;
  SymplecticMatrix(long a, long b, long c, long e, int d_)
      : alpha(mod(a, d_)), beta(mod(b, d_)), gamma(mod(c, d_)), delta(mod(e, d_)), d(d_) {
    require_odd_dimension(d_);
    if (mod(alpha * delta - beta * gamma, d) != 1)
      throw std::invalid_argument("SymplecticMatrix: determinant is not 1 mod d");
  }

  static SymplecticMatrix identity(int d) { return {1, 0, 0, 1, d}; }
  static SymplecticMatrix minus_identity(int d) { return {-1, 0, 0, -1, d}; }
  /// Zauner's order-3 element [[0, -1], [1, -1]].
  static SymplecticMatrix zauner(int d) { return {0, -1, 1, -1, d}; }

  SymplecticMatrix inverse() const { return {delta, -beta, -gamma, alpha, d}; }

  wh::DisplacementIndex operator()(const wh::DisplacementIndex& p) const {
    if (p.d != d) throw std::invalid_argument("SymplecticMatrix: dimension mismatch");
    return {alpha * p.i + beta * p.j, gamma * p.i + delta * p.j, d};
  }

  bool is_identity() const { return alpha == 1 && beta == 0 && gamma == 0 && delta == 1; }

  friend bool operator==(const SymplecticMatrix&, const SymplecticMatrix&) = default;
};

/// Matrix product mod d.
inline SymplecticMatrix sl2_multiply(const SymplecticMatrix& f, const SymplecticMatrix& g) {
  if (f.d != g.d) throw std::invalid_argument("sl2_multiply: dimension mismatch");
  return {f.alpha * g.alpha + f.beta * g.gamma, f.alpha * g.beta + f.beta * g.delta,
          f.gamma * g.alpha + f.delta * g.gamma, f.gamma * g.beta + f.delta * g.delta, f.d};
}

inline SymplecticMatrix operator*(const SymplecticMatrix& f, const SymplecticMatrix& g) {
  return sl2_multiply(f, g);
}

/// Least k >= 1 with F^k = 1.
inline long element_order(const SymplecticMatrix& f) {
  SymplecticMatrix power = f;
  // |SL(2, Z_d)| < d^3 bounds the loop
  const long limit = long(f.d) * f.d * f.d;
  for (long k = 1; k <= limit; ++k) {
    if (power.is_identity()) return k;
    power = power * f;
  }
  throw std::logic_error("element_order: no finite order found");
}

/// Every element of SL(2, Z_d), in lexicographic (alpha, beta, gamma, delta) order.
inline std::vector<SymplecticMatrix> enumerate_sl2(int d) {
  require_odd_dimension(d);
  std::vector<SymplecticMatrix> out;
  for (long a = 0; a < d; ++a)
    for (long b = 0; b < d; ++b)
      for (long c = 0; c < d; ++c)
        for (long e = 0; e < d; ++e)
          if (mod(a * e - b * c, d) == 1) out.emplace_back(a, b, c, e, d);
  return out;
}

/// Uniform draw from SL(2, Z_d) by rejection.
inline SymplecticMatrix random_symplectic(int d, Rng& rng) {
  require_odd_dimension(d);
  for (;;) {
    const long a = long(rng.below(d)), b = long(rng.below(d));
    const long c = long(rng.below(d)), e = long(rng.below(d));
    if (mod(a * e - b * c, d) == 1) return {a, b, c, e, d};
  }
}

enum class PhaseConvention {
  first_entry_positive,  // first nonzero entry in row-major order is real positive
  unit_cube,             // Zauner element rescaled so that U^3 = 1
};

template <typename Real = double>
struct CliffordUnitary {
  SymplecticMatrix F;
  CMatrix<Real> matrix;
  PhaseConvention phase_convention = PhaseConvention::first_entry_positive;
};

namespace detail {

/// Quadratic Gauss-sum representative, valid when beta is invertible:
/// <r|U|c> = tau^{beta^{-1} (delta r^2 - 2 r c + alpha c^2)} / sqrt(d).
template <typename Real>
CMatrix<Real> gauss_sum_representative(const SymplecticMatrix& f) {
  const int d = f.d;
  const long binv = wh::inverse_mod(f.beta, d);
  CMatrix<Real> u(d, d);
  const Real scale = Real(1) / std::sqrt(Real(d));
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) {
      const long exponent = mod(binv * mod(f.delta * r * r - 2 * r * c + f.alpha * c * c, d), d);
      u(r, c) = scale * wh::tau_pow<Real>(d, exponent);
    }
  return u;
}

template <typename Real>
void fix_first_entry_phase(CMatrix<Real>& u) {
  for (Eigen::Index r = 0; r < u.rows(); ++r)
    for (Eigen::Index c = 0; c < u.cols(); ++c)
      if (std::abs(u(r, c)) > Real(1e-8)) {
        u *= std::conj(u(r, c)) / std::abs(u(r, c));
        return;
      }
}

}  // namespace detail

/// Max entrywise residual of U D_p U^dagger - D_{Fp} over the given indices.
template <typename Real>
Real defining_relation_residual(const CliffordUnitary<Real>& u,
                                const std::vector<wh::DisplacementIndex>& indices) {
  Real worst = 0;
  for (const auto& p : indices) {
    const CMatrix<Real> lhs = u.matrix * wh::displacement<Real>(p) * u.matrix.adjoint();
    worst = std::max(worst, max_abs(lhs - wh::displacement<Real>(u.F(p))));
  }
  return worst;
}

/// U_F with the first-entry phase convention. The relation is checked on the
/// generators D_{1,0}, D_{0,1}; a residual above 1e-9 is a construction bug
/// and throws std::logic_error.
template <typename Real = double>
CliffordUnitary<Real> weil_representative(const SymplecticMatrix& f) {
  const int d = f.d;
  CMatrix<Real> matrix;
  if (std::gcd(f.beta, long(d)) == 1) {
    matrix = detail::gauss_sum_representative<Real>(f);
  } else {
    // F = G H with H = [[a, -1], [1, 0]] and G = F H^{-1}, whose beta entry
    // alpha + a beta is a unit for a suitable a since gcd(alpha, beta, d) = 1.
    long a = 0;
    while (std::gcd(mod(f.alpha + a * f.beta, d), long(d)) != 1) ++a;
    const SymplecticMatrix h(a, -1, 1, 0, d);
    const SymplecticMatrix g = f * h.inverse();
    matrix = detail::gauss_sum_representative<Real>(g) * detail::gauss_sum_representative<Real>(h);
  }
  detail::fix_first_entry_phase(matrix);

  CliffordUnitary<Real> out{f, std::move(matrix), PhaseConvention::first_entry_positive};
  const Real residual =
      defining_relation_residual(out, {wh::DisplacementIndex(1, 0, d), wh::DisplacementIndex(0, 1, d)});
  if (!(residual < Real(1e-9)))
    throw std::logic_error("weil_representative: defining relation residual " +
                           std::to_string(double(residual)));
  return out;
}

/// Representative of the Zauner element, rescaled by the cube root of its
/// cubed global phase with the smallest |arg| so that U^3 = 1.
template <typename Real = double>
CliffordUnitary<Real> zauner(int d) {
  auto u = weil_representative<Real>(SymplecticMatrix::zauner(d));
  const CMatrix<Real> cube = u.matrix * u.matrix * u.matrix;
  const Complex<Real> c = cube(0, 0);  // cube is c times the identity
  const Real base = -std::arg(c) / Real(3);
  Complex<Real> best(1);
  Real best_arg = std::numeric_limits<Real>::max();
  for (int k = 0; k < 3; ++k) {
    const Complex<Real> z = std::polar(Real(1), base + Real(2) * std::numbers::pi_v<Real> * k / Real(3));
    if (std::abs(std::arg(z)) < best_arg) {
      best_arg = std::abs(std::arg(z));
      best = z;
    }
  }
  u.matrix *= best;
  u.phase_convention = PhaseConvention::unit_cube;
  return u;
}

template <typename Real = double>
struct Eigenspace {
  Complex<Real> eigenvalue;
  CMatrix<Real> basis;  // orthonormal columns
};

/// Eigenspaces of a unitary with U^3 = 1, one per cube root of unity
/// (1, w, w^2), each from the projector (1 + conj(z) U + conj(z)^2 U^2) / 3.
template <typename Real>
std::array<Eigenspace<Real>, 3> order3_eigenspaces(const CMatrix<Real>& u, double tol = 1e-8) {
  const Eigen::Index n = u.rows();
  const CMatrix<Real> u2 = u * u;
  std::array<Eigenspace<Real>, 3> out;
  for (int k = 0; k < 3; ++k) {
    const Complex<Real> z = root_of_unity<Real>(3, k);
    CMatrix<Real> proj = (CMatrix<Real>::Identity(n, n) + std::conj(z) * u + std::conj(z * z) * u2) / Real(3);
    proj = (proj + proj.adjoint()).eval() / Real(2);
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(proj);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < n; ++c)
      if (std::abs(double(es.eigenvalues()(c)) - 1.0) < tol) keep.push_back(c);
    CMatrix<Real> basis(n, Eigen::Index(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) basis.col(Eigen::Index(c)) = es.eigenvectors().col(keep[c]);
    out[std::size_t(k)] = {z, std::move(basis)};
  }
  return out;
}

/// Largest deviation of an entry phase from the lattice of multiples of pi/d,
/// over entries with modulus above `floor`.
template <typename Real>
Real cyclotomic_phase_residual(const CMatrix<Real>& u, int d, Real floor = Real(1e-8)) {
  const Real step = std::numbers::pi_v<Real> / Real(d);
  Real worst = 0;
  for (Eigen::Index r = 0; r < u.rows(); ++r)
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      if (std::abs(u(r, c)) <= floor) continue;
      const Real x = std::arg(u(r, c)) / step;
      worst = std::max(worst, std::abs(x - std::round(x)) * step);
    }
  return worst;
}

struct CliffordCheckReport {
  int d = 0;
  int samples = 0;
  double defining_relation_residual = 0;  // over all p, all sampled F
  double unitarity_residual = 0;
  double homomorphism_residual = 0;       // U_F U_G against U_{FG} up to phase
  double cyclotomic_residual = 0;         // entry phases off multiples of pi/d (Gauss-sum cases)
  double parity_residual = 0;             // U_{-1} against the parity operator up to phase
};

/// Samples `samples` uniform F (and pairs F, G) from `seed`.
template <typename Real = double>
CliffordCheckReport clifford_check(int d, int samples, std::uint64_t seed = 1) {
  require_odd_dimension(d);
  if (samples < 1) throw std::invalid_argument("clifford_check: samples must be positive");
  CliffordCheckReport r;
  r.d = d;
  r.samples = samples;
  Rng rng(seed);
  const auto indices = wh::all_indices(d);
  const CMatrix<Real> id = CMatrix<Real>::Identity(d, d);
  for (int s = 0; s < samples; ++s) {
    const SymplecticMatrix f = random_symplectic(d, rng);
    const SymplecticMatrix g = random_symplectic(d, rng);
    const auto uf = weil_representative<Real>(f);
    const auto ug = weil_representative<Real>(g);
    const auto ufg = weil_representative<Real>(f * g);
    r.defining_relation_residual = std::max(r.defining_relation_residual, double(defining_relation_residual(uf, indices)));
    r.unitarity_residual = std::max(r.unitarity_residual, double(max_abs(uf.matrix.adjoint() * uf.matrix - id)));
    r.homomorphism_residual =
        std::max(r.homomorphism_residual, proportionality<Real>(CMatrix<Real>(uf.matrix * ug.matrix), ufg.matrix).second);
    if (std::gcd(f.beta, long(d)) == 1)
      r.cyclotomic_residual = std::max(r.cyclotomic_residual, double(cyclotomic_phase_residual(uf.matrix, d)));
  }
  const auto parity_rep = weil_representative<Real>(SymplecticMatrix::minus_identity(d));
  r.parity_residual = proportionality<Real>(parity_rep.matrix, wh::parity<Real>(d)).second;
  r.cyclotomic_residual = std::max(r.cyclotomic_residual, double(cyclotomic_phase_residual(parity_rep.matrix, d)));
  return r;
}

struct FactorGroupReport {
  int d = 0;
  std::size_t group_order = 0;
  std::size_t quotient_order = 0;
  std::size_t expected_quotient_order = 0;  // 12 (tetrahedral) or 60 (icosahedral)
  /// Element-order histogram of SL(2, Z_d) / {+1, -1}.
  std::map<long, std::size_t> quotient_orders;
  std::map<long, std::size_t> expected_quotient_orders;
  bool ok = false;
};

/// Order checks for SL(2, Z_3)/{+-1} = T and SL(2, Z_5)/{+-1} = I, including
/// the element-order profile of A_4 and A_5.
inline FactorGroupReport factor_group_order_check(int d) {
  if (d != 3 && d != 5) throw std::invalid_argument("factor_group_order_check: d must be 3 or 5");
  FactorGroupReport r;
  r.d = d;
  const auto group = enumerate_sl2(d);
  r.group_order = group.size();
  r.quotient_order = group.size() / 2;
  r.expected_quotient_order = d == 3 ? 12 : 60;
  r.expected_quotient_orders = d == 3 ? std::map<long, std::size_t>{{1, 1}, {2, 3}, {3, 8}}
                                      : std::map<long, std::size_t>{{1, 1}, {2, 15}, {3, 20}, {5, 24}};

  const auto minus = SymplecticMatrix::minus_identity(d);
  for (const auto& f : group) {
    // order of the coset {F, -F}: least k with F^k = +-1
    SymplecticMatrix power = f;
    long k = 1;
    while (!power.is_identity() && !(power == minus)) {
      power = power * f;
      ++k;
    }
    ++r.quotient_orders[k];
  }
  for (auto& [order, count] : r.quotient_orders) count /= 2;  // each coset counted twice
  r.ok = r.quotient_order == r.expected_quotient_order && r.quotient_orders == r.expected_quotient_orders;
  return r;
}

}  // namespace sicladder::clifford

#endif  // SICLADDER_CLIFFORD_HPP
