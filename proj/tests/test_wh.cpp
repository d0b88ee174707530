#include <gtest/gtest.h>

#include <array>
#include <numbers>
#include <set>

#include "sicladder/wh.hpp"

using namespace sicladder;
using namespace sicladder::wh;

namespace {

CMatrix<double> power(const CMatrix<double>& m, long k) {
  CMatrix<double> out = CMatrix<double>::Identity(m.rows(), m.cols());
  for (long n = 0; n < k; ++n) out = out * m;
  return out;
}

double trace_distance(const CMatrix<double>& a, const CMatrix<double>& b) { return max_abs(CMatrix<double>(a - b)); }

}  // namespace

TEST(Roots, Properties) {
  for (int d : {3, 5, 7, 9, 199}) {
    const auto r = roots<double>(d);
    EXPECT_NEAR(std::abs(r.tau * r.tau - r.omega), 0, 1e-14);
    EXPECT_NEAR(std::abs(std::pow(r.tau, d) - 1.0), 0, 1e-12);
    EXPECT_NEAR(std::abs(std::pow(r.omega, d) - 1.0), 0, 1e-12);
    EXPECT_NEAR(std::abs(r.tau), 1, 1e-15);
  }
  const auto r7 = roots<double>(7);
  EXPECT_NEAR(std::abs(r7.tau + std::polar(1.0, std::numbers::pi / 7)), 0, 1e-15);
  EXPECT_NEAR(std::abs(tau_pow<double>(3, 3) - 1.0), 0, 1e-15);
  EXPECT_THROW(roots<double>(4), std::invalid_argument);
  EXPECT_THROW(roots<double>(1), std::invalid_argument);
}

TEST(ClockShift, Relations) {
  for (int d : {3, 5, 7}) {
    const auto cs = clock_shift<double>(d);
    const auto w = roots<double>(d).omega;
    EXPECT_LT(trace_distance(cs.Z * cs.X, w * cs.X * cs.Z), 1e-12);
    EXPECT_LT(trace_distance(power(cs.X, d), CMatrix<double>::Identity(d, d)), 1e-12);
    EXPECT_LT(trace_distance(power(cs.Z, d), CMatrix<double>::Identity(d, d)), 1e-12);
  }
  const auto cs = clock_shift<double>(3);
  const auto w = roots<double>(3).omega;
  CMatrix<double> z = CMatrix<double>::Zero(3, 3);
  z.diagonal() << 1, w, w * w;
  EXPECT_LT(trace_distance(cs.Z, z), 1e-15);
  CVector<double> e2 = CVector<double>::Zero(3);
  e2(2) = 1;
  EXPECT_EQ((cs.X * e2)(0), Complex<double>(1));
}

TEST(Displacement, Examples) {
  EXPECT_EQ(displacement<double>({0, 0, 5}), CMatrix<double>(CMatrix<double>::Identity(5, 5)));
  const auto cs = clock_shift<double>(3);
  EXPECT_EQ(displacement<double>({1, 0, 3}), cs.X);
  const auto tau = roots<double>(3).tau;
  EXPECT_LT(trace_distance(displacement<double>({1, 1, 3}), tau * cs.X * cs.Z), 1e-15);
}

TEST(Displacement, MatchesClockShiftPowers) {
  for (int d : {3, 5, 7}) {
    const auto cs = clock_shift<double>(d);
    for (const auto& p : all_indices(d)) {
      const CMatrix<double> expected = tau_pow<double>(d, p.i * p.j) * power(cs.X, p.i) * power(cs.Z, p.j);
      EXPECT_LT(trace_distance(displacement<double>(p), expected), 1e-12);
    }
  }
}

TEST(Displacement, DisplaceMatchesMatrix) {
  Rng rng(5);
  for (const auto& p : all_indices(7)) {
    const CVector<double> v = rng.unit_vector(7);
    EXPECT_LT((displace<double>(p, v) - displacement<double>(p) * v).norm(), 1e-14);
  }
}

TEST(Displacement, AdjointIsNegativeIndex) {
  for (int d : {3, 5, 7})
    for (const auto& p : all_indices(d))
      EXPECT_LT(trace_distance(displacement<double>(p).adjoint(), displacement<double>(-p)), 1e-12);
}

TEST(SymplecticForm, Antisymmetric) {
  for (const auto& p : all_indices(5)) EXPECT_EQ(symplectic_form(p, p), 0);
  for (const auto& p : all_indices(7))
    for (const auto& q : all_indices(7)) EXPECT_EQ(mod(symplectic_form(p, q) + symplectic_form(q, p), 7), 0);
  EXPECT_THROW(symplectic_form({1, 0, 3}, {1, 0, 5}), std::invalid_argument);
}

TEST(GroupLaw, ExhaustiveDenseProducts) {
  // Oracle: plain matrix products.
  for (int d : {3, 5, 7, 9}) {
    double worst = 0;
    for (const auto& p : all_indices(d))
      for (const auto& q : all_indices(d)) {
        const CMatrix<double> lhs = displacement<double>(p) * displacement<double>(q);
        const CMatrix<double> rhs = tau_pow<double>(d, symplectic_form(p, q)) * displacement<double>(p + q);
        worst = std::max(worst, trace_distance(lhs, rhs));
      }
    EXPECT_LT(worst, 1e-12) << "d=" << d;
  }
}

TEST(GroupLaw, CheckRoutine) {
  for (int d : {3, 5, 7, 9, 15}) {
    const auto r = group_law_check<double>(d);
    EXPECT_TRUE(r.exhaustive);
    EXPECT_EQ(r.pairs_checked, long(d) * d * d * d);
    EXPECT_LT(r.group_law_residual, 1e-12);
    EXPECT_LT(r.trace_residual, 1e-11);
    EXPECT_LT(r.unitarity_residual, 1e-12);
  }
  const auto sampled = group_law_check<double>(31, 1000);
  EXPECT_FALSE(sampled.exhaustive);
  EXPECT_EQ(sampled.pairs_checked, 1000);
  EXPECT_LT(sampled.group_law_residual, 1e-11);
}

TEST(GroupLaw, UnitaryOperatorBasis) {
  for (int d : {3, 5, 7})
    for (const auto& p : all_indices(d))
      for (const auto& q : all_indices(d)) {
        const Complex<double> tr = (displacement<double>(p).adjoint() * displacement<double>(q)).trace();
        EXPECT_NEAR(std::abs(tr - Complex<double>(p == q ? d : 0)), 0, 1e-11);
      }
}

TEST(Parity, Examples) {
  const auto u3 = parity<double>(3);
  EXPECT_EQ(u3(2, 1), Complex<double>(1));
  EXPECT_EQ(u3(1, 2), Complex<double>(1));
  EXPECT_EQ(u3(0, 0), Complex<double>(1));
  const auto u5 = parity<double>(5);
  EXPECT_EQ(CMatrix<double>(u5 * u5), CMatrix<double>(CMatrix<double>::Identity(5, 5)));
  const auto u7 = parity<double>(7);
  EXPECT_LT(trace_distance(u7 * displacement<double>({1, 2, 7}) * u7, displacement<double>({-1, -2, 7})), 1e-14);
  const auto cs = clock_shift<double>(7);
  EXPECT_LT(trace_distance(u7 * cs.X * u7, cs.X.adjoint()), 1e-14);
  EXPECT_LT(trace_distance(u7 * cs.Z * u7, cs.Z.adjoint()), 1e-14);
}

TEST(PhasePoint, Examples) {
  EXPECT_LT(trace_distance(phase_point<double>({0, 0, 5}).matrix, parity<double>(5)), 1e-15);
  for (const auto& p : all_indices(5)) EXPECT_NEAR(std::abs(phase_point<double>(p).matrix.trace() - 1.0), 0, 1e-12);
  const auto idx = all_indices(3);
  int pairs = 0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b, ++pairs)
      EXPECT_NEAR(std::abs((phase_point<double>(idx[a]).matrix * phase_point<double>(idx[b]).matrix).trace()), 0, 1e-12);
  EXPECT_EQ(pairs, 36);
}

TEST(PhasePoint, Structure) {
  for (int d : {3, 5, 7}) {
    const CMatrix<double> id = CMatrix<double>::Identity(d, d);
    const auto up = parity<double>(d);
    for (const auto& p : all_indices(d)) {
      const auto a = phase_point<double>(p);
      EXPECT_LT(trace_distance(a.matrix, a.matrix.adjoint()), 1e-12);
      EXPECT_LT(trace_distance(a.matrix * a.matrix, id), 1e-12);
      const auto m = involution_spectrum(a.matrix);
      EXPECT_EQ(m.plus, (d + 1) / 2);
      EXPECT_EQ(m.minus, (d - 1) / 2);
      EXPECT_EQ(m.other, 0);
      EXPECT_TRUE(is_projector(a.projector));
      EXPECT_NEAR(a.projector.trace().real(), (d + 1) / 2.0, 1e-12);
      // parity conjugation sends A_p to A_{-p}
      EXPECT_LT(trace_distance(up * a.matrix * up, phase_point<double>(-p).matrix), 1e-12);
      EXPECT_LT(trace_distance(up * a.projector * up, phase_point<double>(-p).projector), 1e-12);
      for (const auto& q : all_indices(d)) {
        const Complex<double> tr = (a.matrix * phase_point<double>(q).matrix).trace();
        EXPECT_NEAR(std::abs(tr - Complex<double>(p == q ? d : 0)), 0, 1e-11);
      }
    }
  }
}

TEST(ChordalDistance, Examples) {
  const auto a = phase_point<double>({0, 0, 3}).projector;
  EXPECT_NEAR(chordal_distance(a, a), 0, 1e-15);
  EXPECT_NEAR(chordal_distance(a, phase_point<double>({1, 2, 3}).projector), 1.5, 1e-12);
  CMatrix<double> p = CMatrix<double>::Zero(2, 2), q = CMatrix<double>::Zero(2, 2);
  p(0, 0) = 1;
  q(1, 1) = 1;
  EXPECT_NEAR(chordal_distance(p, q), 2, 1e-15);
  CMatrix<double> bad = CMatrix<double>::Identity(2, 2) * 2.0;
  EXPECT_THROW(chordal_distance(p, bad), std::invalid_argument);
  EXPECT_THROW(chordal_distance(p, a), std::invalid_argument);
}

TEST(Grassmann, Equidistance) {
  const auto r3 = grassmann_equidistance_check<double>(3);
  EXPECT_TRUE(r3.equidistant);
  EXPECT_NEAR(r3.distance2, 1.5, 1e-10);
  const auto r5 = grassmann_equidistance_check<double>(5);
  EXPECT_TRUE(r5.equidistant);
  EXPECT_NEAR(r5.distance2, 2.5, 1e-10);
  const auto r7 = grassmann_equidistance_check<double>(7);
  EXPECT_TRUE(r7.equidistant);
  EXPECT_NEAR(r7.distance2, 3.5, 1e-10);
  EXPECT_LT(r7.max_deviation, 1e-10);
}

TEST(DisplacementIndex, ReducesAndValidates) {
  const DisplacementIndex p(-1, 7, 5);
  EXPECT_EQ(p.i, 4);
  EXPECT_EQ(p.j, 2);
  EXPECT_EQ(DisplacementIndex::from_linear(p.linear(), 5), p);
  EXPECT_THROW(DisplacementIndex(0, 0, 4), std::invalid_argument);
  EXPECT_THROW(require_odd_dimension(2), std::invalid_argument);
  try {
    require_odd_dimension(4);
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("odd d required"), std::string::npos);
  }
}

TEST(Crt, ProductActionFor15) {
  const auto f = crt_factorization(3, 5);
  const CMatrix<double> v = crt_permutation<double>(f);
  for (const auto& p : all_indices(15)) {
    const auto pair = crt_index(f, p.i, p.j);
    const CMatrix<double> lhs = v * displacement<double>(p) * v.adjoint();
    const CMatrix<double> rhs = Eigen::kroneckerProduct(displacement<double>({pair.ia, pair.ja, 3}),
                                                        displacement<double>({pair.ib, pair.jb, 5}));
    const auto [c, residual] = proportionality<double>(lhs, rhs);
    EXPECT_LT(residual, 1e-12);
    EXPECT_NEAR(std::abs(c), 1, 1e-12);
  }
}

TEST(Crt, IndexMapIsBijective) {
  const auto f = crt_factorization(3, 5);
  std::set<std::array<long, 4>> seen;
  for (const auto& p : all_indices(15)) {
    const auto q = crt_index(f, p.i, p.j);
    seen.insert({q.ia, q.ja, q.ib, q.jb});
  }
  EXPECT_EQ(seen.size(), 225u);
}
