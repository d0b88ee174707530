#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"
#include "sicladder/clifford.hpp"
#include "sicladder/search.hpp"

using namespace sicladder;
using namespace sicladder::sic;

TEST(SplitSeed, DistinctStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(split_seed(1, k));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(split_seed(1, 0), split_seed(1, 0));
  EXPECT_NE(split_seed(1, 0), split_seed(2, 0));
}

TEST(Search, D3SeedOne) {
  SearchOptions o;
  o.seed = 1;
  const auto r = search_fiducial(3, o);
  ASSERT_TRUE(r.found());
  EXPECT_NEAR(r.fiducial->metadata.potential, 1.5, 1e-10);
  EXPECT_TRUE(verify_sic(*r.fiducial, o.tol).is_sic);
  EXPECT_EQ(r.fiducial->metadata.seed, 1u);
  EXPECT_GE(r.fiducial->metadata.restart, 0);
}

TEST(Search, D5ZaunerSubspace) {
  SearchOptions o;
  o.seed = 1;
  o.use_zauner_subspace = true;
  const auto r = search_fiducial(5, o);
  ASSERT_TRUE(r.found());
  EXPECT_TRUE(verify_sic(*r.fiducial, 1e-10).is_sic);
  EXPECT_TRUE(check_projective_symmetry(*r.fiducial, clifford::zauner<double>(5).matrix).symmetric);
  EXPECT_EQ(r.fiducial->metadata.symmetry_tags, std::vector<std::string>{"zauner"});
}

TEST(Search, D7ThirtyTwoRestarts) {
  SearchOptions o;
  o.restarts = 32;
  const auto r = search_fiducial(7, o);
  ASSERT_TRUE(r.found());
  EXPECT_TRUE(verify_sic(*r.fiducial, o.tol).is_sic);
  EXPECT_LT(r.fiducial->metadata.potential - welch_bound(7), 1e-12);
}

TEST(Search, FullSpaceWhenZaunerDisabled) {
  SearchOptions o;
  o.use_zauner_subspace = false;
  const auto r = search_fiducial(7, o);
  ASSERT_TRUE(r.found());
  EXPECT_EQ(r.fiducial->metadata.subspace, "full");
  EXPECT_TRUE(r.fiducial->metadata.symmetry_tags.empty());
}

TEST(Search, Deterministic) {
  for (int d : {5, 7}) {
    SearchOptions o;
    o.seed = 42;
    const auto a = search_fiducial(d, o);
    const auto b = search_fiducial(d, o);
    ASSERT_TRUE(a.found() && b.found());
    EXPECT_EQ(a.fiducial->vector, b.fiducial->vector);
    EXPECT_EQ(a.fiducial->metadata.restart, b.fiducial->metadata.restart);
    EXPECT_EQ(a.fiducial->metadata.iterations, b.fiducial->metadata.iterations);
    EXPECT_EQ(a.fiducial->metadata.potential, b.fiducial->metadata.potential);
    EXPECT_EQ(a.fiducial->metadata.residual, b.fiducial->metadata.residual);
  }
}

TEST(Search, ThreadCountDoesNotChangeResult) {
  SearchOptions one, four;
  one.threads = 1;
  four.threads = 4;
  one.seed = four.seed = 9;
  const auto a = search_fiducial(7, one);
  const auto b = search_fiducial(7, four);
  ASSERT_TRUE(a.found() && b.found());
  EXPECT_EQ(a.fiducial->vector, b.fiducial->vector);
  EXPECT_EQ(a.fiducial->metadata.restart, b.fiducial->metadata.restart);
}

TEST(Search, NotFoundIsData) {
  SearchOptions o;
  o.max_iters = 1;
  o.restarts = 2;
  o.use_zauner_subspace = false;
  const auto r = search_fiducial(9, o);
  EXPECT_FALSE(r.found());
  EXPECT_EQ(r.restarts_tried, 2);
  EXPECT_GT(r.best_potential, welch_bound(9));
}

TEST(Search, RejectsInvalidInput) {
  EXPECT_THROW(search_fiducial(4), std::invalid_argument);
  EXPECT_THROW(search_fiducial(1), std::invalid_argument);
  EXPECT_THROW(search_fiducial(201), std::invalid_argument);
  SearchOptions o;
  o.restarts = 0;
  EXPECT_THROW(search_fiducial(5, o), std::invalid_argument);
  o.restarts = 1;
  o.tol = 0;
  EXPECT_THROW(search_fiducial(5, o), std::invalid_argument);
  o.tol = 1e-10;
  o.subspace = CMatrix<double>::Identity(3, 3);
  EXPECT_THROW(search_fiducial(5, o), std::invalid_argument);
}

TEST(Search, CanonicalPhaseOfResult) {
  const auto& psi = fixtures::found_sic(7);
  Eigen::Index k;
  psi.vector.cwiseAbs().maxCoeff(&k);
  EXPECT_NEAR(psi.vector(k).imag(), 0, 1e-15);
  EXPECT_GT(psi.vector(k).real(), 0);
  EXPECT_NEAR(psi.vector.norm(), 1, 1e-14);
}

TEST(ZaunerSubspaces, LargestEigenspaces) {
  const auto s7 = zauner_search_subspaces(7);
  ASSERT_EQ(s7.size(), 1u);
  EXPECT_EQ(s7[0].basis.cols(), 3);
  const auto s5 = zauner_search_subspaces(5);
  EXPECT_EQ(s5.size(), 2u);  // two tied eigenspaces of dimension 2
}

TEST(Optimizer, RestartReachesWelchBound) {
  const FramePotentialObjective<double> f(5);
  const auto r = run_restart(f, split_seed(1, 0), 5000, 1e-10);
  EXPECT_TRUE(r.success);
  EXPECT_LT(std::abs(r.potential - welch_bound(5)), 1e-12);
  EXPECT_LT(r.residual, 1e-10);
}
