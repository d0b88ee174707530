#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "sicladder/arith.hpp"

using namespace sicladder::arith;

namespace {

std::vector<Int> dims_of(const std::vector<TowerEntry>& tower) {
  std::vector<Int> out;
  for (const auto& e : tower) out.push_back(e.d);
  return out;
}

Int lift(Int d, unsigned times) {
  for (unsigned k = 0; k < times; ++k) d = ladder_next(d);
  return d;
}

}  // namespace

TEST(SquarefreeDecompose, Examples) {
  EXPECT_EQ(squarefree_decompose(45), (SquarefreeSplit{3, 5}));
  EXPECT_EQ(squarefree_decompose(12), (SquarefreeSplit{2, 3}));
  EXPECT_EQ(squarefree_decompose(320), (SquarefreeSplit{8, 5}));
  EXPECT_EQ(squarefree_decompose(1), (SquarefreeSplit{1, 1}));
  EXPECT_THROW(squarefree_decompose(0), std::invalid_argument);
}

TEST(SquarefreeDecompose, ReconstructsAndIsSquarefree) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 2000; ++k) {
    const Int n = 1 + rng() % 5000000;
    const auto s = squarefree_decompose(n);
    EXPECT_EQ(s.m * s.m * s.d0, n);
    EXPECT_TRUE(is_squarefree(s.d0));
  }
}

TEST(IsSquarefree, SmallValues) {
  const std::vector<Int> yes{1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 30, 105};
  const std::vector<Int> no{4, 8, 9, 12, 16, 18, 20, 25, 27, 45, 49, 50};
  for (Int n : yes) EXPECT_TRUE(is_squarefree(n)) << n;
  for (Int n : no) EXPECT_FALSE(is_squarefree(n)) << n;
}

TEST(Isqrt, ExactOnBoundaries) {
  EXPECT_EQ(isqrt(0), 0u);
  EXPECT_EQ(isqrt(15), 3u);
  EXPECT_EQ(isqrt(16), 4u);
  const Int big = 4294967295ull;  // 2^32 - 1
  EXPECT_EQ(isqrt(big * big), big);
  EXPECT_EQ(isqrt(big * big - 1), big - 1);
  EXPECT_EQ(isqrt(~Int{0}), big);
}

TEST(TowerEnumerate, FivesTower) {
  EXPECT_EQ(dims_of(tower_enumerate(5, 1000)), (std::vector<Int>{4, 8, 19, 48, 124, 323, 844}));
  EXPECT_EQ(dims_of(tower_enumerate(5, 16000)),
            (std::vector<Int>{4, 8, 19, 48, 124, 323, 844, 2208, 5779, 15128}));
}

TEST(TowerEnumerate, ThreesTower) {
  EXPECT_EQ(dims_of(tower_enumerate(3, 600000)),
            (std::vector<Int>{5, 15, 53, 195, 725, 2703, 10085, 37635, 140453, 524175}));
  EXPECT_EQ(dims_of(tower_enumerate(3, 10)), (std::vector<Int>{5}));
}

TEST(TowerEnumerate, RungsAndBases) {
  const auto t = tower_enumerate(3, 600000);
  const std::vector<unsigned> rungs{0, 1, 0, 2, 0, 1, 0, 3, 0, 1};
  const std::vector<Int> bases{5, 5, 53, 5, 725, 53, 10085, 5, 140453, 725};
  for (std::size_t k = 0; k < t.size(); ++k) {
    EXPECT_EQ(t[k].rung, rungs[k]) << t[k].d;
    EXPECT_EQ(t[k].ladder_base, bases[k]) << t[k].d;
  }
}

TEST(TowerEnumerate, EntryInvariants) {
  for (Int d0 : {2ull, 3ull, 5ull, 6ull, 7ull, 10ull, 21ull}) {
    for (const auto& e : tower_enumerate(d0, 1000000)) {
      EXPECT_EQ((e.d + 1) * (e.d - 3), e.m * e.m * e.d0);
      EXPECT_EQ(e.d0, d0);
      EXPECT_EQ(lift(e.ladder_base, e.rung), e.d);
    }
  }
}

TEST(TowerEnumerate, RungZeroLaddersStayInTower) {
  const Int bound = 1000000;
  for (Int d0 : {2ull, 3ull, 5ull, 6ull, 7ull, 10ull}) {
    const auto tower = tower_enumerate(d0, bound);
    const auto dims = dims_of(tower);
    for (const auto& e : tower) {
      if (e.rung != 0) continue;
      for (Int x = ladder_next(e.d); x <= bound; x = ladder_next(x))
        EXPECT_TRUE(std::binary_search(dims.begin(), dims.end(), x)) << "d0=" << d0 << " missing " << x;
    }
  }
}

TEST(TowerEnumerate, MatchesTrialDivisionScan) {
  for (Int d0 : {2ull, 3ull, 5ull, 7ull}) {
    std::vector<Int> brute;
    for (Int d = 4; d <= 20000; ++d)
      if (squarefree_decompose((d + 1) * (d - 3)).d0 == d0) brute.push_back(d);
    EXPECT_EQ(dims_of(tower_enumerate(d0, 20000)), brute) << d0;
  }
}

TEST(TowerEnumerate, Rejects) {
  EXPECT_THROW(tower_enumerate(4, 100), std::invalid_argument);
  EXPECT_THROW(tower_enumerate(12, 100), std::invalid_argument);
  EXPECT_THROW(tower_enumerate(5, 3), std::invalid_argument);
  EXPECT_THROW(tower_enumerate(5, kMaxBound + 1), std::invalid_argument);
}

TEST(Ladder, Examples) {
  EXPECT_EQ(ladder_next(5), 15u);
  EXPECT_EQ(ladder_next(15), 195u);
  EXPECT_EQ(ladder_next(3), 3u);
  EXPECT_EQ(ladder(5, 2), (std::vector<Int>{5, 15, 195}));
  EXPECT_EQ(ladder(53, 1), (std::vector<Int>{53, 2703}));
  EXPECT_EQ(ladder(8, 1), (std::vector<Int>{8, 48}));
  EXPECT_EQ(ladder(19, 1), (std::vector<Int>{19, 323}));
  EXPECT_THROW(ladder_next(2), std::invalid_argument);
  EXPECT_THROW(ladder(Int{1} << 40, 2), std::overflow_error);
}

TEST(Ladder, PreservesSquarefreePart) {
  for (Int d = 5; d <= 10000; d += 2)
    EXPECT_EQ(squarefree_decompose(tower_discriminant(ladder_next(d))).d0,
              squarefree_decompose(tower_discriminant(d)).d0)
        << d;
}

TEST(CrtSplit, Examples) {
  EXPECT_EQ(crt_split(15).factors, (std::vector<PrimePower>{{3, 1}, {5, 1}}));
  EXPECT_EQ(crt_split(323).factors, (std::vector<PrimePower>{{17, 1}, {19, 1}}));
  EXPECT_EQ(crt_split(9).factors, (std::vector<PrimePower>{{3, 2}}));
  EXPECT_EQ(crt_split(524175).product(), 524175u);
  EXPECT_THROW(crt_split(1), std::invalid_argument);
}

TEST(CrtSplit, MergesForCoprimeFactors) {
  std::mt19937_64 rng(3);
  int checked = 0;
  while (checked < 500) {
    const Int a = 2 + rng() % 3000, b = 2 + rng() % 3000;
    if (std::gcd(a, b) != 1) continue;
    auto merged = crt_split(a).factors;
    const auto fb = crt_split(b).factors;
    merged.insert(merged.end(), fb.begin(), fb.end());
    std::sort(merged.begin(), merged.end(), [](const auto& x, const auto& y) { return x.prime < y.prime; });
    EXPECT_EQ(crt_split(a * b).factors, merged);
    ++checked;
  }
}

TEST(DivisibilityGraph, Examples) {
  const std::vector<Int> chain{5, 15, 195};
  EXPECT_EQ(divisibility_graph(chain), (std::vector<Edge>{{5, 15}, {5, 195}, {15, 195}}));
  EXPECT_EQ(divisibility_graph(chain, true), (std::vector<Edge>{{5, 15}, {15, 195}}));
  EXPECT_TRUE(divisibility_graph(std::vector<Int>{53}).empty());
  EXPECT_TRUE(divisibility_graph(std::vector<Int>{5, 53}).empty());
  EXPECT_THROW(divisibility_graph(std::vector<Int>{5, 8}), std::invalid_argument);
  EXPECT_THROW(divisibility_graph(std::vector<Int>{}), std::invalid_argument);
}

TEST(DivisibilityGraph, LaddersAreEdges) {
  const std::vector<Int> dims{5, 15, 53, 195, 2703, 37635};
  const auto edges = divisibility_graph(dims);
  for (Edge e : {Edge{5, 15}, Edge{15, 195}, Edge{53, 2703}, Edge{195, 37635}})
    EXPECT_NE(std::find(edges.begin(), edges.end(), e), edges.end()) << e.from << "->" << e.to;
}

TEST(ToDot, LabelsAndDirection) {
  const std::vector<Int> dims{5, 15};
  const auto edges = divisibility_graph(dims);
  const std::string dot = to_dot(dims, edges);
  EXPECT_NE(dot.find("label=\"d=5\""), std::string::npos);
  EXPECT_NE(dot.find("label=\"d=15\""), std::string::npos);
  EXPECT_NE(dot.find("n5 -> n15"), std::string::npos);
}
