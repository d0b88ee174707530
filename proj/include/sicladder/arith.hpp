#ifndef SICLADDER_ARITH_HPP
#define SICLADDER_ARITH_HPP

// Integer arithmetic for dimension towers: square-free parts of
// (d+1)(d-3), ladders d -> d(d-2), prime-power splits and the divisibility
// order between dimensions.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sicladder::arith {

using Int = std::uint64_t;

/// Largest tower bound accepted; keeps (d+1)(d-3) and d(d-2) inside 64 bits.
inline constexpr Int kMaxBound = Int{1} << 31;

struct SquarefreeSplit {
  Int m = 1;
  Int d0 = 1;
  friend bool operator==(const SquarefreeSplit&, const SquarefreeSplit&) = default;
};

struct TowerEntry {
  Int d = 0;
  Int m = 0;
  Int d0 = 0;
  unsigned rung = 0;
  Int ladder_base = 0;
  friend bool operator==(const TowerEntry&, const TowerEntry&) = default;
};

struct PrimePower {
  Int prime = 0;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct PrimePowerSplit {
  Int d = 0;
  std::vector<PrimePower> factors;  // primes strictly increasing

  Int product() const;
  friend bool operator==(const PrimePowerSplit&, const PrimePowerSplit&) = default;
};

struct Edge {
  Int from = 0;  // divisor
  Int to = 0;    // multiple
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Floor of the square root, exact for the whole 64-bit range.
Int isqrt(Int n);

bool is_squarefree(Int n);

/// n = m^2 * d0 with d0 square-free. Requires n >= 1.
SquarefreeSplit squarefree_decompose(Int n);

/// (d+1)(d-3), checked for overflow. Requires d >= 3.
Int tower_discriminant(Int d);

/// All d in [4, bound] whose (d+1)(d-3) has square-free part d0, ascending.
/// Each entry carries its rung and ladder base. The rung is read off the
/// 1-based position i = 2^r (2n+1) in the tower and cross-checked against
/// explicit lifting; a mismatch throws std::logic_error.
std::vector<TowerEntry> tower_enumerate(Int d0, Int bound);

/// d -> d(d-2). Requires d >= 3; 3 is the fixed point.
Int ladder_next(Int d);

/// d followed by `steps` successive ladder lifts.
std::vector<Int> ladder(Int d, unsigned steps);

PrimePowerSplit crt_split(Int d);

/// Edges (a, b) with a | b, a != b over the distinct odd entries of `dims`,
/// sorted lexicographically. With `transitive_reduction` only the covering
/// relations are kept. Even entries are rejected.
std::vector<Edge> divisibility_graph(std::span<const Int> dims,
                                     bool transitive_reduction = false);

/// Graphviz digraph with nodes labelled "d=<n>" and edges divisor -> multiple.
std::string to_dot(std::span<const Int> dims, std::span<const Edge> edges);

}  // namespace sicladder::arith

#endif  // SICLADDER_ARITH_HPP
