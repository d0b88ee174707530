#include "sicladder/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sicladder::arith {

namespace {

Int checked_mul(Int a, Int b) {
  Int out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("arith: 64-bit overflow");
  return out;
}

}  // namespace

Int PrimePowerSplit::product() const {
  Int out = 1;
  for (const auto& f : factors)
    for (unsigned k = 0; k < f.exponent; ++k) out = checked_mul(out, f.prime);
  return out;
}

Int isqrt(Int n) {
  auto r = static_cast<Int>(std::sqrt(static_cast<long double>(n)));
  // fix up the floating estimate in both directions
  while (r > 0 && (r > 0xFFFFFFFFull || r * r > n)) --r;
  while (r + 1 <= 0xFFFFFFFFull && (r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_squarefree(Int n) {
  if (n == 0) return false;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return false;
  }
  return true;
}

SquarefreeSplit squarefree_decompose(Int n) {
  if (n == 0) throw std::invalid_argument("squarefree_decompose: n must be positive");
  SquarefreeSplit out;
  for (Int p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (unsigned k = 0; k < e / 2; ++k) out.m *= p;
    if (e % 2) out.d0 *= p;
  }
  out.d0 *= n;  // leftover prime (or 1)
  return out;
}

Int tower_discriminant(Int d) {
  if (d < 3) throw std::invalid_argument("tower_discriminant: d must be >= 3");
  return checked_mul(d + 1, d - 3);
}

std::vector<TowerEntry> tower_enumerate(Int d0, Int bound) {
  if (!is_squarefree(d0))
    throw std::invalid_argument("tower_enumerate: d0 = " + std::to_string(d0) +
                                " is not square-free");
  if (bound < 4) throw std::invalid_argument("tower_enumerate: bound must be >= 4");
  if (bound > kMaxBound) throw std::invalid_argument("tower_enumerate: bound too large");

  // d0 square-free, so sqfree(n) == d0 iff n / d0 is a perfect square.
  std::vector<TowerEntry> tower;
  for (Int d = 4; d <= bound; ++d) {
    const Int n = tower_discriminant(d);
    if (n % d0) continue;
    const Int q = n / d0;
    const Int m = isqrt(q);
    if (m * m != q) continue;
    tower.push_back({d, m, d0, 0, d});
  }

  for (std::size_t k = 0; k < tower.size(); ++k) {
    const std::size_t index = k + 1;
    const auto rung = static_cast<unsigned>(std::countr_zero(index));
    const std::size_t base_index = index >> rung;
    auto& e = tower[k];
    e.rung = rung;
    e.ladder_base = tower[base_index - 1].d;

    Int lifted = e.ladder_base;
    for (unsigned r = 0; r < rung; ++r) lifted = ladder_next(lifted);
    if (lifted != e.d)
      throw std::logic_error("tower_enumerate: rung from index disagrees with ladder lifting at d = " +
                             std::to_string(e.d));
  }
  return tower;
}

Int ladder_next(Int d) {
  if (d < 3) throw std::invalid_argument("ladder_next: d must be >= 3");
  return checked_mul(d, d - 2);
}

std::vector<Int> ladder(Int d, unsigned steps) {
  std::vector<Int> out{d};
  for (unsigned k = 0; k < steps; ++k) out.push_back(ladder_next(out.back()));
  return out;
}

PrimePowerSplit crt_split(Int d) {
  if (d < 2) throw std::invalid_argument("crt_split: d must be >= 2");
  PrimePowerSplit out{d, {}};
  Int n = d;
  for (Int p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.factors.push_back({p, e});
  }
  if (n > 1) out.factors.push_back({n, 1});
  return out;
}

std::vector<Edge> divisibility_graph(std::span<const Int> dims, bool transitive_reduction) {
  if (dims.empty()) throw std::invalid_argument("divisibility_graph: empty dimension list");
  std::vector<Int> nodes(dims.begin(), dims.end());
  for (Int d : nodes) {
    if (d == 0 || d % 2 == 0)
      throw std::invalid_argument("divisibility_graph: odd dimensions required, got " +
                                  std::to_string(d));
  }
  std::ranges::sort(nodes);
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (nodes[j] % nodes[i] == 0) edges.push_back({nodes[i], nodes[j]});

  if (transitive_reduction) {
    // a -> b is redundant if some c in the set has a | c | b
    std::erase_if(edges, [&](const Edge& e) {
      return std::ranges::any_of(nodes, [&](Int c) {
        return c != e.from && c != e.to && c % e.from == 0 && e.to % c == 0;
      });
    });
  }
  return edges;
}

std::string to_dot(std::span<const Int> dims, std::span<const Edge> edges) {
  std::vector<Int> nodes(dims.begin(), dims.end());
  std::ranges::sort(nodes);
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::ostringstream os;
  os << "digraph divisibility {\n";
  for (Int d : nodes) os << "  n" << d << " [label=\"d=" << d << "\"];\n";
  for (const auto& e : edges) os << "  n" << e.from << " -> n" << e.to << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace sicladder::arith
