#ifndef SICLADDER_SEARCH_HPP
#define SICLADDER_SEARCH_HPP

// Numerical SIC fiducial search: frame-potential descent from random starts,
// polished by least squares on |<psi|D_p|psi>|^2 - 1/(d+1).

#include <cstdint>
#include <optional>
#include <string>

#include "sicladder/sic.hpp"

namespace sicladder::sic {

struct SearchOptions {
  std::uint64_t seed = 1;
  int restarts = 16;
  long max_iters = 5000;
  double tol = 1e-10;
  /// Restrict to the largest eigenspace of the Zauner unitary. Unset means
  /// on for d >= 7. On failure the full space is searched with the same budget.
  std::optional<bool> use_zauner_subspace;
  /// Search inside the span of these orthonormal columns instead; overrides
  /// the Zauner restriction and has no fallback.
  std::optional<CMatrix<double>> subspace;
  std::string subspace_tag = "custom";
  /// Restarts evaluated concurrently; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

struct SearchOutcome {
  std::optional<Fiducial<double>> fiducial;
  int restarts_tried = 0;
  /// Lowest potential reached by any restart (useful when nothing is found).
  double best_potential = std::numeric_limits<double>::infinity();

  bool found() const { return fiducial.has_value(); }
};

/// Deterministic in (d, options). Restart k starts from split_seed(seed, k)
/// (full-space fallback restarts use streams restarts + k); the successful
/// restart with the lowest index wins. Throws std::invalid_argument on bad
/// input; a search that finds nothing returns an empty outcome.
SearchOutcome search_fiducial(int d, const SearchOptions& options = {});

/// One restart from a given start; exposed for tests.
struct RestartResult {
  CVector<double> psi;
  double potential = 0;
  double residual = 0;
  long iterations = 0;
  bool success = false;
};
RestartResult run_restart(const FramePotentialObjective<double>& objective, std::uint64_t seed,
                          long max_iters, double tol);

/// Orthonormal basis of the eigenspace the Zauner-restricted search uses for
/// the given attempt: the largest eigenspaces, cycled when several tie.
struct ZaunerSubspace {
  int eigenvalue_index = 0;  // eigenvalue exp(2 pi i k / 3)
  CMatrix<double> basis;
};
std::vector<ZaunerSubspace> zauner_search_subspaces(int d);

}  // namespace sicladder::sic

#endif  // SICLADDER_SEARCH_HPP
