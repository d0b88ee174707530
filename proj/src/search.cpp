#include "sicladder/search.hpp"

#include <algorithm>
#include <future>
#include <thread>

#include "sicladder/clifford.hpp"
#include "sicladder/optimize.hpp"
#include "sicladder/random.hpp"

namespace sicladder::sic {

namespace {

// Descent stops at this excess over the Welch bound; the polish does the rest.
constexpr double kDescentExcess = 1e-14;
// Basins shallower than this are not worth polishing.
constexpr double kPolishExcess = 1e-5;

struct Space {
  std::string tag;
  CMatrix<double> basis;
};

}  // namespace

std::vector<ZaunerSubspace> zauner_search_subspaces(int d) {
  const auto u = clifford::zauner<double>(d);
  auto spaces = clifford::order3_eigenspaces(u.matrix);
  Eigen::Index largest = 0;
  for (const auto& s : spaces) largest = std::max(largest, s.basis.cols());
  std::vector<ZaunerSubspace> out;
  for (int k = 0; k < 3; ++k)
    if (spaces[std::size_t(k)].basis.cols() == largest) out.push_back({k, spaces[std::size_t(k)].basis});
  return out;
}

RestartResult run_restart(const FramePotentialObjective<double>& objective, std::uint64_t seed,
                          long max_iters, double tol) {
  const int d = objective.dimension();
  Rng rng(seed);
  const CVector<double> z0 = rng.unit_vector(objective.basis().cols());

  optimize::LbfgsOptions lo;
  lo.max_iters = max_iters;
  lo.target_value = welch_bound(d) + kDescentExcess;
  auto descent = optimize::lbfgs_minimize(objective, objective.to_real(z0), lo);

  RestartResult out;
  out.iterations = descent.iterations;
  RVector<double> x = descent.x;
  if (double(descent.value) - welch_bound(d) < kPolishExcess) {
    auto polish = optimize::levenberg_marquardt(objective, x);
    out.iterations += polish.iterations;
    x = polish.x;
  }

  out.psi = canonical_phase<double>(objective.embed(x).normalized());
  const auto report = verify_sic(Fiducial<double>::normalized(out.psi), tol);
  out.potential = report.frame_potential;
  out.residual = report.max_modulus_deviation;
  out.success = report.is_sic;
  return out;
}

SearchOutcome search_fiducial(int d, const SearchOptions& options) {
  require_odd_dimension(d);
  if (d > 200) throw std::invalid_argument("search_fiducial: d must be at most 200");
  if (options.restarts < 1) throw std::invalid_argument("search_fiducial: restarts must be positive");
  if (!(options.tol > 0)) throw std::invalid_argument("search_fiducial: tol must be positive");

  // Each phase is a list of (space, stream offset) attempts.
  std::vector<std::vector<Space>> phases;
  if (options.subspace) {
    if (options.subspace->rows() != d || options.subspace->cols() < 1)
      throw std::invalid_argument("search_fiducial: subspace basis has the wrong shape");
    phases.push_back({{options.subspace_tag, *options.subspace}});
  } else {
    const bool zauner = options.use_zauner_subspace.value_or(d >= 7);
    if (zauner) {
      std::vector<Space> restricted;
      for (auto& s : zauner_search_subspaces(d))
        restricted.push_back({"zauner:" + std::to_string(s.eigenvalue_index), std::move(s.basis)});
      phases.push_back(std::move(restricted));
    }
    phases.push_back({{"full", CMatrix<double>::Identity(d, d)}});
  }

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  SearchOutcome outcome;
  std::uint64_t stream_base = 0;
  for (const auto& spaces : phases) {
    std::vector<FramePotentialObjective<double>> objectives;
    for (const auto& s : spaces) objectives.emplace_back(d, s.basis);

    for (int first = 0; first < options.restarts; first += int(threads)) {
      const int last = std::min(options.restarts, first + int(threads));
      std::vector<std::future<RestartResult>> batch;
      for (int k = first; k < last; ++k) {
        const auto& objective = objectives[std::size_t(k) % objectives.size()];
        const std::uint64_t seed = split_seed(options.seed, stream_base + std::uint64_t(k));
        batch.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred,
                                   [&objective, seed, &options] {
                                     return run_restart(objective, seed, options.max_iters, options.tol);
                                   }));
      }
      for (int k = first; k < last; ++k) {
        RestartResult r = batch[std::size_t(k - first)].get();
        ++outcome.restarts_tried;
        outcome.best_potential = std::min(outcome.best_potential, r.potential);
        if (r.success && !outcome.fiducial) {
          FiducialMetadata meta;
          meta.seed = options.seed;
          meta.potential = r.potential;
          meta.residual = r.residual;
          meta.iterations = r.iterations;
          meta.restart = int(stream_base) + k;
          meta.subspace = spaces[std::size_t(k) % spaces.size()].tag;
          if (meta.subspace.starts_with("zauner")) meta.symmetry_tags.push_back("zauner");
          outcome.fiducial = Fiducial<double>::normalized(std::move(r.psi), std::move(meta));
        }
      }
      if (outcome.fiducial) return outcome;
    }
    stream_base += std::uint64_t(options.restarts);
  }
  return outcome;
}

}  // namespace sicladder::sic
