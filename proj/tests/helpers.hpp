#ifndef SICLADDER_TESTS_HELPERS_HPP
#define SICLADDER_TESTS_HELPERS_HPP

#include <cmath>
#include <filesystem>
#include <map>
#include <string>

#include <unistd.h>

#include "sicladder/random.hpp"
#include "sicladder/search.hpp"
#include "sicladder/sic.hpp"

namespace sicladder::fixtures {

/// (0, 1, -1)/sqrt(2): a SIC fiducial in dimension 3.
inline sic::Fiducial<double> hesse() {
  CVector<double> v(3);
  v << 0, 1, -1;
  return sic::Fiducial<double>::normalized(v);
}

inline sic::Fiducial<double> basis_vector(int d, int k = 0) {
  CVector<double> v = CVector<double>::Zero(d);
  v(k) = 1;
  return sic::Fiducial<double>::from_unit(v);
}

/// Searched fiducials, memoized per (d, seed).
inline const sic::Fiducial<double>& found_sic(int d, std::uint64_t seed = 1) {
  static std::map<std::pair<int, std::uint64_t>, sic::Fiducial<double>> cache;
  auto it = cache.find({d, seed});
  if (it == cache.end()) {
    sic::SearchOptions o;
    o.seed = seed;
    auto outcome = sic::search_fiducial(d, o);
    if (!outcome.fiducial) throw std::runtime_error("test fixture: no SIC found for d = " + std::to_string(d));
    it = cache.emplace(std::make_pair(d, seed), *outcome.fiducial).first;
  }
  return it->second;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sicladder-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace sicladder::fixtures

#endif  // SICLADDER_TESTS_HELPERS_HPP
