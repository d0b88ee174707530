#ifndef SICLADDER_CATALOG_HPP
#define SICLADDER_CATALOG_HPP

// On-disk fiducial catalog: <root>/d<d>/<hash>.json, where <hash> is the first
// 16 hex digits of the SHA-256 of the file bytes. Each file is a fiducial
// document with an extra "catalog" object holding the creation time, the
// verification summary and the search options that produced it.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sicladder/io.hpp"

namespace sicladder::catalog {

/// Environment variable that overrides the default catalog location.
inline constexpr const char* kPathVariable = "SICLADDER_CATALOG";
inline constexpr const char* kDefaultPath = "sic-catalog";

/// The env override if set, otherwise kDefaultPath.
std::filesystem::path default_root();

std::string sha256_hex(const std::string& bytes);

struct Verification {
  bool is_sic = false;
  double max_modulus_deviation = 0;
  double frame_potential = 0;
  double tight_frame_residual = 0;
  double tol = 0;
};

struct CatalogEntry {
  int d = 0;
  std::string file_hash;  // full hex digest of the file bytes
  std::string created;    // ISO-8601 UTC, millisecond resolution
  Verification verification;
  io::Json seed_provenance = io::Json::object();
  std::filesystem::path file;
};

struct Listing {
  CatalogEntry entry;
  bool corrupt = false;
  std::string problem;
};

class Catalog {
 public:
  explicit Catalog(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }

  /// Verifies the fiducial at `tol` and stores it. Storing identical content
  /// twice yields the same entry. Throws std::invalid_argument for non-SICs.
  CatalogEntry put(const sic::Fiducial<double>& fiducial, double tol, const io::Json& search_options,
                   const std::string& created = "");

  /// All files, sorted by (d, created, file name); corrupt files are flagged.
  std::vector<Listing> list() const;

  /// The intact entry with the lowest residual for d (earliest created on ties).
  std::optional<CatalogEntry> get(int d) const;

  /// The stored fiducial of an entry.
  io::FiducialDocument load(const CatalogEntry& entry) const;

 private:
  std::filesystem::path root_;
};

std::string utc_timestamp();

}  // namespace sicladder::catalog

#endif  // SICLADDER_CATALOG_HPP
