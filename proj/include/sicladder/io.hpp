#ifndef SICLADDER_IO_HPP
#define SICLADDER_IO_HPP

// JSON files for fiducials, frames and matrices. Reals are written as
// decimal strings with 17 significant digits; readers accept strings or
// plain JSON numbers. Complex numbers are [re, im] pairs.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sicladder/clifford.hpp"
#include "sicladder/etf.hpp"
#include "sicladder/sic.hpp"

namespace sicladder::io {

using Json = nlohmann::ordered_json;

/// Input that cannot be parsed or has the wrong shape.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_real(double x);
double parse_real(const Json& j);

Json complex_to_json(Complex<double> z);
Complex<double> complex_from_json(const Json& j);

Json vector_to_json(const CVector<double>& v);
CVector<double> vector_from_json(const Json& j);

/// Rows of [re, im] pairs.
Json matrix_to_json(const CMatrix<double>& m);
CMatrix<double> matrix_from_json(const Json& j);

Json metadata_to_json(const sic::FiducialMetadata& m);
sic::FiducialMetadata metadata_from_json(const Json& j);

/// {"d", "vector", "metadata", ...extra}. `extra` holds any further top-level
/// keys so that loading and saving is lossless.
struct FiducialDocument {
  sic::Fiducial<double> fiducial;
  Json extra = Json::object();
};

Json fiducial_to_json(const FiducialDocument& doc);
FiducialDocument fiducial_from_json(const Json& j);

/// {"ambient_dim", "count", "vectors", "metadata"}.
struct FamilyDocument {
  etf::EtfFamily<double> family;
  Json metadata = Json::object();
};

Json family_to_json(const FamilyDocument& doc);
FamilyDocument family_from_json(const Json& j);

/// {"rows", "cols", "entries", "metadata"} for a Clifford unitary.
Json clifford_to_json(const clifford::CliffordUnitary<double>& u);

/// Serialized form: two-space indentation and a trailing newline.
std::string dump(const Json& j);

/// Throws std::runtime_error naming the path when it cannot be read.
Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
/// Writes via a temporary file in the same directory and renames it.
void write_text_file_atomic(const std::filesystem::path& path, const std::string& text);

FiducialDocument load_fiducial(const std::filesystem::path& path);
void save_fiducial(const std::filesystem::path& path, const FiducialDocument& doc);
FamilyDocument load_family(const std::filesystem::path& path);
void save_family(const std::filesystem::path& path, const FamilyDocument& doc);

}  // namespace sicladder::io

#endif  // SICLADDER_IO_HPP
