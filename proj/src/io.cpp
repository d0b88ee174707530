#include "sicladder/io.hpp"

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace sicladder::io {

namespace {

void expect(bool ok, const std::string& what) {
  if (!ok) throw FormatError(what);
}

const Json& field(const Json& j, const char* key) {
  expect(j.is_object() && j.contains(key), std::string("missing field \"") + key + "\"");
  return j.at(key);
}

long integer_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  expect(v.is_number_integer(), std::string("field \"") + key + "\" must be an integer");
  return v.get<long>();
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_real(const Json& j) {
  if (j.is_number()) return j.get<double>();
  expect(j.is_string(), "expected a real number or a decimal string");
  const auto& s = j.get_ref<const std::string&>();
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  expect(!s.empty() && end == s.c_str() + s.size() && !(errno == ERANGE && std::isinf(x)), "malformed real \"" + s + "\"");
  return x;
}

Json complex_to_json(Complex<double> z) { return Json::array({format_real(z.real()), format_real(z.imag())}); }

Complex<double> complex_from_json(const Json& j) {
  expect(j.is_array() && j.size() == 2, "complex numbers are [re, im] pairs");
  return {parse_real(j[0]), parse_real(j[1])};
}

Json vector_to_json(const CVector<double>& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(complex_to_json(v(k)));
  return out;
}

CVector<double> vector_from_json(const Json& j) {
  expect(j.is_array(), "a vector is an array of [re, im] pairs");
  CVector<double> v(Eigen::Index(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(Eigen::Index(k)) = complex_from_json(j[k]);
  return v;
}

Json matrix_to_json(const CMatrix<double>& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_to_json(m.row(r).transpose()));
  return rows;
}

CMatrix<double> matrix_from_json(const Json& j) {
  expect(j.is_array() && !j.empty(), "a matrix is a non-empty array of rows");
  const std::size_t cols = j[0].size();
  CMatrix<double> m(Eigen::Index(j.size()), Eigen::Index(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    expect(j[r].is_array() && j[r].size() == cols, "matrix rows must have equal length");
    m.row(Eigen::Index(r)) = vector_from_json(j[r]).transpose();
  }
  return m;
}

Json metadata_to_json(const sic::FiducialMetadata& m) {
  Json j = Json::object();
  j["seed"] = m.seed ? Json(*m.seed) : Json(nullptr);
  j["potential"] = std::isnan(m.potential) ? Json(nullptr) : Json(format_real(m.potential));
  j["residual"] = std::isnan(m.residual) ? Json(nullptr) : Json(format_real(m.residual));
  j["symmetry_tags"] = m.symmetry_tags;
  j["iterations"] = m.iterations;
  j["restart"] = m.restart;
  j["subspace"] = m.subspace;
  return j;
}

sic::FiducialMetadata metadata_from_json(const Json& j) {
  expect(j.is_object(), "metadata must be an object");
  sic::FiducialMetadata m;
  if (j.contains("seed") && !j["seed"].is_null()) {
    expect(j["seed"].is_number_unsigned(), "metadata seed must be a non-negative integer");
    m.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("potential") && !j["potential"].is_null()) m.potential = parse_real(j["potential"]);
  if (j.contains("residual") && !j["residual"].is_null()) m.residual = parse_real(j["residual"]);
  if (j.contains("symmetry_tags")) {
    expect(j["symmetry_tags"].is_array(), "symmetry_tags must be an array");
    for (const auto& t : j["symmetry_tags"]) {
      expect(t.is_string(), "symmetry tags must be strings");
      m.symmetry_tags.push_back(t.get<std::string>());
    }
  }
  if (j.contains("iterations")) m.iterations = integer_field(j, "iterations");
  if (j.contains("restart")) m.restart = int(integer_field(j, "restart"));
  if (j.contains("subspace")) {
    expect(j["subspace"].is_string(), "subspace must be a string");
    m.subspace = j["subspace"].get<std::string>();
  }
  return m;
}

Json fiducial_to_json(const FiducialDocument& doc) {
  Json j = Json::object();
  j["d"] = doc.fiducial.d;
  j["vector"] = vector_to_json(doc.fiducial.vector);
  j["metadata"] = metadata_to_json(doc.fiducial.metadata);
  for (const auto& [key, value] : doc.extra.items()) j[key] = value;
  return j;
}

FiducialDocument fiducial_from_json(const Json& j) {
  expect(j.is_object(), "a fiducial file is a JSON object");
  const long d = integer_field(j, "d");
  CVector<double> v = vector_from_json(field(j, "vector"));
  expect(v.size() == d, "vector length does not match d");
  FiducialDocument doc;
  doc.fiducial.d = int(d);
  doc.fiducial.vector = std::move(v);
  if (j.contains("metadata")) doc.fiducial.metadata = metadata_from_json(j["metadata"]);
  for (const auto& [key, value] : j.items())
    if (key != "d" && key != "vector" && key != "metadata") doc.extra[key] = value;
  return doc;
}

Json family_to_json(const FamilyDocument& doc) {
  const auto& f = doc.family;
  Json j = Json::object();
  j["ambient_dim"] = f.ambient_dim;
  j["count"] = f.count;
  Json vectors = Json::array();
  for (Eigen::Index k = 0; k < f.vectors.cols(); ++k) vectors.push_back(vector_to_json(f.vectors.col(k)));
  j["vectors"] = std::move(vectors);
  j["metadata"] = doc.metadata;
  return j;
}

FamilyDocument family_from_json(const Json& j) {
  expect(j.is_object(), "a family file is a JSON object");
  const long dim = integer_field(j, "ambient_dim");
  const long count = integer_field(j, "count");
  const Json& vectors = field(j, "vectors");
  expect(dim >= 1 && count >= 1, "ambient_dim and count must be positive");
  expect(vectors.is_array() && long(vectors.size()) == count, "vectors length does not match count");
  CMatrix<double> m(dim, count);
  for (long k = 0; k < count; ++k) {
    CVector<double> v = vector_from_json(vectors[std::size_t(k)]);
    expect(v.size() == dim, "vector length does not match ambient_dim");
    m.col(k) = v;
  }
  FamilyDocument doc;
  doc.family = etf::make_family<double>(std::move(m));
  if (j.contains("metadata")) doc.metadata = j["metadata"];
  return doc;
}

Json clifford_to_json(const clifford::CliffordUnitary<double>& u) {
  Json j = Json::object();
  j["rows"] = u.matrix.rows();
  j["cols"] = u.matrix.cols();
  j["entries"] = matrix_to_json(u.matrix);
  Json meta = Json::object();
  meta["d"] = u.F.d;
  meta["F"] = Json::array({Json::array({u.F.alpha, u.F.beta}), Json::array({u.F.gamma, u.F.delta})});
  meta["phase_convention"] =
      u.phase_convention == clifford::PhaseConvention::unit_cube ? "unit_cube" : "first_entry_positive";
  j["metadata"] = std::move(meta);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file_atomic(const std::filesystem::path& path, const std::string& text) {
  static std::atomic<unsigned> counter{0};
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const auto tmp = dir / ("." + path.filename().string() + ".tmp-" + std::to_string(::getpid()) + "-" +
                          std::to_string(counter++));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot write " + path.string());
  }
}

FiducialDocument load_fiducial(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  try {
    return fiducial_from_json(j);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_fiducial(const std::filesystem::path& path, const FiducialDocument& doc) {
  write_text_file_atomic(path, dump(fiducial_to_json(doc)));
}

FamilyDocument load_family(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  try {
    return family_from_json(j);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_family(const std::filesystem::path& path, const FamilyDocument& doc) {
  write_text_file_atomic(path, dump(family_to_json(doc)));
}

}  // namespace sicladder::io
