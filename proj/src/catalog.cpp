#include "sicladder/catalog.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>

#include <openssl/evp.h>

namespace sicladder::catalog {

namespace {

constexpr std::size_t kNameDigits = 16;

io::Json verification_to_json(const Verification& v) {
  io::Json j = io::Json::object();
  j["is_sic"] = v.is_sic;
  j["max_modulus_deviation"] = io::format_real(v.max_modulus_deviation);
  j["frame_potential"] = io::format_real(v.frame_potential);
  j["tight_frame_residual"] = io::format_real(v.tight_frame_residual);
  j["tol"] = io::format_real(v.tol);
  return j;
}

Verification verification_from_json(const io::Json& j) {
  Verification v;
  v.is_sic = j.at("is_sic").get<bool>();
  v.max_modulus_deviation = io::parse_real(j.at("max_modulus_deviation"));
  v.frame_potential = io::parse_real(j.at("frame_potential"));
  v.tight_frame_residual = io::parse_real(j.at("tight_frame_residual"));
  v.tol = io::parse_real(j.at("tol"));
  return v;
}

Listing read_entry(const std::filesystem::path& file, int d) {
  Listing out;
  out.entry.d = d;
  out.entry.file = file;
  try {
    const std::string bytes = io::read_text_file(file);
    out.entry.file_hash = sha256_hex(bytes);
    if (file.stem().string() != out.entry.file_hash.substr(0, kNameDigits)) {
      out.corrupt = true;
      out.problem = "hash mismatch";
      return out;
    }
    const auto doc = io::fiducial_from_json(io::Json::parse(bytes));
    if (doc.fiducial.d != d) throw io::FormatError("stored in the directory of another dimension");
    const io::Json& meta = doc.extra.at("catalog");
    out.entry.created = meta.at("created").get<std::string>();
    out.entry.verification = verification_from_json(meta.at("verification"));
    out.entry.seed_provenance = meta.at("seed_provenance");
  } catch (const std::exception& e) {
    out.corrupt = true;
    out.problem = e.what();
  }
  return out;
}

}  // namespace

std::filesystem::path default_root() {
  const char* env = std::getenv(kPathVariable);
  return env && *env ? std::filesystem::path(env) : std::filesystem::path(kDefaultPath);
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < length; ++k) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 15];
  }
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, int(ms));
  return out;
}

CatalogEntry Catalog::put(const sic::Fiducial<double>& fiducial, double tol, const io::Json& search_options,
                          const std::string& created) {
  const auto report = sic::verify_sic(fiducial, tol);
  if (!report.is_sic) throw std::invalid_argument("catalog put: fiducial does not verify as a SIC");

  CatalogEntry entry;
  entry.d = fiducial.d;
  entry.created = created.empty() ? utc_timestamp() : created;
  entry.verification = {report.is_sic, report.max_modulus_deviation, report.frame_potential,
                        report.tight_frame_residual, tol};
  entry.seed_provenance = search_options;

  io::FiducialDocument doc{fiducial, io::Json::object()};
  io::Json meta = io::Json::object();
  meta["created"] = entry.created;
  meta["verification"] = verification_to_json(entry.verification);
  meta["seed_provenance"] = search_options;
  doc.extra["catalog"] = std::move(meta);
  const std::string bytes = io::dump(io::fiducial_to_json(doc));

  entry.file_hash = sha256_hex(bytes);
  const auto dir = root_ / ("d" + std::to_string(fiducial.d));
  std::filesystem::create_directories(dir);
  entry.file = dir / (entry.file_hash.substr(0, kNameDigits) + ".json");
  io::write_text_file_atomic(entry.file, bytes);
  return entry;
}

std::vector<Listing> Catalog::list() const {
  std::vector<Listing> out;
  if (!std::filesystem::is_directory(root_)) return out;
  for (const auto& sub : std::filesystem::directory_iterator(root_)) {
    const std::string name = sub.path().filename().string();
    if (!sub.is_directory() || name.size() < 2 || name[0] != 'd') continue;
    int d = 0;
    try {
      std::size_t used = 0;
      d = std::stoi(name.substr(1), &used);
      if (used != name.size() - 1) continue;
    } catch (const std::exception&) {
      continue;
    }
    for (const auto& file : std::filesystem::directory_iterator(sub.path()))
      if (file.is_regular_file() && file.path().extension() == ".json" && file.path().filename().string()[0] != '.')
        out.push_back(read_entry(file.path(), d));
  }
  std::sort(out.begin(), out.end(), [](const Listing& a, const Listing& b) {
    return std::tie(a.entry.d, a.entry.created, a.entry.file) < std::tie(b.entry.d, b.entry.created, b.entry.file);
  });
  return out;
}

std::optional<CatalogEntry> Catalog::get(int d) const {
  std::optional<CatalogEntry> best;
  for (const auto& l : list()) {
    if (l.corrupt || l.entry.d != d) continue;
    if (!best || l.entry.verification.max_modulus_deviation < best->verification.max_modulus_deviation)
      best = l.entry;
  }
  return best;
}

io::FiducialDocument Catalog::load(const CatalogEntry& entry) const { return io::load_fiducial(entry.file); }

}  // namespace sicladder::catalog
