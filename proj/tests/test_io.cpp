#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "helpers.hpp"
#include "sicladder/io.hpp"

using namespace sicladder;
using namespace sicladder::io;

TEST(Reals, FormatRoundTripsBitwise) {
  std::mt19937_64 bits(12);
  std::vector<double> xs = {0.0, -0.0, 1.0, 1.0 / 3, 1e-300, -2.5e300, 5e-324, std::nextafter(1.0, 2.0)};
  for (int k = 0; k < 10000; ++k) xs.push_back(std::bit_cast<double>(bits()));
  for (double x : xs) {
    if (!std::isfinite(x)) continue;
    const double y = parse_real(Json(format_real(x)));
    EXPECT_EQ(std::bit_cast<std::uint64_t>(x), std::bit_cast<std::uint64_t>(y)) << format_real(x);
  }
}

TEST(Reals, ParseAcceptsNumbersAndStrings) {
  EXPECT_EQ(parse_real(Json(0.25)), 0.25);
  EXPECT_EQ(parse_real(Json(3)), 3.0);
  EXPECT_EQ(parse_real(Json("-1.5e-3")), -1.5e-3);
  for (const char* bad : {"", "1.0x", "abc", "1e999"}) EXPECT_THROW(parse_real(Json(bad)), FormatError) << bad;
  EXPECT_THROW(parse_real(Json::array()), FormatError);
  EXPECT_THROW(complex_from_json(Json::array({"1"})), FormatError);
}

TEST(Fiducials, SaveLoadSaveIsByteIdentical) {
  const auto dir = fixtures::scratch_dir("io");
  FiducialDocument doc{fixtures::found_sic(5), Json::object()};
  doc.extra["note"] = "kept";
  save_fiducial(dir / "a.json", doc);
  const auto loaded = load_fiducial(dir / "a.json");
  EXPECT_EQ(loaded.fiducial.d, 5);
  EXPECT_EQ(loaded.fiducial.vector, doc.fiducial.vector);
  EXPECT_EQ(loaded.extra.at("note"), "kept");
  EXPECT_EQ(loaded.fiducial.metadata.seed, doc.fiducial.metadata.seed);
  EXPECT_EQ(loaded.fiducial.metadata.residual, doc.fiducial.metadata.residual);
  EXPECT_EQ(loaded.fiducial.metadata.symmetry_tags, doc.fiducial.metadata.symmetry_tags);
  save_fiducial(dir / "b.json", loaded);
  EXPECT_EQ(read_text_file(dir / "a.json"), read_text_file(dir / "b.json"));
  std::filesystem::remove_all(dir);
}

TEST(Fiducials, AcceptsPlainNumbersAndRejectsMalformed) {
  Json j = Json::parse(R"({"d": 3, "vector": [[0, 0], [0.7071067811865476, 0], [-0.7071067811865476, 0]]})");
  const auto doc = fiducial_from_json(j);
  EXPECT_EQ(doc.fiducial.d, 3);
  EXPECT_TRUE(sic::verify_sic(doc.fiducial, 1e-10).is_sic);
  EXPECT_FALSE(doc.fiducial.metadata.seed.has_value());

  Json wrong_d = j;
  wrong_d["d"] = 4;
  EXPECT_ANY_THROW(fiducial_from_json(wrong_d));
  Json missing = j;
  missing.erase("vector");
  EXPECT_THROW(fiducial_from_json(missing), FormatError);
  Json bad_entry = j;
  bad_entry["vector"][0] = Json::array({"x", "0"});
  EXPECT_THROW(fiducial_from_json(bad_entry), FormatError);
}

TEST(Families, RoundTrip) {
  const auto dir = fixtures::scratch_dir("io-family");
  FamilyDocument doc{etf::sym_lift(fixtures::hesse()).family, Json::object()};
  doc.metadata["kind"] = "lift";
  save_family(dir / "f.json", doc);
  const auto back = load_family(dir / "f.json");
  EXPECT_EQ(back.family.count, 9);
  EXPECT_EQ(back.family.ambient_dim, 6);
  EXPECT_EQ(back.family.vectors, doc.family.vectors);
  EXPECT_EQ(back.metadata.at("kind"), "lift");
  std::filesystem::remove_all(dir);
}

TEST(Files, Errors) {
  try {
    read_text_file("/nonexistent/dir/x.json");
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/x.json"), std::string::npos);
  }
  const auto dir = fixtures::scratch_dir("io-bad");
  write_text_file_atomic(dir / "bad.json", "{ not json");
  EXPECT_ANY_THROW(load_fiducial(dir / "bad.json"));
  for (const auto& e : std::filesystem::directory_iterator(dir))
    EXPECT_EQ(e.path().filename(), "bad.json");  // no temp files left behind
  std::filesystem::remove_all(dir);
}

TEST(Clifford, JsonShape) {
  const auto u = clifford::zauner<double>(3);
  const Json j = clifford_to_json(u);
  EXPECT_EQ(j.at("rows"), 3);
  EXPECT_EQ(j.at("cols"), 3);
  EXPECT_EQ(matrix_from_json(j.at("entries")), u.matrix);
}
