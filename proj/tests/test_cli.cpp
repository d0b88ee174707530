#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "sicladder/cli.hpp"
#include "sicladder/io.hpp"

using namespace sicladder;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string path(const std::filesystem::path& p) { return p.string(); }

}  // namespace

TEST(Cli, TowerHuman) {
  const auto r = run({"tower", "--d0", "5", "--bound", "1000"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "4 8 19 48 124 323 844");
}

TEST(Cli, TowerJsonAndCsv) {
  const auto r = run({"tower", "--d0", "3", "--bound", "1000", "--json"});
  ASSERT_EQ(r.code, 0);
  const auto j = io::Json::parse(r.out);
  EXPECT_EQ(j.at("d0"), 3);
  EXPECT_EQ(j.at("dimensions"), io::Json::parse("[5, 15, 53, 195, 725]"));
  const auto c = run({"tower", "--d0", "5", "--bound", "100", "--csv"});
  EXPECT_EQ(c.code, 0);
  EXPECT_EQ(c.out.substr(0, c.out.find('\n')), "d,m,d0,rung,ladder_base");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"wh", "check", "--d", "4"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"tower", "--d0", "4", "--bound", "10"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"tower", "--d0", "5"}).code, cli::kExitUsage);
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"sic", "verify", "--in", "/nonexistent/x.json"}).code, cli::kExitUsage);
  const auto unknown = run({"tower", "--d0", "5", "--bound", "10", "--bogus"});
  EXPECT_EQ(unknown.code, cli::kExitUsage);
  EXPECT_NE(unknown.err.find("--bogus"), std::string::npos);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
  EXPECT_EQ(run({"sic", "search", "--help"}).code, cli::kExitOk);
  EXPECT_EQ(run({"sic", "search", "--d", "3", "--seed", "1", "--tol", "-1", "--out", "x.json"}).code, cli::kExitUsage);
}

TEST(Cli, WhAndClifford) {
  EXPECT_EQ(run({"wh", "check", "--d", "5"}).code, 0);
  EXPECT_EQ(run({"wh", "grassmann", "--d", "5"}).code, 0);
  EXPECT_EQ(run({"clifford", "check", "--d", "7", "--samples", "10"}).code, 0);
  const auto z = run({"clifford", "zauner", "--d", "5", "--json"});
  EXPECT_EQ(z.code, 0);
  EXPECT_NO_THROW(io::Json::parse(z.out));
}

TEST(Cli, PipelineD3) {
  const auto dir = fixtures::scratch_dir("cli-pipeline");
  const auto fid = dir / "f.json", lift = dir / "lift.json", comp = dir / "comp.json", cat = dir / "cat";
  const auto s = run({"sic", "search", "--d", "3", "--seed", "1", "--out", path(fid), "--json"});
  ASSERT_EQ(s.code, 0) << s.err;
  const auto sj = io::Json::parse(s.out);
  EXPECT_TRUE(sj.at("found").get<bool>());
  EXPECT_EQ(io::parse_real(sj.at("best_potential")), io::parse_real(sj.at("verification").at("frame_potential")));

  EXPECT_EQ(run({"sic", "verify", "--in", path(fid)}).code, 0);
  EXPECT_EQ(run({"etf", "lift", "--in", path(fid), "--out", path(lift)}).code, 0);
  EXPECT_EQ(run({"etf", "verify", "--in", path(lift)}).code, 0);
  EXPECT_EQ(run({"etf", "naimark", "--in", path(lift), "--out", path(comp)}).code, 0);
  const auto v = run({"etf", "verify", "--in", path(comp), "--json"});
  EXPECT_EQ(v.code, 0);
  EXPECT_TRUE(io::Json::parse(v.out).at("is_etf").get<bool>());

  EXPECT_EQ(run({"catalog", "put", "--in", path(fid), "--catalog", path(cat)}).code, 0);
  const auto listed = run({"catalog", "list", "--catalog", path(cat), "--json"});
  EXPECT_EQ(listed.code, 0);
  EXPECT_EQ(io::Json::parse(listed.out).at("entries").size(), 1u);
  const auto got = dir / "got.json";
  EXPECT_EQ(run({"catalog", "get", "--d", "3", "--catalog", path(cat), "--out", path(got)}).code, 0);
  EXPECT_EQ(io::load_fiducial(got).fiducial.vector, io::load_fiducial(fid).fiducial.vector);
  EXPECT_EQ(run({"catalog", "get", "--d", "5", "--catalog", path(cat)}).code, cli::kExitUsage);

  // tamper with the stored file
  for (const auto& e : std::filesystem::recursive_directory_iterator(cat))
    if (e.is_regular_file()) std::ofstream(e.path(), std::ios::app) << "\n";
  const auto tampered = run({"catalog", "list", "--catalog", path(cat)});
  EXPECT_EQ(tampered.code, 0);
  EXPECT_NE(tampered.err.find("warning"), std::string::npos);
  EXPECT_NE(tampered.out.find("CORRUPT"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Cli, VerifyFailsOnNonSic) {
  const auto dir = fixtures::scratch_dir("cli-verify");
  io::save_fiducial(dir / "e.json", {fixtures::basis_vector(5), io::Json::object()});
  EXPECT_EQ(run({"sic", "verify", "--in", path(dir / "e.json")}).code, cli::kExitVerificationFailed);
  std::filesystem::remove_all(dir);
}

TEST(Cli, JsonRealsRoundTrip) {
  const auto dir = fixtures::scratch_dir("cli-json");
  io::save_fiducial(dir / "f.json", {fixtures::found_sic(5), io::Json::object()});
  const auto r = run({"sic", "verify", "--in", path(dir / "f.json"), "--json"});
  ASSERT_EQ(r.code, 0);
  const auto j = io::Json::parse(r.out);
  const auto report = sic::verify_sic(fixtures::found_sic(5), 1e-10);
  EXPECT_EQ(io::parse_real(j.at("max_modulus_deviation")), report.max_modulus_deviation);
  EXPECT_EQ(io::parse_real(j.at("frame_potential")), report.frame_potential);
  std::filesystem::remove_all(dir);
}

TEST(Cli, ConfigFileSuppliesDefaults) {
  const auto dir = fixtures::scratch_dir("cli-config");
  std::ofstream(dir / "c.toml") << "[tower]\nd0 = 5\nbound = 100\n";
  const auto r = run({"--config", path(dir / "c.toml"), "tower", "--csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("48,21,5,2,4"), std::string::npos);
  const auto over = run({"--config", path(dir / "c.toml"), "tower", "--bound", "10", "--csv"});
  EXPECT_EQ(over.out.find("48,"), std::string::npos);
  std::filesystem::remove_all(dir);
}
