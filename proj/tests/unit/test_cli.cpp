#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nsolit_cli/cli.hpp"

namespace fs = std::filesystem;
using namespace nsolit;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "nsolit");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nsolit_cli_" + name);
  fs::remove_all(p);
  return p;
}

nlohmann::json load(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::string fixture(const char* name) { return std::string(NSOLIT_FIXTURES) + "/" + name; }

}  // namespace

TEST(ExitCodes, MalformedMetricWritesNothing) {
  const auto dir = scratch("malformed");
  const auto r = run({"geometry", fixture("malformed.metric"), "--out", dir.string()});
  EXPECT_EQ(r.code, cli::kParse);
  EXPECT_FALSE(r.err.empty());
  EXPECT_FALSE(fs::exists(dir));
}

TEST(ExitCodes, SingularSineGordonData) {
  const auto dir = scratch("sg_singular");
  EXPECT_EQ(run({"sg", fixture("sg_singular.json"), "--out", dir.string()}).code, cli::kIntegration);
  fs::remove_all(dir);
}

TEST(ExitCodes, BadArguments) {
  EXPECT_EQ(run({"expand", "3"}).code, cli::kParse);
  EXPECT_EQ(run({}).code, cli::kParse);
  EXPECT_EQ(run({"geometry"}).code, cli::kParse);
  EXPECT_EQ(run({"geometry", fixture("sphere2.metric"), "--format", "xml"}).code, cli::kParse);
  EXPECT_EQ(run({"flow", fixture("missing.json")}).code, cli::kParse);
}

TEST(ExitCodes, SingularMetric) {
  const auto dir = scratch("singular_metric");
  fs::create_directories(dir);
  std::ofstream(dir / "deg.metric") << "dim 2; coords x1, x2;\ng[1][1] = 1;\n";
  EXPECT_EQ(run({"geometry", (dir / "deg.metric").string(), "--out", (dir / "o").string()}).code, cli::kSingular);
  fs::remove_all(dir);
}

TEST(Geometry, SphereCurvatureMatchesOracle) {
  const auto dir = scratch("sphere");
  ASSERT_EQ(run({"geometry", fixture("sphere2.metric"), "--out", dir.string(), "--samples", "8"}).code, cli::kOk);
  const auto j = load(dir / "geometry.json");
  EXPECT_EQ(j["dim"], 2);
  const auto& pts = j["samples"]["points"];
  ASSERT_EQ(pts.size(), 8u);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const double x1 = pts[p][0];
    const double r = j["R"]["samples"][p][0][1][0][1];
    EXPECT_NEAR(r, -std::sin(x1) * std::sin(x1), 1e-9);
    EXPECT_NEAR(double(j["scalars"]["Rarrow"]["samples"][p][0]), 2.0, 1e-9);
  }

  // the same bundle at the independently computed points
  const auto b = cli::geometry_bundle(expr::load_metric(fixture("sphere2.metric")), 1, 1);
  const auto it = std::find_if(b.tables.begin(), b.tables.end(), [](const auto& t) { return t.first == "R"; });
  ASSERT_NE(it, b.tables.end());
  SamplePoints sp{b.points.vars, {}};
  std::vector<double> want;
  std::ifstream in(fixture("sphere_R1212.csv"));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::vector<double> v;
    for (std::string cell; std::getline(ss, cell, ',');) v.push_back(std::stod(cell));
    sp.points.push_back({v[0], v[1], v[2], v[3]});
    want.push_back(v[4]);
  }
  const auto got = evaluate_tensor(it->second, sp);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t p = 0; p < got.size(); ++p) EXPECT_NEAR(got[p][5], want[p], 1e-5);
  fs::remove_all(dir);
}

TEST(Geometry, FlatPlaneTablesVanish) {
  const auto b = cli::geometry_bundle(expr::load_metric(fixture("flat2.metric")), 10, 3);
  for (const auto& [name, t] : b.tables) EXPECT_EQ(max_abs(t, b.points), 0.0) << name;
}

TEST(Geometry, CsvFormat) {
  const auto dir = scratch("csv");
  ASSERT_EQ(run({"geometry", fixture("flat2.metric"), "--out", dir.string(), "--samples", "2", "--format", "csv"}).code,
            cli::kOk);
  std::ifstream in(dir / "geometry.csv");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "table,entry,point,value");
  EXPECT_EQ(first.rfind("gamma,1.1.1,0,", 0), 0u) << first;
  fs::remove_all(dir);
}

TEST(Flow, ZeroDataDiagnostics) {
  const auto dir = scratch("zero_flow");
  fs::create_directories(dir);
  std::ofstream(dir / "zero.json") << R"({"kind":"mkdv","k":1,"p":2,"N":64,"length":6.283185307179586,)"
                                      R"("dt":0.001,"tau_end":0.01,"initial":"zero","cadence":5})";
  const auto r = run({"flow", (dir / "zero.json").string(), "--out", (dir / "o").string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::ifstream in(dir / "o" / "diagnostics.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "tau,H0,H1,H2a,H2b,maxnorm");
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    for (int c = 0; c < 5; ++c) {
      std::getline(ss, cell, ',');
      EXPECT_EQ(std::stod(cell), 0.0) << line;
    }
    ++rows;
  }
  EXPECT_EQ(rows, 3);
  EXPECT_TRUE(fs::exists(dir / "o" / "snapshot_0002.csv"));
  fs::remove_all(dir);
}

TEST(Flow, UnknownConfigKey) {
  const auto dir = scratch("bad_key");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << R"({"kind":"mkdv","stepsize":0.1})";
  const auto r = run({"flow", (dir / "bad.json").string(), "--out", (dir / "o").string()});
  EXPECT_EQ(r.code, cli::kParse);
  EXPECT_NE(r.err.find("stepsize"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Flow, ManifestRecordsRun) {
  const auto dir = scratch("manifest");
  ASSERT_EQ(run({"flow", fixture("flow_soliton.json"), "--out", dir.string()}).code, cli::kOk);
  const auto m = load(dir / "manifest.json");
  EXPECT_EQ(m["command"], "flow");
  EXPECT_EQ(m["config"]["N"], 128);
  EXPECT_EQ(m["config"]["kind"], "mkdv");
  ASSERT_EQ(m["inputs"].size(), 1u);
  EXPECT_EQ(m["inputs"][0]["name"], "flow_soliton.json");
  EXPECT_EQ(m["inputs"][0]["fnv1a64"], cli::file_hash(fixture("flow_soliton.json")));
  EXPECT_EQ(m["outputs"].size(), 4u);  // three snapshots and the diagnostics
  EXPECT_TRUE(m.contains("wall_time_s"));
  fs::remove_all(dir);
}

TEST(FileHash, KnownValues) {
  const auto dir = scratch("hash");
  fs::create_directories(dir);
  std::ofstream(dir / "empty").close();
  std::ofstream(dir / "a") << "a";
  EXPECT_EQ(cli::file_hash((dir / "empty").string()), "cbf29ce484222325");
  EXPECT_EQ(cli::file_hash((dir / "a").string()), "af63dc4c8601ec8c");
  fs::remove_all(dir);
}

TEST(Check, PassesAndReportsInjectedFault) {
  const auto ok = run({"check", "--suite", "geometry", "--samples", "5"});
  EXPECT_EQ(ok.code, cli::kOk) << ok.out;
  EXPECT_TRUE(nlohmann::json::parse(ok.out)["pass"].get<bool>());

  const auto bad = run({"check", "--suite", "geometry", "--samples", "5", "--inject-fault", "connection"});
  EXPECT_EQ(bad.code, cli::kCheckFailed);
  const auto j = nlohmann::json::parse(bad.out);
  EXPECT_FALSE(j["pass"].get<bool>());
  std::vector<std::string> failed;
  for (const auto& c : j["checks"])
    if (!c["pass"].get<bool>()) failed.push_back(c["name"]);
  ASSERT_EQ(failed.size(), 1u);
  EXPECT_EQ(failed[0], "sphere_metric_compatibility");
}

TEST(Check, CsvReport) {
  const auto r = run({"check", "--suite", "geometry", "--samples", "3", "--format", "csv"});
  EXPECT_EQ(r.out.rfind("name,value,tolerance,pass\n", 0), 0u);
}

TEST(Expand, Texts) {
  const auto r0 = run({"expand", "0"});
  EXPECT_EQ(r0.code, cli::kOk);
  EXPECT_NE(r0.out.find("v_tau = v_l"), std::string::npos);
  const auto r1 = run({"expand", "1"});
  EXPECT_NE(r1.out.find("(3/2)|v|^2 v_l"), std::string::npos);
  EXPECT_NE(r1.out.find("(1/8)|v|^4"), std::string::npos);
  const auto r2 = run({"expand", "2"});
  EXPECT_NE(r2.out.find("(15/8)|v|^4 v_l"), std::string::npos);
  EXPECT_NE(r2.out.find("H2a (default)"), std::string::npos);
  EXPECT_NE(r2.out.find("k2_form = printed"), std::string::npos);
}
