#include "cubecx/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace cubecx;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path dir(const std::string& name) {
  auto d = fs::temp_directory_path() / "cubecx_cli_test" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, ExitCodes) {
  auto d = dir("codes");
  ASSERT_EQ(invoke({"fixtures", "c4-aabb", "--out", d.string()}).code, 0);
  ASSERT_EQ(invoke({"fixtures", "torus", "--out", d.string()}).code, 0);
  EXPECT_EQ(invoke({"validate", (d / "t2.json").string()}).code, 0);
  auto cp = invoke({"cprime", (d / "pres.json").string(), "--alpha", "1/16"});
  EXPECT_EQ(cp.code, 1);
  EXPECT_NE(cp.out.find("PieceTooLarge"), std::string::npos);
  auto pg = invoke({"pseudograph", (d / "t2.json").string()});
  EXPECT_EQ(pg.code, 1);
  EXPECT_NE(pg.out.find("\"hyperplane\""), std::string::npos);
  // a truncated ball cannot rule out a facing triple
  ASSERT_EQ(invoke({"fixtures", "grid-3x3", "--out", d.string()}).code, 0);
  EXPECT_EQ(invoke({"facing", (d / "grid-3x3.json").string(), "--radius", "2"}).code, 2);
  EXPECT_EQ(invoke({"facing", (d / "grid-3x3.json").string(), "--radius", "6"}).code, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 3);
  EXPECT_EQ(invoke({"frobnicate"}).code, 3);
  EXPECT_EQ(invoke({"fixtures", "no-such-thing"}).code, 3);
  EXPECT_EQ(invoke({"validate", "/nonexistent/x.json"}).code, 3);
  EXPECT_EQ(invoke({"cprime", "p.json", "--alpha", "one half"}).code, 3);
  EXPECT_EQ(invoke({"quotient"}).code, 3);
  auto d = dir("usage");
  invoke({"fixtures", "torus", "--out", d.string()});
  auto bad = invoke({"link", (d / "t2.json").string(), "--vertex", "9"});
  EXPECT_EQ(bad.code, 3);
  EXPECT_NE(bad.err.find("UnknownVertex"), std::string::npos);
  EXPECT_EQ(invoke({"--help"}).code, 0);
  EXPECT_EQ(invoke({"--version"}).code, 0);
}

TEST(Cli, ParseErrorsCarryLine) {
  auto d = dir("parse");
  write_text(d / "broken.json", "{\n \"vertices\": 1,\n \"cubes\": [,]\n}\n");
  auto r = invoke({"validate", (d / "broken.json").string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("broken.json:3"), std::string::npos) << r.err;
}

TEST(Cli, ModuleErrorsAreReports) {
  auto d = dir("module");
  invoke({"fixtures", "doubled-square", "--out", d.string()});
  // walls need an NPC relator: a module error is a failing report, not a usage error
  auto r = invoke({"walls", "antipodal", (d / "doubled-square.json").string()});
  EXPECT_NE(r.code, 3) << r.err;
  EXPECT_NE(r.code, 0);
}

TEST(Cli, ReportHeaderAndParams) {
  auto r = invoke({"scwords", "2", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("cubecx " + std::string(cli::kVersion) + "\ncommand: scwords 2 3\n", 0), 0u);
  EXPECT_NE(r.out.find("U = abaab"), std::string::npos);
  EXPECT_NE(r.out.find("status: pass"), std::string::npos);
  auto q = invoke({"quotient", "build", "--alpha", "1/4", "--budget", "5000", "--json"});
  auto j = Json::parse(q.out);
  EXPECT_EQ(j["params"]["alpha"], "1/4");
  EXPECT_EQ(j["params"]["budget"], "5000");
  EXPECT_EQ(j["params"]["guard"], "64");
  EXPECT_EQ(j["status"], "pass");
}

TEST(Cli, GuardFromEnvironment) {
  auto d = dir("env");
  // graphs ignore the guard; a cylinder does not
  write_text(d / "c9.json", dump(complex_to_json(product(fixtures::cycle_graph(9), fixtures::interval()))));
  ::setenv(cli::kGuardEnv, "3", 1);
  auto low = invoke({"systole", (d / "c9.json").string()});
  ::unsetenv(cli::kGuardEnv);
  EXPECT_NE(low.out.find("param guard: 3"), std::string::npos);
  EXPECT_EQ(low.code, 2) << low.out;
  auto flag = invoke({"systole", (d / "c9.json").string(), "--guard", "12"});
  EXPECT_EQ(flag.code, 0);
  EXPECT_NE(flag.out.find("Exact(9)"), std::string::npos);
}

TEST(Cli, FixturesRoundTripByteExact) {
  auto d = dir("roundtrip");
  for (const char* name : {"b2", "torus", "theta", "grid-2x3", "two-hexagons", "word-abAB", "nonexample-product", "octants"}) {
    auto sub = d / name;
    ASSERT_EQ(invoke({"fixtures", name, "--out", sub.string()}).code, 0) << name;
    for (const auto& entry : fs::directory_iterator(sub)) {
      auto text = slurp(entry.path());
      auto j = Json::parse(text);
      std::string again;
      if (j.contains("points")) {
        again = dump(finite_wallspace_to_json(finite_wallspace_from_json(j, "t")));
      } else if (j.contains("assign")) {
        again = dump(map_to_json(map_from_json(j, sub, "t"), j["source"], j["target"]));
      } else if (j.contains("walls")) {
        auto rw = relator_walls_from_json(j, sub, "t");
        again = dump(relator_walls_to_json(rw, j["complex"]));
      } else if (j.contains("relators")) {
        again = dump(cli::presentation_to_json(j["X"], j["relators"].get<std::vector<std::string>>()));
      } else {
        again = dump(complex_to_json(complex_from_json(j)));
      }
      EXPECT_EQ(again, text) << entry.path();
    }
  }
}

TEST(Cli, GraphFiles) {
  LabeledGraph g;
  g.rank = 2;
  g.vertices = 3;
  g.add_edge(0, 1, 0);
  g.add_edge(0, 2, 0);
  g.add_edge(1, 2, 1);
  auto j = cli::graph_to_json(g);
  auto back = cli::graph_from_json(j, "g");
  EXPECT_EQ(back.edges, g.edges);
  EXPECT_EQ(dump(cli::graph_to_json(back)), dump(j));
  auto d = dir("graphs");
  write_text(d / "g.json", dump(j));
  auto r = invoke({"fold", (d / "g.json").string(), "--out", (d / "folded.json").string()});
  EXPECT_EQ(r.code, 0);
  auto folded = cli::load_graph(d / "folded.json");
  EXPECT_TRUE(folded.folded());
  EXPECT_EQ(folded.vertices, 2);
  j["labels"] = {0, 0};
  write_text(d / "bad.json", dump(j));
  EXPECT_EQ(invoke({"fold", (d / "bad.json").string()}).code, 3);
}

TEST(Cli, QuotientPlanVerifies) {
  auto d = dir("plan");
  auto survive = d / "words.txt";
  write_text(survive, "abab  # keep\naaB\n");
  auto b = invoke({"quotient", "build", "--alpha", "1/2", "--survive", survive.string(), "--out", (d / "out").string()});
  ASSERT_EQ(b.code, 0) << b.out;
  EXPECT_NE(b.out.find("survives"), std::string::npos);
  EXPECT_EQ(invoke({"quotient", "verify", (d / "out").string()}).code, 0);
  // tampering with the stored verdict is caught
  auto m = read_json(d / "out" / "manifest.json");
  m["certificate"] = Json::object();
  write_text(d / "out" / "manifest.json", dump(m));
  EXPECT_EQ(invoke({"quotient", "verify", (d / "out").string()}).code, 1);
}

TEST(Cli, WallsAndB6) {
  auto d = dir("walls");
  invoke({"fixtures", "two-hexagons", "--out", d.string()});
  auto w = invoke({"walls", "rank2", (d / "y.map.json").string(), "--out", (d / "w2.json").string()});
  EXPECT_EQ(w.code, 0) << w.out;
  auto rw = cli::load_relator_walls(d / "w2.json", 1);
  ASSERT_EQ(rw.size(), 1u);
  EXPECT_TRUE(rw[0].decomposition.has_value());
  // a walls directory holds <i>.json
  fs::create_directories(d / "wd");
  fs::copy_file(d / "w2.json", d / "wd" / "0.json");
  auto a = invoke({"b6", (d / "pres.json").string(), (d / "w2.json").string()});
  auto b = invoke({"b6", (d / "pres.json").string(), (d / "wd").string()});
  EXPECT_EQ(a.code, b.code);
  EXPECT_EQ(a.code, 1);
  auto fb = invoke({"freeness-bounds", (d / "pres.json").string(), (d / "walls.json").string(), "--alpha", "1/16", "--beta", "1/16"});
  EXPECT_EQ(fb.code, 1);
  EXPECT_NE(fb.out.find("[fail] alpha + beta < 1/8"), std::string::npos);
}

TEST(Cli, DualVerbs) {
  auto d = dir("dual");
  invoke({"fixtures", "octants", "--out", d.string()});
  auto r = invoke({"dual", (d / "octants.json").string(), "--json"});
  EXPECT_EQ(r.code, 0);
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["data"]["orientations"].size(), 8u);
  EXPECT_EQ(invoke({"hemi", (d / "octants.json").string(), "--subset", "0,7"}).code, 0);
  EXPECT_EQ(invoke({"hemi", (d / "octants.json").string(), "--subset", "0,x"}).code, 3);
  invoke({"fixtures", "tripod", "--out", d.string()});
  auto f = invoke({"facing", (d / "tripod.json").string(), "--radius", "2", "--strong"});
  EXPECT_EQ(f.code, 0) << f.out;
  EXPECT_NE(f.out.find("hyperplanes = 0 1 2"), std::string::npos);
}
