#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "generators.hpp"
#include "json.hpp"
#include "orc/cli.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("orc_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Runs the real binary; returns its exit status.
int sh(const std::string& args) {
  const std::string cmd = std::string(ORC_BINARY) + " " + args + " 2>" +
                          (scratch() / "stderr.txt").string() + " >" + (scratch() / "stdout.txt").string();
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

struct Captured {
  int code;
  std::string out, err;
};

Captured run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = orc::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string path(const char* name) { return (scratch() / name).string(); }

}  // namespace

TEST_CASE("fixture command writes the built-in inputs") {
  CHECK(sh("fixture appendix_a --out " + path("a.json")) == 0);
  const json a = json::parse(slurp(path("a.json")));
  CHECK(a["cost"] == json::parse("[[1,3,3,2],[2,3,3,3],[3,2,2,3]]"));
  CHECK(a["dxy"] == 1);
  CHECK(sh("fixture path4 --out " + path("p4.txt")) == 0);
  CHECK(slurp(path("p4.txt")) == "0 1\n1 2\n2 3\n");
  CHECK(sh("fixture star") == 0);
  CHECK(slurp(path("stdout.txt")) == "0 1\n0 2\n0 3\n");
  CHECK(sh("fixture nowhere") == 2);
  CHECK(slurp(path("stderr.txt")).find("UnknownFixture") != std::string::npos);
}

TEST_CASE("compute on the appendix A fixture") {
  REQUIRE(sh("fixture appendix_a --out " + path("a.json")) == 0);
  CHECK(sh("compute --input " + path("a.json") + " --format cost_matrix --method lp --out " + path("r.json")) == 0);
  const json r = json::parse(slurp(path("r.json")));
  REQUIRE(r["records"].size() == 1);
  CHECK(r["records"][0]["w1"] == "25/12");
  CHECK(r["records"][0]["curvature"] == "-13/12");
  CHECK(r["records"][0]["x"].is_null());
  CHECK(r["records"][0]["p"] == 3);
  CHECK(r["records"][0]["q"] == 4);
  CHECK_FALSE(r.contains("wall_time_s"));

  const auto f = run({"compute", "--input", path("a.json"), "--format", "cost_matrix", "--method", "lp",
                      "--numeric", "float"});
  REQUIRE(f.code == 0);
  const json fr = json::parse(f.out);
  CHECK(std::fabs(fr["records"][0]["w1"].get<double>() - 25.0 / 12) <= 1e-12);
  CHECK(std::fabs(fr["records"][0]["curvature"].get<double>() + 13.0 / 12) <= 1e-12);
}

TEST_CASE("compute on path4 with the tree method and both qsim routes") {
  REQUIRE(sh("fixture path4 --out " + path("p4.txt")) == 0);
  for (const char* m : {"tree", "lp", "assignment", "brute_force"}) {
    CAPTURE(m);
    const auto c = run({"compute", "--input", path("p4.txt"), "--method", m, "--edge", "1,2"});
    REQUIRE(c.code == 0);
    CHECK(json::parse(c.out)["records"][0]["curvature"] == "-2");
  }
  for (const char* m : {"qsim_tree", "qsim_pq"}) {
    CAPTURE(m);
    const auto c = run({"compute", "--input", path("p4.txt"), "--method", m, "--all-edges"});
    REQUIRE(c.code == 0);
    CHECK(json::parse(c.out)["records"][0]["curvature"].get<double>() == doctest::Approx(-2.0));
  }
}

TEST_CASE("exit codes") {
  REQUIRE(sh("fixture appendix_a --out " + path("a.json")) == 0);
  REQUIRE(sh("fixture path4 --out " + path("p4.txt")) == 0);
  CHECK(sh("compute --input " + path("a.json") + " --format cost_matrix --method qsim_pq") == 2);
  CHECK(slurp(path("stderr.txt")).find("NotSquare") != std::string::npos);
  CHECK(sh("compute --input " + path("missing") + " --method lp --edge 0,1") == 2);
  CHECK(sh("compute --input " + path("p4.txt") + " --method lp") == 2);
  CHECK(sh("compute --input " + path("p4.txt") + " --method lp --edge 0,3") == 2);
  CHECK(slurp(path("stderr.txt")).find("NotAnEdge") != std::string::npos);
  CHECK(sh("compute --input " + path("p4.txt") + " --method lp --edge 0,1") == 2);
  CHECK(sh("compute --input " + path("p4.txt") + " --method nope --edge 1,2") == 2);
  CHECK(sh("compute --input " + path("p4.txt") + " --method lp --edge 1,2 --numeric weird") == 2);
  CHECK(sh("compute --bogus") == 2);
  CHECK(sh("--help") == 0);

  write(path("tri.txt"), "0 1\n1 2\n2 0\n0 3\n1 4\n");
  CHECK(sh("compute --input " + path("tri.txt") + " --method tree --edge 0,1") == 2);
  CHECK(slurp(path("stderr.txt")).find("NotATree") != std::string::npos);

  write(path("bad.txt"), "0 1 -2\n");
  CHECK(sh("compute --input " + path("bad.txt") + " --method lp --edge 0,1") == 2);

  // Disconnected graph: the qsim distance encoding cannot be built.
  write(path("split.txt"), "0 1\n1 2\n2 3\n4 5\n");
  CHECK(sh("compute --input " + path("split.txt") + " --method qsim_tree --edge 1,2") == 2);
  CHECK(sh("compute --input " + path("split.txt") + " --method qsim_pq --edge 1,2") == 3);
  CHECK(slurp(path("stderr.txt")).find("InfiniteDistance") != std::string::npos);
}

TEST_CASE("compare mode and the corrupted-alpha harness check") {
  orc::testgen::Rng rng(51);
  const auto g = orc::testgen::random_tree(30, rng, 3);
  std::string text;
  for (const auto& e : g.edges()) text += std::to_string(e.u) + " " + std::to_string(e.v) + " " + e.w.get_str() + "\n";
  write(path("tree.txt"), text);
  auto c = run({"compare", "--input", path("tree.txt"), "--method", "qsim_tree", "--all-edges", "--tol", "1e-8"});
  CHECK(c.code == 0);
  json r = json::parse(c.out);
  CHECK(r["summary"]["pass"] == true);
  CHECK(r["summary"]["max_abs_diff"].get<double>() <= 1e-8);

  c = run({"compare", "--input", path("tree.txt"), "--method", "qsim_tree", "--all-edges",
           "--debug-corrupt-alpha", "1.01"});
  CHECK(c.code == 1);
  r = json::parse(c.out);
  CHECK(r["summary"]["max_abs_diff"].get<double>() > 1e-3);

  const auto m = orc::testgen::random_int_matrix(3, 3, rng, 1, 9);
  json doc;
  doc["dxy"] = 2;
  for (std::size_t i = 0; i < 3; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < 3; ++j) row.push_back(m(i, j).get_num().get_si());
    doc["cost"].push_back(row);
  }
  write(path("sq.json"), doc.dump());
  c = run({"compare", "--input", path("sq.json"), "--format", "cost_matrix", "--method", "qsim_pq", "--tol", "1e-6"});
  CHECK(c.code == 0);
  CHECK(json::parse(c.out)["records"][0]["against"] == "assignment");

  c = run({"compare", "--input", path("tree.txt"), "--method", "qsim_tree", "--all-edges", "--shots", "1000000",
           "--seed", "3"});
  CHECK(c.code == 0);
}

TEST_CASE("reports are deterministic and csv is available") {
  REQUIRE(sh("fixture path4 --out " + path("p4.txt")) == 0);
  const std::vector<std::string> args{"compute", "--input", path("p4.txt"), "--method", "qsim_tree",
                                      "--all-edges", "--shots", "1000", "--seed", "7"};
  CHECK(run(args).out == run(args).out);
  const auto csv = run({"compute", "--input", path("p4.txt"), "--method", "lp", "--edge", "1,2",
                        "--out-format", "csv"});
  CHECK(csv.out == "x,y,p,q,w1,dxy,curvature,method\n1,2,1,1,3,1,-2,lp\n");
  const auto timed = run({"compute", "--input", path("p4.txt"), "--method", "lp", "--edge", "1,2", "--timing"});
  CHECK(json::parse(timed.out).contains("wall_time_s"));
}

TEST_CASE("json graph input and the audit trace") {
  write(path("g.json"), R"({"n": 6, "edges": [[0,1],[1,2],[2,3],[3,4],[4,5],[5,0]]})");
  const auto c = run({"compute", "--input", path("g.json"), "--format", "json", "--method", "qsim_pq",
                      "--edge", "0,1", "--trace", path("trace.jsonl")});
  REQUIRE(c.code == 0);
  std::istringstream lines(slurp(path("trace.jsonl")));
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    const json rec = json::parse(line);
    CHECK(rec["edge"] == json::array({0, 1}));
    CHECK(rec.contains("stage"));
    if (!rec["ledger_dev"].is_null()) CHECK(rec["ledger_dev"].get<double>() <= 1e-10);
    ++n;
  }
  CHECK(n >= 7);
}
