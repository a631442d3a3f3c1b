#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sso/matrix_io.hpp"
#include "sso/objectives.hpp"
#include "sso/support_matrix.hpp"

using namespace sso;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kCli = SSO_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("sso_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string operator/(const std::string& name) const {
    return (path / name).string();
  }
};

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

SupportMatrix point_of(const json& j) {
  const int n = j.at("n").get<int>();
  const int p = j.at("p").get<int>();
  std::vector<std::int32_t> cols(n, -1);
  std::vector<double> vals(n, 0.0);
  for (std::size_t k = 0; k < j.at("support").size(); ++k) {
    const int i = j["support"][k][0].get<int>();
    cols[i] = j["support"][k][1].get<std::int32_t>();
    vals[i] = j["values"][k].get<double>();
  }
  return SupportMatrix(n, p, std::move(cols), std::move(vals));
}

int count_lines(const std::string& path) {
  std::ifstream in(path);
  int lines = 0;
  std::string s;
  while (std::getline(in, s)) ++lines;
  return lines;
}

}  // namespace

TEST_CASE("gen writes the three instance files deterministically") {
  TempDir dir;
  const std::string out1 = dir / "i1";
  const std::string out2 = dir / "i2";
  REQUIRE(run("gen npca --n 50 --m 20 --p 3 --seed 7 --out " + out1) == 0);
  REQUIRE(run("gen npca --n 50 --m 20 --p 3 --seed 7 --out " + out2) == 0);
  CHECK(fs::exists(out1 + "/A.mtx"));
  CHECK(fs::exists(out1 + "/x_opt.txt"));
  CHECK(fs::exists(out1 + "/f_opt.json"));

  DenseMatrix a1 = load_matrix(out1 + "/A.mtx", MatrixFormat::kMatrixMarket);
  DenseMatrix a2 = load_matrix(out2 + "/A.mtx", MatrixFormat::kMatrixMarket);
  REQUIRE(a1.size() == a2.size());
  for (std::size_t k = 0; k < a1.size(); ++k) CHECK(a1.data()[k] == a2.data()[k]);
}

TEST_CASE("gen handles the full-scale instance size") {
  TempDir dir;
  const std::string out = dir / "big";
  REQUIRE(run("gen npca --n 1000 --m 100 --p 10 --seed 1 --out " + out) == 0);
  const json meta = read_json(out + "/f_opt.json");
  CHECK(meta.at("n") == 1000);
  CHECK(meta.at("m") == 100);
  CHECK(meta.at("p") == 10);
  CHECK(meta.at("f_opt").get<double>() < 0.0);
}

TEST_CASE("missing required flags fail with exit 1") {
  CHECK(run("gen npca --n 10 --m 5 --p 2") == 1);  // no --out
  CHECK(run("solve --problem npca") == 1);
  CHECK(run("nonsense") == 1);
}

TEST_CASE("solve pipeline: result file, trace, metrics, round-trip") {
  TempDir dir;
  const std::string inst = dir / "inst";
  REQUIRE(run("gen npca --n 60 --m 24 --p 3 --seed 5 --out " + inst) == 0);

  const std::string result = dir / "result.json";
  const std::string trace = dir / "trace.csv";
  const int rc = run("solve --problem npca --input " + inst +
                     "/A.mtx --p 3 --seed 11 --out " + result + " --trace " + trace);
  REQUIRE((rc == 0 || rc == 2));

  const json res = read_json(result);
  CHECK(res.at("problem") == "npca");
  CHECK(res.at("n") == 60);
  CHECK(res.at("p") == 3);
  if (rc == 0) CHECK(res.at("status") == "converged");

  // Trace rows equal executed iterations (plus the header line).
  CHECK(count_lines(trace) == res.at("iterations").get<int>() + 1);

  // The stored support reloads into a feasible point whose value matches
  // f_final.
  SupportMatrix x = point_of(res);
  CHECK_NOTHROW(validate(x));
  DenseMatrix a = load_matrix(inst + "/A.mtx", MatrixFormat::kMatrixMarket);
  NpcaObjective obj(a, 3);
  CHECK(std::abs(obj.value(x) - res.at("f_final").get<double>()) <= 1e-9);

  // Converged runs land on the planted optimum for this instance.
  const std::string scores = dir / "scores.json";
  REQUIRE(run("metrics npca --result " + result + " --opt " + inst +
              "/f_opt.json --xopt " + inst + "/x_opt.txt --out " + scores) == 0);
  const json sc = read_json(scores);
  if (rc == 0) {
    CHECK(sc.at("relative_gap").get<double>() <= 1e-6);
  }

  // Determinism: re-running with the same seed reproduces the support.
  const std::string result2 = dir / "result2.json";
  REQUIRE(run("solve --problem npca --input " + inst +
              "/A.mtx --p 3 --seed 11 --out " + result2) == rc);
  const json res2 = read_json(result2);
  CHECK(res.at("support") == res2.at("support"));
  CHECK(res.at("f_final") == res2.at("f_final"));
}

TEST_CASE("solve accepts spectral init and fixed eta") {
  TempDir dir;
  const std::string inst = dir / "inst";
  REQUIRE(run("gen npca --n 40 --m 16 --p 2 --seed 3 --out " + inst) == 0);
  const std::string result = dir / "r.json";
  const int rc = run("solve --problem npca --input " + inst +
                     "/A.mtx --p 2 --init spectral --fixed-eta 50 --max-iters 300 "
                     "--out " + result);
  CHECK((rc == 0 || rc == 2));
  CHECK(fs::exists(result));
}

TEST_CASE("metrics cluster scores a perfect prediction") {
  TempDir dir;
  // Build a tiny result file by hand: labels 0,0,1,1 on n=4, p=2.
  json res{{"problem", "onmf"},
           {"n", 4},
           {"p", 2},
           {"f_final", 0.0},
           {"iterations", 1},
           {"status", "converged"},
           {"wall_ms", 0.0},
           {"residuals", {{"supp", 0.0}, {"zrow", 0.0}}},
           {"support", {{0, 0}, {1, 0}, {2, 1}, {3, 1}}},
           {"values",
            {0.7071067811865475, 0.7071067811865475, 0.7071067811865475,
             0.7071067811865475}}};
  const std::string pred = dir / "pred.json";
  std::ofstream(pred) << res.dump();
  const std::string truth = dir / "truth.csv";
  std::ofstream(truth) << "1\n1\n0\n0\n";  // same clustering, swapped ids

  const std::string out = dir / "cluster.json";
  REQUIRE(run("metrics cluster --pred " + pred + " --truth " + truth + " --p 2 --out " +
              out) == 0);
  const json scores = read_json(out);
  CHECK(scores.at("entropy").get<double>() == 0.0);
  CHECK(scores.at("purity").get<double>() == 1.0);
  CHECK(scores.at("nmi").get<double>() == 1.0);
  CHECK(scores.at("accuracy").get<double>() == 1.0);
}

TEST_CASE("metrics cluster rejects mismatched sizes") {
  TempDir dir;
  json res{{"problem", "onmf"}, {"n", 3}, {"p", 2},
           {"f_final", 0.0},    {"iterations", 1}, {"status", "converged"},
           {"wall_ms", 0.0},    {"residuals", {{"supp", 0.0}, {"zrow", 0.0}}},
           {"support", {{0, 0}, {1, 1}, {2, 1}}},
           {"values", {1.0, 0.7071067811865475, 0.7071067811865475}}};
  const std::string pred = dir / "pred.json";
  std::ofstream(pred) << res.dump();
  const std::string truth = dir / "truth.csv";
  std::ofstream(truth) << "0\n1\n";  // wrong length
  CHECK(run("metrics cluster --pred " + pred + " --truth " + truth + " --p 2") == 1);
}

TEST_CASE("bench emits one CSV row per (size, seed)") {
  TempDir dir;
  json cfg{{"problem", "npca"},
           {"sizes", {{{"n", 40}, {"m", 16}, {"p", 2}}, {{"n", 50}, {"m", 20}, {"p", 3}}}},
           {"seeds", 3}};
  const std::string cfg_path = dir / "bench.json";
  std::ofstream(cfg_path) << cfg.dump();
  const std::string out = dir / "bench.csv";
  REQUIRE(run("bench --config " + cfg_path + " --out " + out) == 0);
  CHECK(count_lines(out) == 2 * 3 + 1);  // rows + header
}
