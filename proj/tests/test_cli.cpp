#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "velpert/cli.hpp"
#include "velpert/oracles.hpp"

using namespace velpert;
using std::numbers::pi;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string problem(const std::string& name) { return std::string(VELPERT_PROBLEMS_DIR) + "/" + name + ".prob"; }

class TempDir {
 public:
  TempDir() : path_(std::filesystem::temp_directory_path() / "velpert_cli_test") {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> table(const std::string& text, char sep) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, sep)) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

// Value column of a "key<TAB>value" line.
double lookup(const std::string& text, const std::string& key) {
  for (const auto& row : table(text, '\t')) {
    if (row.size() >= 2 && row[0] == key) return std::stod(row[1]);
  }
  FAIL("missing key ", key);
  return 0.0;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("solve prints the coefficient table") {
    TempDir tmp;
    const Result r = run({"solve", "--problem", problem("model3"), "--n", "1", "--order", "3", "--out", tmp.file("s.json")});
    REQUIRE(r.code == 0);
    const auto rows = table(r.out, '\t');
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"j", "E_j", "N_j"});
    CHECK(std::stod(rows[2][1]) == doctest::Approx(-3.4739208802178717).epsilon(1e-10));
    CHECK(std::filesystem::exists(tmp.file("s.json")));

    const Result m1 = run({"solve", "--problem", problem("model1"), "--n", "2", "--order", "4"});
    REQUIRE(m1.code == 0);
    const auto e = table(m1.out, '\t');
    CHECK(std::stod(e[1][1]) == doctest::Approx(4.0 * pi * pi).epsilon(1e-12));
    CHECK(std::abs(std::stod(e[2][1])) <= 1e-9);
    CHECK(std::abs(std::stod(e[3][1]) - 0.25) <= 1e-9);
    CHECK(std::abs(std::stod(e[4][1])) <= 1e-9);
    CHECK(std::abs(std::stod(e[5][1])) <= 1e-9);
  }

  TEST_CASE("solve with csv output") {
    TempDir tmp;
    const Result r = run({"solve", "--problem", problem("model1"), "--order", "2", "--format", "csv", "--out",
                          tmp.file("t.csv")});
    REQUIRE(r.code == 0);
    const auto rows = table(slurp(tmp.file("t.csv")), ',');
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"j", "E", "N"});
    CHECK(std::stod(rows[3][1]) == doctest::Approx(0.25));
  }

  TEST_CASE("usage errors exit with 1") {
    CHECK(run({"solve", "--problem", problem("model1"), "--order", "-1"}).code == 1);
    CHECK(run({"solve", "--problem", problem("model1"), "--n", "0"}).code == 1);
    CHECK(run({"solve", "--problem", problem("model1"), "--format", "xml"}).code == 1);
    CHECK(run({"solve"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"solve", "--problem", "/no/such/file.prob"}).code == 1);
    CHECK(run({"eval", "--series", "/no/such/series.json"}).code == 1);
    CHECK(run({"export", "--order", "2"}).code == 1);
    CHECK(run({"export", "--problem", problem("model1"), "--series", "s.json"}).code == 1);
    CHECK(run({"oracle", "--problem", problem("model1"), "--grid", "4"}).code == 1);

    TempDir tmp;
    std::ofstream(tmp.file("bad.prob")) << "domain = 0 1\nv0 = 2*\n";
    const Result bad = run({"validate", "--problem", tmp.file("bad.prob")});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("error:") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
  }

  TEST_CASE("eval prints partial sums") {
    TempDir tmp;
    const std::string s3 = tmp.file("m3.json");
    REQUIRE(run({"solve", "--problem", problem("model3"), "--order", "3", "--out", s3}).code == 0);
    const Result r = run({"eval", "--series", s3, "--lambda", "1"});
    REQUIRE(r.code == 0);
    const double want[] = {9.8696044010893586, 6.3956835208714869, 6.1333724685092475, 6.0542443618322523};
    for (int j = 0; j <= 3; ++j) CHECK(lookup(r.out, std::to_string(j)) == doctest::Approx(want[j]).epsilon(1e-10));

    const Result zero = run({"eval", "--series", s3, "--lambda", "0"});
    for (int j = 0; j <= 3; ++j) CHECK(lookup(zero.out, std::to_string(j)) == doctest::Approx(want[0]).epsilon(1e-15));

    const std::string s1 = tmp.file("m1.json");
    REQUIRE(run({"solve", "--problem", problem("model1"), "--order", "4", "--out", s1}).code == 0);
    const Result m1 = run({"eval", "--series", s1, "--lambda", "0.8"});
    for (int j = 2; j <= 4; ++j) CHECK(std::abs(lookup(m1.out, std::to_string(j)) - 10.029604401089359) <= 1e-10);
  }

  TEST_CASE("eval with normalization samples a unit-norm wavefunction") {
    TempDir tmp;
    const std::string s3 = tmp.file("m3.json");
    REQUIRE(run({"solve", "--problem", problem("model3"), "--order", "6", "--out", s3}).code == 0);
    const Result r = run({"eval", "--series", s3, "--lambda", "0.1", "--normalize", "--grid", "1001"});
    REQUIRE(r.code == 0);
    const auto rows = table(r.out, '\t');
    double sum = 0.0;
    int samples = 0;
    bool in_samples = false;
    for (const auto& row : rows) {
      if (row.size() == 2 && row[0] == "x") {
        in_samples = true;
        continue;
      }
      if (!in_samples) continue;
      const double y = std::stod(row[1]);
      sum += y * y;
      ++samples;
    }
    REQUIRE(samples == 1001);
    // Trapezoid rule; both endpoint values vanish.
    CHECK(sum / (samples - 1) == doctest::Approx(1.0).epsilon(1e-5));
  }

  TEST_CASE("oracle subcommand") {
    TempDir tmp;
    const std::string s3 = tmp.file("m3.json");
    REQUIRE(run({"solve", "--problem", problem("model3"), "--order", "3", "--out", s3}).code == 0);
    const Result r = run({"oracle", "--problem", problem("model3"), "--series", s3, "--lambda", "1"});
    REQUIRE(r.code == 0);
    CHECK(std::abs(lookup(r.out, "eigenvalue") - 6.0) <= 1e-4);
    CHECK(lookup(r.out, "deviation") == doctest::Approx(0.0542).epsilon(1e-2));

    const Result m1 = run({"oracle", "--problem", problem("model1"), "--lambda", "0.5"});
    REQUIRE(m1.code == 0);
    CHECK(std::abs(lookup(m1.out, "eigenvalue") - 9.9321044010893586) <= 1e-6);

    const Result bad = run({"oracle", "--problem", problem("model1"), "--lambda", "0.5", "--guess", "-1e6", "--grid", "256"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("converge") != std::string::npos);
  }

  TEST_CASE("export columns") {
    const Result r = run({"export", "--problem", problem("model1"), "--order", "3"});
    REQUIRE(r.code == 0);
    const auto rows = table(r.out, ',');
    REQUIRE(rows.size() == 202);
    CHECK(rows[0] == std::vector<std::string>{"x", "y0", "y1", "y2", "y3"});
    CHECK(rows[1][0] == "0");
    CHECK(rows[201][0] == "1");
    for (int c = 1; c <= 4; ++c) {
      CHECK(std::abs(std::stod(rows[1][c])) <= 1e-12);
      CHECK(std::abs(std::stod(rows[201][c])) <= 1e-9);
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double x = std::stod(rows[i][0]);
      CHECK(std::abs(std::stod(rows[i][2]) - 0.5 * x * std::stod(rows[i][1])) <= 1e-12);
    }

    const Result m3 = run({"export", "--problem", problem("model3"), "--order", "1", "--amplitude", "1"});
    REQUIRE(m3.code == 0);
    const auto y1 = oracles::model3_y1_exact(1);
    const auto m3rows = table(m3.out, ',');
    for (std::size_t i = 1; i < m3rows.size(); ++i) {
      const double x = std::stod(m3rows[i][0]);
      // Unit amplitude is 1/sqrt(2) of the internal normalization.
      CHECK(std::abs(std::stod(m3rows[i][2]) - y1(x) / std::sqrt(2.0)) <= 1e-8);
    }
  }

  TEST_CASE("export of a summed wavefunction and of the series json") {
    TempDir tmp;
    const std::string s1 = tmp.file("m1.json");
    REQUIRE(run({"solve", "--problem", problem("model1"), "--order", "8", "--out", s1}).code == 0);
    const Result r = run({"export", "--series", s1, "--lambda", "0.5", "--grid", "11"});
    REQUIRE(r.code == 0);
    const auto rows = table(r.out, ',');
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] == std::vector<std::string>{"x", "y_sum"});
    const auto exact = oracles::model1_exact(1, 0.5);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double x = std::stod(rows[i][0]);
      CHECK(std::abs(std::stod(rows[i][1]) - exact.y(x)) <= 1e-8);
    }

    const std::string out = tmp.file("copy.json");
    REQUIRE(run({"export", "--series", s1, "--format", "json", "--out", out}).code == 0);
    CHECK(slurp(out) == slurp(s1));
  }

  TEST_CASE("repeated runs are byte identical") {
    TempDir tmp;
    const std::vector<std::string> base{"solve", "--problem", problem("model3"), "--n", "2", "--order", "4", "--out"};
    auto a = base;
    a.push_back(tmp.file("a.json"));
    auto b = base;
    b.push_back(tmp.file("b.json"));
    REQUIRE(run(a).code == 0);
    REQUIRE(run(b).code == 0);
    CHECK(slurp(tmp.file("a.json")) == slurp(tmp.file("b.json")));
    CHECK(run({"export", "--problem", problem("model3")}).out == run({"export", "--problem", problem("model3")}).out);
  }

  TEST_CASE("validate subcommand") {
    const Result ok = run({"validate", "--problem", problem("model1"), "--n", "3"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("valid\n") != std::string::npos);
    CHECK(lookup(ok.out, "wronskian_defect") <= 1e-10);

    TempDir tmp;
    std::ofstream(tmp.file("wrong.prob")) << "domain = 0 1\nv0 = 1\nperturbation.1.p2 = 0\n"
                                          << "perturbation.1.p1 = 1\nperturbation.1.p0 = 0\n";
    const Result no_state = run({"validate", "--problem", tmp.file("wrong.prob")});
    CHECK(no_state.code == 1);

    std::ofstream(tmp.file("closed.prob")) << "domain = 0 1\nv0 = 1\nperturbation.1.p2 = 0\n"
                                           << "perturbation.1.p1 = 1\nperturbation.1.p0 = 0\n"
                                           << "y0 = sin(pi*x)\nE0 = pi^2 + 1\n";
    const Result closed = run({"validate", "--problem", tmp.file("closed.prob")});
    CHECK(closed.code == 0);
    CHECK(lookup(closed.out, "E0") == doctest::Approx(pi * pi + 1.0));

    std::ofstream(tmp.file("off.prob")) << "domain = 0 1\nv0 = 1\nperturbation.1.p2 = 0\n"
                                        << "perturbation.1.p1 = 1\nperturbation.1.p0 = 0\n"
                                        << "y0 = sin(pi*x)\nE0 = pi^2\n";
    CHECK(run({"validate", "--problem", tmp.file("off.prob")}).code == 2);
  }
}
