#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "gl2reps-cli-test";
    fs::remove_all(d);
    fs::create_directories(d);
    setenv("GL2REPS_CACHE", (d / "cache").c_str(), 1);
    return d;
  }();
  return dir;
}

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const fs::path err = work_dir() / "stderr.txt";
  const std::string cmd = std::string(GL2REPS_BINARY) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string file(const std::string& name) { return (work_dir() / name).string(); }

}  // namespace

TEST_CASE("classify and verify against the oracle") {
  const Run c = run("classify --flavor padic --p 2 --r 2 --out " + file("t.json"));
  CHECK(c.code == 0);
  CHECK(c.err.find("irreducibles: 14") != std::string::npos);
  const Run o = run("oracle --flavor padic --p 2 --r 2 --out " + file("o.json"));
  CHECK(o.code == 0);
  const Run v = run("verify --a " + file("t.json") + " --b " + file("o.json"));
  CHECK(v.code == 0);
  CHECK(v.out.find("rows: 14") != std::string::npos);

  const Run self = run("verify --a " + file("t.json") + " --b " + file("t.json"));
  CHECK(self.code == 0);
  CHECK(self.out.find("max residual: 0\n") != std::string::npos);

  // Second classify is served from the cache.
  const Run again = run("classify --flavor padic --p 2 --r 2 --out " + file("t2.json"));
  CHECK(again.code == 0);
  CHECK(again.err.find("cache hit") != std::string::npos);
  const Run same = run("verify --a " + file("t.json") + " --b " + file("t2.json"));
  CHECK(same.code == 0);
}

TEST_CASE("stdout output is a table") {
  const Run c = run("classify --flavor laurent --p 2 --r 1 --no-cache");
  REQUIRE(c.code == 0);
  const auto j = nlohmann::json::parse(c.out);
  CHECK(j.at("irreps").size() == 3);
  CHECK(j.at("spec").at("flavor") == "laurent");
}

TEST_CASE("errors and exit codes") {
  const Run big = run("classify --flavor padic --p 2 --r 9");
  CHECK(big.code == 1);
  CHECK(big.err.find("too large") != std::string::npos);

  CHECK(run("classify --flavor padic --p 2 --r 2 --bogus").code == 64);
  CHECK(run("classify --flavor octonion --p 2 --r 2").code == 64);
  CHECK(run("classify --flavor padic --p 4 --r 2").code == 64);
  CHECK(run("").code == 64);

  REQUIRE(run("classify --flavor padic --p 2 --r 1 --out " + file("a.json")).code == 0);
  REQUIRE(run("classify --flavor laurent --p 2 --r 1 --out " + file("b.json")).code == 0);
  const Run mismatch = run("verify --a " + file("a.json") + " --b " + file("b.json"));
  CHECK(mismatch.code == 65);
  CHECK(mismatch.err.find("spec mismatch") != std::string::npos);

  std::ofstream(file("junk.json")) << "{";
  CHECK(run("verify --a " + file("junk.json") + " --b " + file("a.json")).code == 65);
}

TEST_CASE("a corrupted value is rejected") {
  REQUIRE(run("classify --flavor padic --p 2 --r 2 --out " + file("good.json")).code == 0);
  auto j = nlohmann::json::parse(std::ifstream(file("good.json")));
  j["irreps"][4]["values"][2][0] = j["irreps"][4]["values"][2][0].get<double>() + 0.1;
  std::ofstream(file("bad.json")) << j.dump();
  const Run v = run("verify --a " + file("bad.json") + " --b " + file("good.json"));
  CHECK(v.code == 2);
  CHECK(v.err.find("certificate FAILED") != std::string::npos);
}
