#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <string>

// End-to-end coverage of the installed command surface: subcommands, flags,
// file formats, and the exit-code contract (0 ok, 2 infeasible/check-fail,
// 3 invalid input, 4 numerical failure).

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CONECERT_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buffer{};
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buffer.data(), buffer.size(), pipe)) result.output += buffer.data();
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("conecert_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

double parse_gamma(const std::string& output) {
  const auto pos = output.find("gamma = ");
  REQUIRE(pos != std::string::npos);
  return std::stod(output.substr(pos + 8));
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

const char* kScalarPss = R"({
  "kind":"pss","dimensions":{"n":1,"q":1,"r":1},
  "modes":[{"label":1,"A":[[0.5]],"B":[[1.0]],"C":[[1.0]],"D":[[0.0]]}],
  "graph":{"nodes":["v1"],"edges":[{"from":"v1","label":1,"to":"v1"}]}
})";

const char* kScalarGss = R"({
  "kind":"gss","dimensions":{"n":1,"q":1,"r":1},
  "modes":[{"label":1,"A":[[0.5]],"B":[[1.0]],"C":[[1.0]],"D":[[0.0]]}],
  "graph":{"nodes":["v1"],"edges":[{"from":"v1","label":1,"to":"v1"}]}
})";

}  // namespace

TEST_CASE("example, validate, and certify chained") {
  TempDir tmp;
  const std::string virus = tmp.file("virus.json");

  const RunResult gen = run_cli("example virus --out " + virus);
  CHECK(gen.exit_code == 0);

  const RunResult validated = run_cli("validate " + virus);
  CHECK(validated.exit_code == 0);
  CHECK(validated.output.find("warning") != std::string::npos);
  CHECK(validated.output.find("m1") != std::string::npos);

  const std::string cert = tmp.file("cert.json");
  const RunResult certified = run_cli("certify l1 " + virus + " --out " + cert);
  CHECK(certified.exit_code == 0);
  CHECK(parse_gamma(certified.output) == doctest::Approx(9451.0).epsilon(0.01));

  const RunResult checked = run_cli("check " + virus + " " + cert);
  CHECK(checked.exit_code == 0);
  CHECK(checked.output.find("check passed") != std::string::npos);

  SUBCASE("parameter variants certify to the reference gains") {
    const RunResult kc = run_cli("example virus --kc 0.8 --out " + tmp.file("kc.json"));
    REQUIRE(kc.exit_code == 0);
    CHECK(parse_gamma(run_cli("certify l1 " + tmp.file("kc.json")).output) ==
          doctest::Approx(4586.0).epsilon(0.01));

    const RunResult kb = run_cli("example virus --kb 0.85 --out " + tmp.file("kb.json"));
    REQUIRE(kb.exit_code == 0);
    CHECK(parse_gamma(run_cli("certify l1 " + tmp.file("kb.json")).output) ==
          doctest::Approx(109145.0).epsilon(0.01));
  }

  SUBCASE("tampered gamma fails the checker with exit 2") {
    std::ifstream in(cert);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto pos = text.find("\"gamma\":");
    REQUIRE(pos != std::string::npos);
    const auto end = text.find(',', pos);
    text.replace(pos, end - pos, "\"gamma\": 4000.0");
    const std::string tampered = tmp.file("tampered.json");
    write_file(tampered, text);
    const RunResult failed = run_cli("check " + virus + " " + tampered);
    CHECK(failed.exit_code == 2);
    CHECK(failed.output.find("check FAILED") != std::string::npos);
  }

  SUBCASE("certificate with foreign node names exits 3") {
    const std::string foreign = tmp.file("foreign.json");
    write_file(foreign, R"({"kind":"l1","gamma":2.0,"margin":1e-7,"p":{"x1":[1.0]}})");
    CHECK(run_cli("check " + virus + " " + foreign).exit_code == 3);
  }
}

TEST_CASE("exit code 3 paths") {
  TempDir tmp;
  const std::string broken = tmp.file("broken.json");
  write_file(broken, "{ not json");
  CHECK(run_cli("validate " + broken).exit_code == 3);

  const std::string sink = tmp.file("sink.json");
  write_file(sink, R"({
    "kind":"pss","dimensions":{"n":1,"q":1,"r":1},
    "modes":[{"label":1,"A":[[0.5]],"B":[[1]],"C":[[1]],"D":[[0]]}],
    "graph":{"nodes":["v1","v2"],"edges":[{"from":"v1","label":1,"to":"v2"}]}
  })");
  const RunResult sunk = run_cli("validate " + sink);
  CHECK(sunk.exit_code == 3);
  CHECK(sunk.output.find("v2") != std::string::npos);

  CHECK(run_cli("example nosuch").exit_code == 3);
  CHECK(run_cli("validate /nonexistent.json").exit_code == 3);

  const std::string scalar = tmp.file("scalar.json");
  write_file(scalar, kScalarPss);
  CHECK(run_cli("simulate " + scalar + " --start v9").exit_code == 3);
  CHECK(run_cli("certify l1 " + scalar + " --badflag").exit_code == 3);
  CHECK(run_cli("oracle " + scalar + " --horizon 3 --kind l7").exit_code == 3);

  const std::string gss = tmp.file("gss.json");
  write_file(gss, kScalarGss);
  CHECK(run_cli("certify l1 " + gss).exit_code == 3);
  CHECK(run_cli("oracle " + gss + " --horizon 3 --kind l1").exit_code == 3);
}

TEST_CASE("stability subcommand") {
  TempDir tmp;
  const std::string unstable = tmp.file("arb_m1.json");
  write_file(unstable, R"({
    "kind":"pss","dimensions":{"n":3,"q":1,"r":1},
    "modes":[{"label":1,
      "A":[[-0.1,0.4,0.4],[0.4,0.6,0.4],[0.4,0.4,0.6]],
      "B":[[100],[100],[100]],"C":[[1,1,1]],"D":[[0]]}],
    "graph":{"nodes":["v1"],"edges":[{"from":"v1","label":1,"to":"v1"}]}
  })");
  CHECK(run_cli("certify stability " + unstable).exit_code == 2);

  const std::string stable = tmp.file("scalar.json");
  write_file(stable, kScalarPss);
  const std::string cert = tmp.file("stab.json");
  const RunResult ok = run_cli("certify stability " + stable + " --out " + cert);
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("stable") != std::string::npos);
  CHECK(run_cli("check " + stable + " " + cert).exit_code == 0);
}

TEST_CASE("simulate is deterministic and honors the certificate") {
  TempDir tmp;
  const std::string virus = tmp.file("virus.json");
  REQUIRE(run_cli("example virus --out " + virus).exit_code == 0);
  const std::string cert = tmp.file("cert.json");
  REQUIRE(run_cli("certify l1 " + virus + " --out " + cert).exit_code == 0);

  const std::string args =
      "simulate " + virus + " --steps 50 --seed 7 --input impulse --cert " + cert;
  const RunResult first = run_cli(args);
  CHECK(first.exit_code == 0);
  CHECK(first.output.find("min slack") != std::string::npos);
  CHECK(first.output.find("all steps strict") != std::string::npos);

  const RunResult second = run_cli(args);
  CHECK(second.output == first.output);

  const RunResult random_run =
      run_cli("simulate " + virus + " --steps 40 --seed 11 --input random --cert " + cert +
              " --out " + tmp.file("trace.csv"));
  CHECK(random_run.exit_code == 0);
  std::ifstream csv(tmp.file("trace.csv"));
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,node,mode,x1,x2,x3,w1,z1,V");
}

TEST_CASE("thread count does not change oracle output") {
  TempDir tmp;
  const std::string virus = tmp.file("virus.json");
  REQUIRE(run_cli("example virus --out " + virus).exit_code == 0);
  const RunResult serial = run_cli("oracle " + virus + " --kind l2 --horizon 9");
  const RunResult flagged = run_cli("--threads 4 oracle " + virus + " --kind l2 --horizon 9");
  CHECK(serial.exit_code == 0);
  CHECK(flagged.output == serial.output);
  // The flag also parses after the subcommand.
  const RunResult trailing = run_cli("oracle " + virus + " --kind l2 --horizon 9 --threads 4");
  CHECK(trailing.output == serial.output);
  // CONECERT_THREADS is the environment fallback for --threads.
  const std::string env_cmd = "CONECERT_THREADS=3 " + std::string(CONECERT_CLI_PATH) +
                              " oracle " + virus + " --kind l2 --horizon 9 2>&1";
  std::array<char, 4096> buffer{};
  std::string env_output;
  FILE* pipe = popen(env_cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buffer.data(), buffer.size(), pipe)) env_output += buffer.data();
  pclose(pipe);
  CHECK(env_output == serial.output);
}

TEST_CASE("oracle subcommand values") {
  TempDir tmp;
  const std::string scalar = tmp.file("scalar.json");
  write_file(scalar, kScalarPss);

  const RunResult l1 = run_cli("oracle " + scalar + " --kind l1 --horizon 20");
  CHECK(l1.exit_code == 0);
  const auto pos = l1.output.find("= ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(l1.output.substr(pos + 2)) ==
        doctest::Approx(2.0 * (1.0 - std::pow(0.5, 19))).epsilon(1e-9));

  const std::string gss = tmp.file("gss.json");
  write_file(gss, kScalarGss);
  const RunResult l2 = run_cli("oracle " + gss + " --kind l2 --horizon 40");
  CHECK(l2.exit_code == 0);
  const auto pos2 = l2.output.find("= ");
  CHECK(std::stod(l2.output.substr(pos2 + 2)) == doctest::Approx(1.988362239679).epsilon(1e-6));

  const RunResult zero = run_cli("oracle " + scalar + " --kind l1 --horizon 0");
  CHECK(zero.exit_code == 0);
  CHECK(zero.output.find("= 0") != std::string::npos);
}

TEST_CASE("l2 certify through the CLI") {
  TempDir tmp;
  const std::string gss = tmp.file("gss.json");
  write_file(gss, kScalarGss);
  const std::string cert = tmp.file("l2cert.json");
  const RunResult res = run_cli("certify l2 " + gss + " --out " + cert);
  CHECK(res.exit_code == 0);
  CHECK(parse_gamma(res.output) == doctest::Approx(4.0).epsilon(2.5e-3));
  CHECK(run_cli("check " + gss + " " + cert).exit_code == 0);
}
