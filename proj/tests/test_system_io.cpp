#include <doctest.h>

#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>

#include "conecert/errors.hpp"
#include "conecert/l1cert.hpp"
#include "conecert/system_io.hpp"
#include "test_support.hpp"

using namespace conecert;
using conecert::testing::random_gss;
using conecert::testing::random_pss;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("conecert_io_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("system files round-trip bit for bit") {
  for (std::uint64_t seed = 5000; seed < 5030; ++seed) {
    const SystemDescription s = seed % 2 ? random_pss(seed) : random_gss(seed);
    const std::string text = system_to_json(s);
    const SystemDescription back = system_from_json(text);

    CHECK(back.kind == s.kind);
    CHECK(back.dims.n == s.dims.n);
    CHECK(back.graph.edges == s.graph.edges);
    CHECK(back.graph.nodes == s.graph.nodes);
    REQUIRE(back.modes.size() == s.modes.size());
    for (std::size_t l = 0; l < s.modes.size(); ++l) {
      // Bit-exact: shortest round-trip float formatting in the writer.
      CHECK(back.modes[l].a.entries() == s.modes[l].a.entries());
      CHECK(back.modes[l].b.entries() == s.modes[l].b.entries());
      CHECK(back.modes[l].c.entries() == s.modes[l].c.entries());
      CHECK(back.modes[l].d.entries() == s.modes[l].d.entries());
    }
    // Serialize-parse-serialize is a fixed point.
    CHECK(system_to_json(back) == text);
  }
}

TEST_CASE("virus file parses back to a valid system") {
  const SystemDescription s = build_virus_example();
  const SystemDescription back = system_from_json(system_to_json(s));
  CHECK(validate_system(back).ok());
  CHECK(back.modes[0].a(0, 0) == s.modes[0].a(0, 0));  // bit-identical through the file
  CHECK(back.modes[0].a(0, 0) == doctest::Approx(-0.1));
}

TEST_CASE("parse errors carry context") {
  CHECK_THROWS_AS(system_from_json("{"), InputError);
  CHECK_THROWS_AS(system_from_json("{}"), InputError);
  CHECK_THROWS_AS(system_from_json(R"({"kind":"nope"})"), InputError);

  const char* ragged = R"({
    "kind":"pss","dimensions":{"n":2,"q":1,"r":1},
    "modes":[{"label":1,"A":[[1,2],[3]],"B":[[1],[1]],"C":[[1,1]],"D":[[0]]}],
    "graph":{"nodes":["v1"],"edges":[{"from":"v1","label":1,"to":"v1"}]}
  })";
  CHECK_THROWS_AS(system_from_json(ragged), InputError);

  const char* bad_node = R"({
    "kind":"pss","dimensions":{"n":1,"q":1,"r":1},
    "modes":[{"label":1,"A":[[1]],"B":[[1]],"C":[[1]],"D":[[0]]}],
    "graph":{"nodes":["v1"],"edges":[{"from":"v9","label":1,"to":"v1"}]}
  })";
  CHECK_THROWS_AS(system_from_json(bad_node), InputError);

  const char* gapped_labels = R"({
    "kind":"pss","dimensions":{"n":1,"q":1,"r":1},
    "modes":[{"label":2,"A":[[1]],"B":[[1]],"C":[[1]],"D":[[0]]}],
    "graph":{"nodes":["v1"],"edges":[{"from":"v1","label":2,"to":"v1"}]}
  })";
  CHECK_THROWS_AS(system_from_json(gapped_labels), InputError);
}

TEST_CASE("certificates round-trip through files") {
  TempDir tmp;
  const SystemDescription s = build_virus_example();
  const auto cert = certify_l1(s);
  REQUIRE(cert.has_value());

  const auto cert_path = tmp.path / "cert.json";
  write_certificate(*cert, s.graph, cert_path);
  CHECK(read_certificate_kind(cert_path) == CertificateKind::L1);

  const L1Certificate back = read_l1_certificate(cert_path, s.graph);
  CHECK(back.gamma == cert->gamma);
  CHECK(back.margin == cert->margin);
  REQUIRE(back.p.size() == cert->p.size());
  for (std::size_t i = 0; i < back.p.size(); ++i) CHECK(back.p[i] == cert->p[i]);

  SUBCASE("wrong node names are rejected") {
    SwitchingGraph renamed = s.graph;
    renamed.nodes = {"a", "b", "c", "d"};
    CHECK_THROWS_AS(read_l1_certificate(cert_path, renamed), InputError);
  }
  SUBCASE("kind mismatch is rejected") {
    CHECK_THROWS_AS(read_l2_certificate(cert_path, s.graph), InputError);
  }
}

TEST_CASE("missing files are input errors") {
  CHECK_THROWS_AS(read_system("/nonexistent/system.json"), InputError);
  CHECK_THROWS_AS(read_certificate_kind("/nonexistent/cert.json"), InputError);
}

TEST_CASE("csv trace layout") {
  TempDir tmp;
  const SystemDescription s = conecert::testing::scalar_system(0.5, 1, 1, 0);
  Walk walk;
  walk.start = 0;
  walk.steps = {{0, 0}, {0, 0}};
  const Trajectory traj = simulate(s, walk, {{1.0}, {0.0}}, {0.0});
  const std::vector<double> lyap = {0.0, 2.0, 1.0};

  const auto csv_path = tmp.path / "trace.csv";
  write_trace_csv(csv_path, s, traj, &lyap);

  std::ifstream in(csv_path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,node,mode,x1,w1,z1,V");
  std::string row;
  int rows = 0;
  while (std::getline(in, row)) ++rows;
  CHECK(rows == 3);  // two steps plus the terminal state
}
