#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "necorpia/experiments.hpp"

using namespace necorpia;
using namespace necorpia::experiments;

TEST_CASE("make_config fills the payload up to the packet length") {
  const HeaderConfig cfg = make_config({50, 50}, 16, 2048);
  CHECK(cfg.payload_len == 2048 - 100 - 16);
  CHECK(cfg.packet_len() == 2048);
  CHECK_THROWS_AS(make_config({50, 50}, 16, 100), std::invalid_argument);
}

TEST_CASE("decode trials recover the whole generation") {
  const HeaderConfig cfg = make_config({20, 20}, 16, 512);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const DecodeTrial trial = run_decode_trial(cfg, 12, seed);
    CHECK(trial.true_recovered == 12);
  }
}

TEST_CASE("sampled rank profiles are consistent") {
  const auto profiles = sample_rank_profiles(15, {10, 10}, 200, 77, 2);
  REQUIRE(profiles.size() == 200);
  for (const auto& p : profiles) {
    REQUIRE(p.rhos.size() == 3);
    CHECK(p.g() == 15);
    CHECK(p.rhos[0] >= 1);
    CHECK(p.rhos[0] <= 10);
  }
  // Thread count must not change the sample.
  const auto serial = sample_rank_profiles(15, {10, 10}, 200, 77, 1);
  for (size_t i = 0; i < profiles.size(); ++i) CHECK(profiles[i].rhos == serial[i].rhos);
}

TEST_CASE("CSV emitters have the documented schemas and parse cleanly") {
  const std::string pmf = csv_pmf_rho1_analytic({5}, 40);
  std::istringstream in(pmf);
  std::string header;
  std::getline(in, header);
  CHECK(header == "g,k,probability");
  uint32_t rows = 0;
  double total = 0.0;
  std::string line;
  while (std::getline(in, line)) {
    unsigned g, k;
    double p;
    REQUIRE(std::sscanf(line.c_str(), "%u,%u,%lf", &g, &k, &p) == 3);
    CHECK(g == 5);
    total += p;
    ++rows;
  }
  CHECK(rows == 6);
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("emitters are byte-deterministic") {
  const std::vector<uint32_t> gs{5, 10};
  CHECK(csv_pmf_rho1_empirical(gs, 50, 300, 9, 2) == csv_pmf_rho1_empirical(gs, 50, 300, 9, 2));
  CHECK(csv_expected_branches(gs, {50, 50}) == csv_expected_branches(gs, {50, 50}));
  CHECK(csv_cost_ratio_analytic(gs, {100}, 2048) == csv_cost_ratio_analytic(gs, {100}, 2048));
}

TEST_CASE("bench results do not depend on the thread count") {
  const auto par = run_bench_empirical({6, 10}, {8, 8}, 512, 40, 5, 2);
  const auto ser = run_bench_empirical({6, 10}, {8, 8}, 512, 40, 5, 1);
  CHECK(par.csv == ser.csv);
  CHECK(par.decodes == 160);
}

TEST_CASE("simulate config file parsing") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "necorpia_test_sim.cfg").string();
  {
    std::ofstream out(path);
    out << "# comment\n"
        << "N = 60\n"
        << "g = 4,8\n"
        << "topologies = 2\n"
        << "pc = 1e-5\n"
        << "seed = 9\n";
  }
  SimulateParams params;
  apply_config_file(path, params);
  CHECK(params.n_sensors == 60);
  CHECK(params.g_list == std::vector<uint32_t>{4, 8});
  CHECK(params.topologies == 2);
  CHECK(params.p_c == 1e-5);
  CHECK(params.seed == 9);
  {
    std::ofstream out(path);
    out << "bogus = 1\n";
  }
  CHECK_THROWS_AS(apply_config_file(path, params), std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("demo output is deterministic and reports a full recovery") {
  DemoParams params;
  params.lengths = {50, 50};
  params.g = 30;
  params.hash_len = 16;
  params.seed = 7;
  std::ostringstream a, b;
  CHECK(run_demo(params, a) == 0);
  CHECK(run_demo(params, b) == 0);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("true packets recovered: 30/30") != std::string::npos);
  CHECK(a.str().find("phantoms: 0") != std::string::npos);
}

TEST_CASE("demo golden transcript") {
  const char* dir = std::getenv("NECORPIA_GOLDEN_DIR");
  const std::string golden_dir = dir ? dir : "tests/golden";
  std::ifstream golden(golden_dir + "/demo_nv2_g30_seed7.txt");
  REQUIRE(golden.good());
  std::stringstream want;
  want << golden.rdbuf();
  DemoParams params;
  params.lengths = {50, 50};
  params.g = 30;
  params.hash_len = 16;
  params.seed = 7;
  std::ostringstream got;
  run_demo(params, got);
  CHECK(got.str() == want.str());
}

TEST_CASE("verify runs clean in quick mode") {
  std::ostringstream out;
  CHECK(run_verify(out, true) == 0);
  CHECK(out.str().find("[FAIL]") == std::string::npos);
}
