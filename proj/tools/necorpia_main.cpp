#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "necorpia/experiments.hpp"
#include "necorpia/parallel.hpp"

namespace {

using namespace necorpia;

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  std::cout << "wrote " << path << "\n";
}

std::vector<uint32_t> parse_u32_list(const std::string& s) {
  std::vector<uint32_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(static_cast<uint32_t>(std::stoul(tok)));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NeCoRPIA toolkit: random packet-index network coding, DeRPIA decoding,"
               " analytics, and broadcast simulation"};
  app.require_subcommand(1);
  int exit_code = 0;

  // demo
  auto* demo = app.add_subcommand("demo", "encode and decode one generation, print the stats");
  std::string demo_lengths = "50,50";
  experiments::DemoParams demo_params;
  std::string demo_variant = "sle";
  unsigned demo_nv = 0;
  demo->add_option("--nv", demo_nv, "number of header subvectors (defaults to the size of --L)");
  demo->add_option("--L", demo_lengths, "comma-separated subvector lengths");
  demo->add_option("--g", demo_params.g, "generation size");
  demo->add_option("--Lh", demo_params.hash_len, "hash length in bits");
  demo->add_option("--Lx", demo_params.packet_bits, "packet length in bits");
  demo->add_option("--seed", demo_params.seed, "RNG seed");
  demo->add_option("--variant", demo_variant, "sle or lut");
  demo->callback([&] {
    demo_params.lengths = parse_u32_list(demo_lengths);
    if (demo_nv != 0 && demo_nv != demo_params.lengths.size())
      throw CLI::ValidationError("--nv disagrees with the number of --L entries");
    if (demo_params.g == 0) throw CLI::ValidationError("--g must be >= 1");
    if (demo_variant != "sle" && demo_variant != "lut")
      throw CLI::ValidationError("--variant must be sle or lut");
    demo_params.variant = demo_variant == "lut" ? DecodeVariant::Lut : DecodeVariant::Sle;
    exit_code = experiments::run_demo(demo_params, std::cout);
  });

  // analyze
  auto* analyze = app.add_subcommand("analyze", "emit analytic pmf/expectation CSV files");
  std::string an_what = "pmf-rho1";
  std::string an_g = "5,10,20,30";
  uint32_t an_l1 = 100, an_l2 = 50, an_lh = 16, an_trials = 1000;
  std::string an_lengths = "";
  uint64_t an_seed = 1;
  int an_threads = hardware_threads();
  std::string an_out = "out";
  analyze->add_option("--what", an_what,
                      "pmf-rho1 | ccdf-rho2 | joint-nv2 | ccdf-rho3 | branches | error");
  analyze->add_option("--g", an_g, "comma-separated generation sizes");
  analyze->add_option("--L1", an_l1, "first block length");
  analyze->add_option("--L2", an_l2, "second block length (nv=2 laws)");
  analyze->add_option("--L", an_lengths, "block lengths for branches/error");
  analyze->add_option("--Lh", an_lh, "hash length for error bounds");
  analyze->add_option("--trials", an_trials, "Monte Carlo trials per point");
  analyze->add_option("--seed", an_seed, "RNG seed");
  analyze->add_option("--threads", an_threads, "worker threads");
  analyze->add_option("--out", an_out, "output directory");
  analyze->callback([&] {
    const auto g_list = parse_u32_list(an_g);
    std::cout << "seed=" << an_seed << "\n";
    if (an_what == "pmf-rho1") {
      write_file(an_out, "rho1_pmf_analytic.csv", experiments::csv_pmf_rho1_analytic(g_list, an_l1));
      write_file(an_out, "rho1_pmf_empirical.csv",
                 experiments::csv_pmf_rho1_empirical(g_list, an_l1, an_trials, an_seed, an_threads));
    } else if (an_what == "ccdf-rho2") {
      write_file(an_out, "rho2_ccdf.csv", experiments::csv_ccdf_rho2(g_list, an_l1));
    } else if (an_what == "joint-nv2") {
      for (uint32_t g : g_list)
        write_file(an_out, "joint_nv2_g" + std::to_string(g) + ".csv",
                   experiments::csv_joint_nv2(g, an_l1, an_l2));
    } else if (an_what == "ccdf-rho3") {
      write_file(an_out, "rho3_ccdf.csv", experiments::csv_ccdf_rho3(g_list, an_l1, an_l2));
    } else if (an_what == "branches") {
      const auto lengths = an_lengths.empty() ? std::vector<uint32_t>{an_l1}
                                              : parse_u32_list(an_lengths);
      write_file(an_out, "expected_branches.csv",
                 experiments::csv_expected_branches(g_list, lengths));
    } else if (an_what == "error") {
      const auto lengths = an_lengths.empty() ? std::vector<uint32_t>{an_l1}
                                              : parse_u32_list(an_lengths);
      write_file(an_out, "error_bound.csv", experiments::csv_error_bound(g_list, lengths, an_lh));
    } else {
      throw CLI::ValidationError("unknown --what: " + an_what);
    }
  });

  // simulate
  auto* simulate = app.add_subcommand("simulate", "header-overhead comparison on random topologies");
  experiments::SimulateParams sim_params;
  sim_params.g_list = {4, 8, 12, 16, 20, 24, 28, 32, 36, 40, 44, 48};
  sim_params.threads = hardware_threads();
  std::string sim_g = "";
  std::string sim_config = "";
  std::string sim_out = "out";
  simulate->add_option("--config", sim_config, "key = value config file (flags override)");
  simulate->add_option("--N", sim_params.n_sensors, "sensor count (plus one sink)");
  simulate->add_option("--g", sim_g, "comma-separated active source counts");
  simulate->add_option("--topologies", sim_params.topologies, "network realizations to average");
  simulate->add_option("--pc", sim_params.p_c, "target decoding error probability");
  simulate->add_option("--nb-max", sim_params.nb_max, "terminal branch budget (adaptive headers)");
  simulate->add_option("--fixed-len", sim_params.fixed_block_len, "fixed NeCoRPIA block length");
  simulate->add_option("--seed", sim_params.seed, "RNG seed");
  simulate->add_option("--threads", sim_params.threads, "worker threads");
  simulate->add_option("--out", sim_out, "output directory");
  simulate->parse_complete_callback([&] {
    if (!sim_config.empty()) {
      experiments::SimulateParams from_file = sim_params;
      experiments::apply_config_file(sim_config, from_file);
      // Flags that were set explicitly win over the file.
      if (simulate->count("--N") == 0) sim_params.n_sensors = from_file.n_sensors;
      if (simulate->count("--g") == 0 && sim_g.empty()) sim_params.g_list = from_file.g_list;
      if (simulate->count("--topologies") == 0) sim_params.topologies = from_file.topologies;
      if (simulate->count("--pc") == 0) sim_params.p_c = from_file.p_c;
      if (simulate->count("--nb-max") == 0) sim_params.nb_max = from_file.nb_max;
      if (simulate->count("--fixed-len") == 0)
        sim_params.fixed_block_len = from_file.fixed_block_len;
      if (simulate->count("--seed") == 0) sim_params.seed = from_file.seed;
      if (simulate->count("--threads") == 0) sim_params.threads = from_file.threads;
    }
    if (!sim_g.empty()) sim_params.g_list = parse_u32_list(sim_g);
    std::cout << "seed=" << sim_params.seed << "\n";
    const auto out = experiments::run_header_comparison(sim_params);
    write_file(sim_out, "header_comparison.csv", out.header_csv);
    write_file(sim_out, "nonzero_coeffs.csv", out.nonzero_csv);
  });

  // bench
  auto* bench = app.add_subcommand("bench", "decoding complexity: formulas vs instrumented runs");
  std::string bench_g = "5,10,15,20";
  std::string bench_lengths = "50,50";
  uint32_t bench_trials = 1000, bench_lx = 2048;
  uint64_t bench_seed = 1;
  int bench_threads = hardware_threads();
  bool bench_compare_serial = false;
  std::string bench_out = "out";
  bench->add_option("--g", bench_g, "comma-separated generation sizes");
  bench->add_option("--L", bench_lengths, "block lengths");
  bench->add_option("--Lx", bench_lx, "packet length in bits");
  bench->add_option("--trials", bench_trials, "decodes per point");
  bench->add_option("--seed", bench_seed, "RNG seed");
  bench->add_option("--threads", bench_threads, "worker threads");
  bench->add_flag("--compare-serial", bench_compare_serial,
                  "run the batch single-threaded too and check the results agree");
  bench->add_option("--out", bench_out, "output directory");
  bench->callback([&] {
    const auto g_list = parse_u32_list(bench_g);
    const auto lengths = parse_u32_list(bench_lengths);
    std::cout << "seed=" << bench_seed << "\n";
    write_file(bench_out, "cost_ratio_analytic.csv",
               experiments::csv_cost_ratio_analytic(g_list, lengths, bench_lx));
    const auto par = experiments::run_bench_empirical(g_list, lengths, bench_lx, bench_trials,
                                                      bench_seed, bench_threads);
    write_file(bench_out, "cost_ratio_empirical.csv", par.csv);
    std::cout << "decodes=" << par.decodes << " threads=" << bench_threads
              << " seconds=" << par.seconds << "\n";
    if (bench_compare_serial) {
      const auto ser = experiments::run_bench_empirical(g_list, lengths, bench_lx, bench_trials,
                                                        bench_seed, 1);
      std::cout << "decodes=" << ser.decodes << " threads=1 seconds=" << ser.seconds << "\n";
      if (ser.csv != par.csv) {
        std::cerr << "serial and parallel runs disagree\n";
        exit_code = 3;
      } else {
        std::cout << "serial and parallel results identical; speedup="
                  << (par.seconds > 0 ? ser.seconds / par.seconds : 0.0) << "\n";
      }
    }
  });

  // verify
  auto* verify = app.add_subcommand("verify", "run the oracle-equivalence and pmf checks");
  bool verify_quick = false;
  verify->add_flag("--quick", verify_quick, "smaller trial counts");
  verify->callback([&] { exit_code = experiments::run_verify(std::cout, verify_quick); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
