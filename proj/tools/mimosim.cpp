// Experiment runner for the MIMO ad hoc network simulator: topology
// generation, a_t calibration, and policy sweeps producing CSV reports.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mimosim/mimosim.hpp"

namespace fs = std::filesystem;

namespace {

std::string default_out_root() {
  if (const char* env = std::getenv("MIMOSIM_OUT")) return env;
  return "out";
}

int cmd_run(const std::string& config_arg, const std::string& out_dir, int jobs,
            std::uint64_t seed, bool have_seed) {
  mimosim::ExperimentConfig cfg;
  if (auto preset = mimosim::preset_config(config_arg)) {
    cfg = mimosim::ExperimentConfig::parse_text(*preset);
  } else {
    std::ifstream in(config_arg);
    if (!in) {
      std::fprintf(stderr, "error: '%s' is neither a preset nor a readable file\n",
                   config_arg.c_str());
      return 1;
    }
    cfg = mimosim::ExperimentConfig::parse(in);
  }
  const fs::path out = out_dir.empty() ? fs::path(default_out_root()) / cfg.name
                                       : fs::path(out_dir);
  std::optional<std::uint64_t> seed_override;
  if (have_seed) seed_override = seed;
  const auto outcome = mimosim::run_experiment(cfg, out, jobs, seed_override);
  for (const auto& pt : outcome.points) {
    if (pt.skipped) {
      std::printf("%-28s skipped (manifest)\n", pt.label.c_str());
    } else {
      std::printf("%-28s thr %10.1f +- %8.1f bps   delay %7.3f s   jain %.3f\n",
                  pt.label.c_str(), pt.throughput.mean, pt.throughput.ci95_half,
                  pt.delay.mean, pt.jain.mean);
    }
  }
  std::printf("results: %s\n", outcome.out_dir.string().c_str());
  return 0;
}

int cmd_gen_topologies(const mimosim::TopologyBatchSpec& spec, const std::string& out_dir) {
  const fs::path out =
      out_dir.empty() ? fs::path(default_out_root()) / "topologies" : fs::path(out_dir);
  const auto files = mimosim::gen_topologies(spec, out);
  for (const auto& f : files) {
    const auto topo = mimosim::load_topology(f.string());
    const auto deg = mimosim::sensing_degree(topo, mimosim::kSisoSenseRangeM);
    std::printf("%s  nodes=%zu  mean_degree=%.2f  class=%s\n", f.string().c_str(),
                topo.nodes.size(), deg.mean, mimosim::to_string(topo.contention));
  }
  return 0;
}

int cmd_calibrate(const std::string& out_file, const std::string& curves_file,
                  std::uint64_t seed, long long trials, int max_mn, int jobs) {
  mimosim::AtTable table;
  std::ofstream curves;
  if (!curves_file.empty()) {
    curves.open(curves_file);
    curves << "M,N,gamma0_db,ber,ci95\n";
  }
  for (int m = 1; m <= max_mn; ++m) {
    for (int n = m; n <= max_mn; ++n) {
      const auto res = mimosim::calibrate_at(m, n, seed, trials, 8 * trials, 50, jobs);
      table.set(m, n, res.a_t);
      std::printf("a_t(%d,%d) = %.4f   [", m, n, res.a_t);
      for (const auto& pt : res.grid) {
        std::printf(" %g dB: ber=%.3g trials=%lld%s", pt.gamma_db, pt.ber,
                    static_cast<long long>(pt.trials), pt.starved ? " (starved)" : "");
      }
      std::printf(" ]\n");
      std::fflush(stdout);
      if (curves.is_open()) {
        for (double gdb = 0.0; gdb <= 30.0; gdb += 2.0) {
          const auto s = mimosim::simulate_vblast_ber(
              m, n, mimosim::db_to_linear(gdb),
              std::max(200000LL, trials / 50), seed + 1, jobs);
          char buf[128];
          std::snprintf(buf, sizeof buf, "%d,%d,%g,%.6g,%.3g\n", m, n, gdb, s.ber, s.ci95);
          curves << buf;
        }
        curves.flush();
      }
    }
  }
  std::ofstream out(out_file);
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", out_file.c_str());
    return 1;
  }
  out << "# generated by: mimosim calibrate --seed " << seed << " --trials " << trials
      << "\n";
  out << table.to_text();
  std::printf("wrote %s\n", out_file.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIMO ad hoc CSMA/CA network simulator"};
  app.require_subcommand(1);
  const int hw = static_cast<int>(std::thread::hardware_concurrency());

  // run
  std::string run_config;
  std::string run_out;
  int run_jobs = hw > 0 ? hw : 1;
  std::uint64_t run_seed = 0;
  auto* run = app.add_subcommand("run", "execute an experiment config or preset");
  run->add_option("config", run_config, "config file path or preset name")->required();
  run->add_option("--out-dir", run_out, "output directory");
  run->add_option("--jobs", run_jobs, "worker threads");
  auto* seed_opt = run->add_option("--seed", run_seed, "override the base seed");

  // gen-topologies
  mimosim::TopologyBatchSpec spec;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-topologies",
                                 "generate LOW/MEDIUM/HIGH contention topology files");
  gen->add_option("--count", spec.count_per_class, "files per contention class");
  gen->add_option("--nodes", spec.nodes, "nodes per topology");
  gen->add_option("--terrain", spec.terrain_m, "terrain side in meters (MEDIUM class)");
  gen->add_option("--max-pair", spec.max_pair_m, "max source-destination distance");
  gen->add_option("--seed", spec.seed, "generator seed");
  gen->add_option("--out-dir", gen_out, "output directory");

  // calibrate
  std::string cal_out = "vblast_at.txt";
  std::string cal_curves;
  std::uint64_t cal_seed = 20240817;
  long long cal_trials = 10000000;
  int cal_max = 5;
  int cal_jobs = hw > 0 ? hw : 1;
  auto* cal = app.add_subcommand("calibrate",
                                 "measure V-BLAST a_t coefficients with the MC oracle");
  cal->add_option("--out", cal_out, "a_t table output file");
  cal->add_option("--curves", cal_curves, "also emit BER curve CSV here");
  cal->add_option("--seed", cal_seed, "oracle seed");
  cal->add_option("--trials", cal_trials, "base trials per SNR grid point");
  cal->add_option("--max-antennas", cal_max, "calibrate all 1 <= M <= N <= this");
  cal->add_option("--jobs", cal_jobs, "worker threads");

  // preset
  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "print a built-in experiment config");
  preset->add_option("name", preset_name, "preset name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(run_config, run_out, run_jobs, run_seed, seed_opt->count() > 0);
    }
    if (gen->parsed()) return cmd_gen_topologies(spec, gen_out);
    if (cal->parsed()) {
      return cmd_calibrate(cal_out, cal_curves, cal_seed, cal_trials, cal_max, cal_jobs);
    }
    if (preset->parsed()) {
      if (auto text = mimosim::preset_config(preset_name)) {
        std::fputs(text->c_str(), stdout);
        return 0;
      }
      std::fprintf(stderr, "unknown preset '%s'; available:", preset_name.c_str());
      for (const auto& n : mimosim::preset_names()) std::fprintf(stderr, " %s", n.c_str());
      std::fprintf(stderr, "\n");
      return 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
