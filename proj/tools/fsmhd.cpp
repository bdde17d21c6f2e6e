// Command-line front end: run a case, print a convergence table, or run the
// verification suite.
//
// Exit codes: 0 success, 2 loss of physical validity, 3 configuration error.

#include "fsmhd/acceptance.hpp"
#include "fsmhd/driver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace {

constexpr int kExitPhysical = 2;
constexpr int kExitConfig = 3;

void print_result(const fsmhd::RunResult& r) {
  std::printf("case=%s steps=%d time=%.17g wall=%.3fs\n", r.case_id.c_str(), r.steps, r.time,
              r.wall_seconds);
  if (r.error)
    std::printf("L1=%.6e Linf=%.6e\n", r.error->l1, r.error->linf);
  if (r.mhd)
    std::printf("max|v|=%.6e max|w|=%.6e min_rho=%.6e min_p=%.6e divB_max=%.6e divB_L1=%.6e\n",
                r.max_abs_v, r.max_abs_w, r.min_rho, r.min_p, r.div_max, r.div_l1);
  std::printf("A_min=%.6e A_max=%.6e\n", r.a_min, r.a_max);
  for (const auto& f : r.files) std::printf("wrote %s\n", f.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-stream preserving WENO solver for ideal MHD on curvilinear grids"};
  app.require_subcommand(1);

  // Flags of `run` are collected as strings and applied in command-line
  // order on top of an optional config file.
  auto* run = app.add_subcommand("run", "run one case");
  std::string config_file;
  run->add_option("--config", config_file, "flat key = value file with the same keys as the flags");
  std::vector<std::pair<std::string, std::string>> settings;
  const std::vector<std::pair<std::string, std::string>> keys = {
      {"case", "case id"},
      {"scheme", "pl | npl"},
      {"sigma", "on | off"},
      {"nx", "nodes in xi"},
      {"ny", "nodes in eta"},
      {"cfl", "CFL number"},
      {"tfinal", "final time"},
      {"dt", "fixed time step"},
      {"dt-max", "fallback step when the wave speed vanishes"},
      {"out", "output directory"},
      {"output-every", "dump every N steps (0: final only)"},
      {"seed", "RNG seed of randomized grids"},
      {"gamma", "ratio of specific heats"},
      {"eps", "WENO epsilon"},
      {"full", "on | off: full-resolution variant"},
      {"blast-field", "in-plane field component of the blast"},
      {"correct-each-stage", "on | off: curl replacement after every RK stage"},
  };
  std::vector<std::string> values(keys.size());
  std::vector<CLI::Option*> opts;
  for (std::size_t k = 0; k < keys.size(); ++k)
    opts.push_back(run->add_option("--" + keys[k].first, values[k], keys[k].second));

  auto* conv = app.add_subcommand("convergence", "refinement study against the exact solution");
  std::string conv_case = "hj_accuracy";
  int levels = 4;
  int base = 41;
  std::string conv_scheme = "pl";
  conv->add_option("--case", conv_case, "case id with an exact solution");
  conv->add_option("--levels", levels, "number of grids");
  conv->add_option("--base", base, "nodes per direction on the coarsest grid");
  conv->add_option("--scheme", conv_scheme, "pl | npl");

  auto* verify = app.add_subcommand("verify", "run the property and acceptance suite");
  bool full = false;
  verify->add_flag("--full", full, "include the full-resolution blast comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : kExitConfig;
  }

  try {
    if (*run) {
      fsmhd::RunConfig cfg;
      if (!config_file.empty()) cfg = fsmhd::load_config(config_file);
      for (std::size_t k = 0; k < keys.size(); ++k) {
        if (opts[k]->count() == 0) continue;
        std::string key = keys[k].first;
        for (auto& ch : key)
          if (ch == '-') ch = '_';
        fsmhd::apply_setting(cfg, key, values[k]);
      }
      const auto r = fsmhd::run_case(cfg);
      print_result(r);
      if (!r.ok) {
        std::printf("FAILED at time %.17g: %s\n", r.failure_time, r.failure.c_str());
        return kExitPhysical;
      }
      return 0;
    }
    if (*conv) {
      fsmhd::RunConfig cfg;
      cfg.case_id = conv_case;
      cfg.scheme = fsmhd::scheme_from_string(conv_scheme);
      const auto rows = fsmhd::convergence(cfg, levels, base);
      std::printf("# errors over all stored nodes; orders are log2 ratios of successive grids\n");
      std::printf("%8s %14s %8s %14s %8s %10s\n", "nodes", "L1", "order", "Linf", "order", "wall[s]");
      for (const auto& row : rows)
        std::printf("%8d %14.6e %8.3f %14.6e %8.3f %10.2f\n", row.nodes, row.l1, row.order_l1, row.linf,
                    row.order_linf, row.wall_seconds);
      return 0;
    }
    if (*verify) {
      fsmhd::acceptance::Options o;
      o.full = full;
      return fsmhd::acceptance::run_all(std::cout, o) ? 0 : 1;
    }
  } catch (const fsmhd::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const fsmhd::GridError& e) {
    std::fprintf(stderr, "grid error: %s\n", e.what());
    return kExitConfig;
  } catch (const fsmhd::PhysicalStateError& e) {
    std::fprintf(stderr, "physical state error: %s\n", e.describe().c_str());
    return kExitPhysical;
  }
  return 0;
}
