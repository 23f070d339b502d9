// Command-line front end: runs a convergence study for one (n, k, family) and writes the error table.
//
// Exit status: 0 on success, 1 on a configuration or usage error, 2 on a solver failure.

#include "feec/errors.hpp"
#include "feec/study.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <tbb/global_control.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

namespace
{

constexpr int exit_config = 1;
constexpr int exit_solver = 2;

std::string default_output_name(const feec::RunConfig& c)
{
  return fmt::format("errors_n{}_k{}_{}_{}.csv", c.n, c.k, feec::to_string(c.u_family), c.case_id);
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Hybridized FEEC solver for the Hodge-Laplace problem on structured meshes"};
  app.set_version_flag("--version", "feec 1.0");

  feec::RunConfig cfg;
  std::string family = "trimmed";
  std::string sigma_family = "trimmed";
  std::string dual_family = "trimmed";
  std::string mode = "hybrid+condense";
  std::string diagonal = "anti";
  std::string solver = "direct";
  std::string output;
  int rstar = -1;
  int threads = 0;
  bool quiet = false;
  bool table = true;

  app.add_option("--n", cfg.n, "Ambient dimension (2 or 3)")->check(CLI::IsMember({2, 3}));
  app.add_option("--k", cfg.k, "Form degree of u (0..n)");
  app.add_option("--family", family, "Family of the u space: trimmed or full")
      ->check(CLI::IsMember({"trimmed", "full"}));
  app.add_option("--sigma-family", sigma_family, "Family of the sigma space: trimmed or full")
      ->check(CLI::IsMember({"trimmed", "full"}));
  app.add_option("--r", cfg.r_list, "Degree list, e.g. 0,1,2")->delimiter(',');
  app.add_option("--N", cfg.N_list, "Refinement levels, each twice the previous, e.g. 1,2,4,8")->delimiter(',');
  app.add_option("--mode", mode, "standard, hybrid or hybrid+condense")
      ->check(CLI::IsMember({"standard", "hybrid", "hybrid+condense"}));
  app.add_flag("--postprocess", cfg.postprocess, "Postprocess on the dual complex");
  app.add_option("--rstar", rstar, "Dual degree r* (default: smallest admissible)");
  app.add_option("--dual-family", dual_family, "Family of the dual u space: trimmed or full")
      ->check(CLI::IsMember({"trimmed", "full"}));
  app.add_option("--case", cfg.case_id, "Manufactured solution: full, exact-only or coexact-only");
  app.add_option("--output", output, "CSV path (FEEC_OUTPUT_DIR overrides the directory)");
  app.add_option("--tol", cfg.tol, "Relative residual tolerance of the linear solver");
  app.add_option("--quad-degree", cfg.quad_degree, "Quadrature degree (0: automatic)");
  app.add_option("--threads", threads, "Maximum number of worker threads (0: all)");
  app.add_option("--diagonal", diagonal, "Square split for n = 2: anti or main")
      ->check(CLI::IsMember({"anti", "main"}));
  app.add_option("--solver", solver, "direct or iterative")->check(CLI::IsMember({"direct", "iterative"}));
  app.add_flag("--quiet", quiet, "Suppress progress and DOF reports");
  app.add_flag("!--no-table", table, "Do not print the plain-text tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  std::unique_ptr<tbb::global_control> limit;
  if (threads > 0)
    limit = std::make_unique<tbb::global_control>(tbb::global_control::max_allowed_parallelism,
                                                  static_cast<std::size_t>(threads));

  try {
    cfg.u_family = feec::family_from_string(family);
    cfg.sigma_family = feec::family_from_string(sigma_family);
    cfg.dual_family = feec::family_from_string(dual_family);
    cfg.mode = feec::mode_from_string(mode);
    cfg.diagonal = diagonal == "main" ? feec::Diagonal::MainDiagonal : feec::Diagonal::AntiDiagonal;
    cfg.solver = solver == "iterative" ? feec::SolverKind::Iterative : feec::SolverKind::Direct;
    if (rstar >= 0)
      cfg.rstar = rstar;
    cfg.validate();

    const feec::RunResult res = feec::run_study(cfg, quiet ? nullptr : &std::cerr);

    std::filesystem::path path(output.empty() ? default_output_name(cfg) : output);
    if (const char* dir = std::getenv("FEEC_OUTPUT_DIR"); dir && *dir)
      path = std::filesystem::path(dir) / path.filename();
    if (path.has_parent_path())
      std::filesystem::create_directories(path.parent_path());
    std::ofstream csv(path);
    if (!csv)
      throw feec::ConfigError(fmt::format("cannot open '{}' for writing", path.string()));
    feec::write_csv(csv, res.records);

    if (table) {
      feec::write_text_table(std::cout, res.records, feec::trace_table_columns());
      if (cfg.postprocess) {
        std::cout << '\n';
        feec::write_text_table(std::cout, res.records, feec::postprocess_table_columns());
      }
    }
    if (!quiet)
      std::cerr << "wrote " << path.string() << '\n';
  } catch (const feec::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << fmt::format(" (best relative residual {:.3e})\n", e.best_residual());
    return exit_solver;
  } catch (const feec::Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return exit_config;
  }
  return 0;
}
