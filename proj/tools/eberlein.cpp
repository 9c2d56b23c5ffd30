#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "eberlein/cli.hpp"

int main(int argc, char** argv) {
  using namespace eberlein;
  cli::RunConfig config;
  double tol = 0.0;
  bool real = false;

  CLI::App app{"Norm-reducing Jacobi-type eigensolver for arbitrary square matrices"};
  app.add_option("--input", config.input_path, "CSV matrix file")->required();
  app.add_option("--out", config.output_dir, "Output directory")->required();
  app.add_option("--strategy", config.strategy_spec,
                 "row | col | row_rev | col_rev | perm[:seed] | sg[:seed[:num_ops]] | file:path")
      ->capture_default_str();
  auto* tol_opt = app.add_option("--tol", tol, "Stop when off(B) changes by less than this per sweep")
                      ->check(CLI::PositiveNumber);
  app.add_option("--max-sweeps", config.max_sweeps, "Sweep budget")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_flag("--real", real, "Real arithmetic (input must be real)");
  app.add_flag("--sort", config.sort, "Keep the diagonal real parts in decreasing order");
  app.add_flag("--eigvecs", config.eigvecs, "Accumulate and write T and T^-1");
  app.add_flag("--trace", config.trace, "Write per-step trace.csv");
  app.add_option("--logabs-every", config.logabs_every, "Snapshot log10|a_ij| every k sweeps (0 = off)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", config.seed, "Seed for perm and sg strategies")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitError;
  }
  if (*tol_opt) config.tol = tol;
  config.mode = real ? Mode::real : Mode::complex;
  return cli::run_command(config, std::cerr);
}
