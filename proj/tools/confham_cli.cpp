// Command line front end. Exit codes: 0 success (and every verify check
// passed), 1 a verification check failed, 2 bad input or solver trouble.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "confham/confham.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string output_path;  // empty: stdout
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("config", args.config_path, "JSON configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("-o,--output", args.output_path,
                  "write the report here instead of stdout");
}

int with_output(const CommonArgs& args,
                const std::function<int(std::ostream&)>& body) {
  if (args.output_path.empty()) return body(std::cout);
  std::ofstream out(args.output_path, std::ios::binary);
  if (!out)
    throw confham::ConfigError("cannot open output file: " + args.output_path);
  return body(out);
}

}  // namespace

int main(int argc, char** argv) {
  // Threaded BLAS backends can reorder reductions between runs; the reports
  // promise byte-identical repeats, so pin them down before any LAPACK call.
  setenv("OPENBLAS_NUM_THREADS", "1", 1);
  setenv("OMP_NUM_THREADS", "1", 1);

  CLI::App app{"confining Hamiltonians on a decomposed 1D box"};
  app.require_subcommand(1);

  CommonArgs spectrum_args, evolve_args, verify_args, deficiency_args;
  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "lowest eigenvalues with block labels and references");
  add_common(spectrum, spectrum_args);
  CLI::App* evolve = app.add_subcommand(
      "evolve", "Crank-Nicolson time evolution observables");
  add_common(evolve, evolve_args);
  CLI::App* verify = app.add_subcommand(
      "verify", "confinement and self-adjointness checks");
  add_common(verify, verify_args);
  CLI::App* deficiency = app.add_subcommand(
      "deficiency", "per-component deficiency indices");
  add_common(deficiency, deficiency_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (spectrum->parsed()) {
      confham::BuiltProblem p =
          confham::build_problem(confham::parse_config_file(spectrum_args.config_path));
      return with_output(spectrum_args, [&](std::ostream& out) {
        confham::write_spectrum_csv(out, p);
        return 0;
      });
    }
    if (evolve->parsed()) {
      confham::BuiltProblem p =
          confham::build_problem(confham::parse_config_file(evolve_args.config_path));
      return with_output(evolve_args, [&](std::ostream& out) {
        confham::write_evolve_csv(out, p);
        return 0;
      });
    }
    if (verify->parsed()) {
      confham::BuiltProblem p =
          confham::build_problem(confham::parse_config_file(verify_args.config_path));
      return with_output(verify_args, [&](std::ostream& out) {
        return confham::write_verify_report(out, p) ? 0 : 1;
      });
    }
    confham::BuiltProblem p =
        confham::build_problem(confham::parse_config_file(deficiency_args.config_path));
    return with_output(deficiency_args, [&](std::ostream& out) {
      confham::write_deficiency_csv(out, p);
      return 0;
    });
  } catch (const confham::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
