#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solitonlab/descriptor.hpp"
#include "solitonlab/runner.hpp"

namespace {

using namespace solitonlab;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInternalError = 3;

struct CliOptions {
  RunConfig config;
  std::string target;
  std::vector<std::string> tol_args;
};

void apply_tol_args(CliOptions& opts) {
  for (const std::string& arg : opts.tol_args) {
    size_t eq = arg.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--tol expects NAME=VALUE, got '" + arg + "'");
    std::string name = arg.substr(0, eq);
    double value = std::stod(arg.substr(eq + 1));
    default_check_tolerance(name);  // rejects unknown check names
    if (!(value > 0))
      throw std::invalid_argument("tolerance for '" + name + "' must be positive");
    opts.config.tol_overrides[name] = value;
  }
}

void emit(const std::string& body, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file " + out_path);
  out << body;
}

CatalogEntry resolve(const std::string& target) {
  if (target.size() > 9 &&
      target.compare(target.size() - 9, 9, ".manifold") == 0)
    return load_descriptor_file(target);
  return resolve_target(target);
}

int run(int argc, char** argv) {
  CLI::App app{"numerical verification lab for Ricci solitons with "
               "concurrent potential fields"};
  app.require_subcommand(1);

  CliOptions opts;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--samples", opts.config.samples, "sample points per chart")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opts.config.seed, "PRNG seed");
    cmd->add_option("--tol", opts.tol_args,
                    "per-check tolerance override, NAME=VALUE (repeatable)");
    cmd->add_option("--margin", opts.config.margin,
                    "boundary margin fraction of each chart width");
    cmd->add_option("--format", opts.config.format, "report format")
        ->check(CLI::IsMember({"table", "json"}));
    cmd->add_option("--out", opts.config.out_path, "write the report here");
    cmd->add_flag("--serial", [&](int64_t) { opts.config.parallel = false; },
                  "use the serial reference sweep");
  };

  CLI::App* verify =
      app.add_subcommand("verify", "run every applicable check on one target");
  verify->add_option("target", opts.target,
                     "catalog name (e.g. hypercylinder?k=2&n=3) or a "
                     ".manifold descriptor path")
      ->required();
  add_common(verify);

  CLI::App* suite = app.add_subcommand(
      "suite", "run the full catalog plus the cross-pipeline sections");
  add_common(suite);

  CLI::App* list = app.add_subcommand("list", "print the catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInputError;
  }

  try {
    apply_tol_args(opts);
    if (list->parsed()) {
      for (const CatalogListing& l : list_catalog())
        std::printf("%-16s %-58s %s\n", l.name.c_str(), l.description.c_str(),
                    l.provenance.c_str());
      return kExitPass;
    }
    if (verify->parsed()) {
      CatalogEntry entry = resolve(opts.target);
      Report report = run_verify(entry, opts.config);
      emit(opts.config.format == "json" ? to_json(report) : to_table(report),
           opts.config.out_path);
      return report.pass() ? kExitPass : kExitCheckFailure;
    }
    SuiteReport report = run_suite(opts.config);
    emit(opts.config.format == "json" ? to_json(report) : to_table(report),
         opts.config.out_path);
    return report.pass() ? kExitPass : kExitCheckFailure;
  } catch (const DescriptorError& e) {
    std::cerr << "descriptor error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
