// Command-line harness: runs experiments from config files, executes the
// acceptance suite, and re-exports stored run manifests.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dgff/config.hpp"
#include "dgff/errors.hpp"
#include "dgff/experiments.hpp"
#include "dgff/io.hpp"
#include "dgff/verify.hpp"

namespace {

int run_command(const std::string& config_path, bool seed_given,
                std::uint64_t seed, int threads) {
  dgff::ExperimentConfig config = dgff::load_config(config_path);
  if (seed_given) config.seed = seed;
  if (threads >= 0) config.threads = threads;
  const dgff::ResultRecord record = dgff::run_experiment(config);
  std::cout << "experiment " << record.experiment << " config_hash "
            << record.config_hash << " seed " << record.seed << "\n";
  for (const dgff::StatReport& report : record.reports) {
    std::cout << "  report " << report.estimator << ": estimate "
              << dgff::format_double(report.estimate) << " stderr "
              << dgff::format_double(report.standard_error) << " "
              << (report.pass ? "pass" : "fail") << "\n";
  }
  for (const std::string& file : record.output_files)
    std::cout << "  wrote " << file << "\n";
  return 0;
}

int export_command(const std::filesystem::path& record_path,
                   const std::string& format) {
  const dgff::ResultRecord record = dgff::read_result_record(record_path);
  const std::filesystem::path dir = record_path.parent_path();
  if (format == "json") {
    const std::filesystem::path out = dir / "export.json";
    dgff::write_result_record(out, record);
    std::cout << out.string() << "\n";
    return 0;
  }
  const std::filesystem::path out = dir / "export.csv";
  std::ofstream stream(out, std::ios::binary);
  if (!stream) throw dgff::IoError("cannot open " + out.string());
  stream << "# config_hash=" << record.config_hash << " seed=" << record.seed
         << "\n";
  stream << "estimator,estimate,stderr,tolerance,pass,params\n";
  for (const dgff::StatReport& report : record.reports) {
    stream << report.estimator << ','
           << dgff::format_double(report.estimate) << ','
           << dgff::format_double(report.standard_error) << ','
           << dgff::format_double(report.tolerance) << ','
           << (report.pass ? "true" : "false") << ',';
    bool first = true;
    for (const auto& [key, value] : report.params) {
      if (!first) stream << ';';
      stream << key << '=' << dgff::format_double(value);
      first = false;
    }
    stream << '\n';
  }
  if (!stream.good()) throw dgff::IoError("write failed: " + out.string());
  std::cout << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation laboratory for the 2D discrete Gaussian free "
               "field, its extremal process, and the critical "
               "Liouville measure"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  int threads = -1;
  CLI::App* run = app.add_subcommand("run", "Execute an experiment config");
  run->add_option("--config", config_path, "Config file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "Master seed (overrides the config)");
  run->add_option("--threads", threads, "Worker threads (0 = hardware)");

  std::string suite;
  std::uint64_t verify_seed = dgff::kDefaultVerifySeed;
  int verify_threads = 0;
  CLI::App* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--suite", suite, "fast (criteria 1-5) or full (1-16)")
      ->required()
      ->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--seed", verify_seed, "Master seed of the suite");
  verify->add_option("--threads", verify_threads, "Worker threads (0 = hardware)");

  std::string record_path;
  std::string format;
  CLI::App* exporter =
      app.add_subcommand("export", "Re-export a stored run manifest");
  exporter->add_option("--record", record_path, "record.json of a finished run")
      ->required()
      ->check(CLI::ExistingFile);
  exporter->add_option("--format", format, "csv or json")
      ->required()
      ->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return run_command(config_path, seed_opt->count() > 0, seed, threads);
    if (verify->parsed())
      return dgff::run_verify(suite, verify_seed, verify_threads, std::cout)
                 ? 0
                 : 1;
    return export_command(record_path, format);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
}
