// Command-line front end: run, compare, report, validate.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "imlab/errors.hpp"
#include "imlab/harness.hpp"
#include "imlab/run_config.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kOutputRootEnv = "IMLAB_OUTPUT_ROOT";

int fail(const std::string& kind, const std::string& message) {
  nlohmann::json err = {{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << err.dump() << std::endl;
  return 1;
}

fs::path default_output_root() {
  const char* env = std::getenv(kOutputRootEnv);
  return env && *env ? fs::path(env) : fs::path("runs");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Competence-facet intrinsic motivation laboratory"};
  app.require_subcommand(1);

  std::string run_config_path;
  std::optional<std::uint64_t> seed;
  std::string run_out;
  auto* run_cmd = app.add_subcommand("run", "Execute one seeded run");
  run_cmd->add_option("--config", run_config_path, "Run configuration JSON")->required();
  run_cmd->add_option("--seed", seed, "Override the configured seed");
  run_cmd->add_option("--out", run_out, "Output root (default $IMLAB_OUTPUT_ROOT or ./runs)");

  std::vector<std::string> compare_dirs;
  std::string compare_out;
  auto* compare_cmd = app.add_subcommand("compare", "Compare finished runs on the same environment");
  compare_cmd->add_option("runs", compare_dirs, "Run directories")->required()->expected(1, -1);
  compare_cmd->add_option("--out", compare_out, "Directory for comparison.csv and summary.txt")->required();

  std::string report_dir;
  std::string report_out;
  auto* report_cmd = app.add_subcommand("report", "Render SVG charts of a run's metrics");
  report_cmd->add_option("run", report_dir, "Run directory")->required();
  report_cmd->add_option("--out", report_out, "Directory for the charts")->required();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a run configuration without running it");
  validate_cmd->add_option("--config", validate_path, "Run configuration JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage_error", e.what());
  }

  try {
    if (*run_cmd) {
      imlab::RunConfig config = imlab::load_run_config(run_config_path);
      if (seed) config.seed = *seed;
      imlab::RunOptions options;
      options.out_root = !run_out.empty() ? fs::path(run_out)
                         : !config.output_dir.empty() ? config.output_dir
                                                      : default_output_root();
      const imlab::RunRecord record = imlab::run(config, options);
      std::cout << record.run_dir.string() << std::endl;
    } else if (*compare_cmd) {
      std::vector<fs::path> dirs(compare_dirs.begin(), compare_dirs.end());
      const imlab::ComparisonReport report = imlab::compare_dirs(dirs, compare_out);
      std::cout << report.summary();
    } else if (*report_cmd) {
      for (const auto& p : imlab::report(imlab::load_run(report_dir), report_out)) std::cout << p.string() << "\n";
    } else if (*validate_cmd) {
      const imlab::RunConfig config = imlab::load_run_config(validate_path);
      std::cout << imlab::run_config_to_json(config).dump(2) << std::endl;
    }
  } catch (const imlab::Error& e) {
    return fail(e.kind(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail("format_error", e.what());
  } catch (const std::exception& e) {
    return fail("internal_error", e.what());
  }
  return 0;
}
