#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "wigrec/dataset_io.hpp"
#include "wigrec/pipeline.hpp"

namespace {

// Exit codes: 0 success, 2 bad configuration, 3 missing or insufficient
// data, 4 calibration failed on more than half the cells.
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kPartialData = 3;
constexpr int kCalibrationDominated = 4;

struct CliOptions {
  std::string config_path;
  std::string run_dir;
  int workers = 0;  // 0: take from config (default 1)
  bool global_gamma = false;
  std::string vmax_mode;
};

wigrec::RunConfig effective_config(const CliOptions& cli, bool need_config) {
  wigrec::RunConfig rc;
  if (!cli.config_path.empty()) {
    rc = wigrec::load_run_config(cli.config_path);
  } else if (need_config) {
    throw wigrec::config_error("--config is required for this command");
  }
  if (!cli.run_dir.empty()) rc.run_dir = cli.run_dir;
  if (rc.run_dir.empty()) {
    throw wigrec::config_error(
        "no run directory: pass --run or set run_dir in the config");
  }
  if (cli.workers > 0) rc.analysis.workers = cli.workers;
  if (cli.global_gamma) rc.analysis.global_gamma = true;
  if (!cli.vmax_mode.empty()) {
    if (cli.vmax_mode == "closest") {
      rc.analysis.vmax_mode = wigrec::VmaxMode::closest;
    } else if (cli.vmax_mode == "dedicated") {
      rc.analysis.vmax_mode = wigrec::VmaxMode::dedicated;
    } else {
      throw wigrec::config_error("--vmax-mode must be closest or dedicated");
    }
  }
  return rc;
}

int run_simulate(const CliOptions& cli) {
  const auto rc = effective_config(cli, true);
  wigrec::simulate_run(rc.experiment, rc.run_dir, rc.analysis.workers);
  std::printf("wrote run directory %s\n", rc.run_dir.c_str());
  return kOk;
}

int run_analyze(const CliOptions& cli) {
  const auto rc = effective_config(cli, false);
  auto result = wigrec::analyze_run(rc.run_dir, rc.analysis);
  wigrec::write_analysis(result, rc.run_dir);
  const auto& r = result.report;
  std::printf("analyzed %zu settings (%zu skipped)\n", r.cells_total,
              r.cells_skipped);
  if (r.calibration_dominated) {
    std::fprintf(stderr,
                 "calibration failed on more than half the settings; "
                 "model fit skipped\n");
    return kCalibrationDominated;
  }
  std::printf("gain mean %.17g V/photon (spread %.17g)\n", r.gamma_mean,
              r.gamma_spread);
  std::printf("overlap %.17g, fitted amplitude %.17g, mean error %.17g\n",
              r.xi, r.beta0_fit, r.epsilon);
  return kOk;
}

int run_report(const CliOptions& cli) {
  const auto rc = effective_config(cli, false);
  const auto files = wigrec::write_report_files(rc.run_dir, rc.report);
  for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Photon-counting state reconstruction: simulate a displaced-state "
      "acquisition, calibrate and analyze it, emit plot-ready data."};
  app.require_subcommand(1);

  CliOptions cli;
  auto add_common = [&](CLI::App* cmd, bool with_analysis_flags) {
    cmd->add_option("--config", cli.config_path,
                    "JSON run configuration file");
    cmd->add_option("--run", cli.run_dir, "run directory");
    cmd->add_option("--workers", cli.workers, "worker thread count");
    if (with_analysis_flags) {
      cmd->add_flag("--global-gamma", cli.global_gamma,
                    "reuse the first fitted gain for every setting");
      cmd->add_option("--vmax-mode", cli.vmax_mode,
                      "peak-visibility series selection: closest|dedicated");
    }
  };

  auto* sim = app.add_subcommand("simulate", "generate a run directory");
  add_common(sim, false);
  auto* ana = app.add_subcommand("analyze", "analyze a run directory");
  add_common(ana, true);
  auto* rep = app.add_subcommand("report", "write plot data and a summary");
  add_common(rep, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (sim->parsed()) return run_simulate(cli);
    if (ana->parsed()) return run_analyze(cli);
    return run_report(cli);
  } catch (const wigrec::config_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kConfigError;
  } catch (const wigrec::partial_data_error& e) {
    std::fprintf(stderr, "partial data: %s\n", e.what());
    return kPartialData;
  } catch (const wigrec::insufficient_data_error& e) {
    std::fprintf(stderr, "insufficient data: %s\n", e.what());
    return kPartialData;
  } catch (const wigrec::no_fringe_error& e) {
    std::fprintf(stderr, "no usable fringe: %s\n", e.what());
    return kPartialData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
