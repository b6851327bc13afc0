#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wigrec/calib.hpp"
#include "wigrec/phase.hpp"
#include "wigrec/sim.hpp"
#include "wigrec/wigner.hpp"

namespace wigrec {

/// Analysis-stage options.
struct AnalysisOptions {
  bool global_gamma = false;  ///< reuse one fitted gain for every cell
  VmaxMode vmax_mode = VmaxMode::closest;
  FanoThresholds thresholds;
  int workers = 1;
};

/// Report-stage options. An empty intensity list selects up to three series
/// closest to the signal intensity.
struct ReportOptions {
  std::string format = "text";
  std::vector<int> intensities;
};

/// One run configuration file: the experiment to simulate plus the options
/// of the downstream stages. run_dir may be overridden on the command line.
struct RunConfig {
  ExperimentConfig experiment;
  AnalysisOptions analysis;
  ReportOptions report;
  std::string run_dir;
};

/// Parse and validate a JSON run configuration. Unknown keys are rejected.
RunConfig load_run_config(const std::filesystem::path& path);

/// Simulate and write a run directory without holding the full dataset in
/// memory. Byte-identical to write_dataset(generate_dataset(cfg), dir).
void simulate_run(const ExperimentConfig& cfg,
                  const std::filesystem::path& dir, int workers = 1);

/// Everything the analysis derives for one (intensity, phase) setting.
struct CellAnalysis {
  int intensity_index = 0;
  int phase_index = 0;
  double mean_voltage = 0.0;  ///< at eta_max
  bool calibrated = false;
  CalibrationResult calib;    ///< valid when calibrated
  bool skipped = true;        ///< no histogram, excluded from the grid
  std::string skip_reason;
  PhotonHistogram hist;       ///< valid when not skipped
  double phase = 0.0;         ///< recovered, radians in [0, pi]
  WignerSample wigner;        ///< valid when not skipped
};

/// Run-level summary written to report.json.
struct RunReport {
  std::size_t cells_total = 0;
  std::size_t cells_skipped = 0;
  bool calibration_dominated = false;  ///< more than half the cells skipped
  double gamma_mean = 0.0;
  double gamma_sd = 0.0;
  double gamma_spread = 0.0;           ///< sd / mean
  std::vector<double> visibilities;    ///< per intensity
  std::size_t vmax_intensity_index = 0;
  double v_max = 0.0;
  double xi = 0.0;
  double beta0_fit = 0.0;
  double epsilon = 0.0;                ///< mean(theory - reconstruction)
  std::vector<std::string> files;      ///< written artifacts, run-relative
};

/// Full analysis output.
struct AnalysisResult {
  ExperimentConfig config;
  RunReport report;
  std::vector<CellAnalysis> cells;      ///< (intensity, phase) row-major
  std::vector<FringeAnalysis> fringes;  ///< per intensity
  WignerGrid grid;                      ///< non-skipped cells at eta_max
};

/// Analyze a run directory: per-cell gain calibration, re-binning at
/// eta_max, fringe inversion per intensity, overlap estimate, grid
/// reconstruction, center fit and mean error. Deterministic and
/// independent of the worker count. Never reads the ground-truth sidecar.
///
/// When more than half the cells fail calibration the result is marked
/// calibration_dominated and the fit stage is left empty instead of
/// throwing.
AnalysisResult analyze_run(const std::filesystem::path& dir,
                           const AnalysisOptions& options = {});

/// Write the analysis artifacts under <dir>/analysis and record them in
/// result.report.files. Overwrites byte-identically on unchanged input.
void write_analysis(AnalysisResult& result, const std::filesystem::path& dir);

/// Write the plot-data files and the human-readable summary under
/// <dir>/report from a previously written analysis. Returns the paths
/// written, run-relative. Throws when analysis artifacts are missing.
std::vector<std::string> write_report_files(const std::filesystem::path& dir,
                                            const ReportOptions& options = {});

}  // namespace wigrec
