#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "wigrec/calib.hpp"
#include "wigrec/dataset_io.hpp"
#include "wigrec/phase.hpp"
#include "wigrec/pipeline.hpp"
#include "wigrec/rng.hpp"
#include "wigrec/sim.hpp"
#include "wigrec/types.hpp"
#include "wigrec/wigner.hpp"

namespace py = pybind11;
using namespace wigrec;

PYBIND11_MODULE(_wigrec, m) {
  m.doc() =
      "Photon-counting state reconstruction: displaced-state simulation, "
      "gain calibration, fringe inversion and Wigner-function assembly.";

  py::register_exception<config_error>(m, "ConfigError", PyExc_RuntimeError);
  py::register_exception<insufficient_data_error>(m, "InsufficientDataError",
                                                  PyExc_RuntimeError);
  py::register_exception<calibration_error>(m, "CalibrationError",
                                            PyExc_RuntimeError);
  py::register_exception<no_fringe_error>(m, "NoFringeError",
                                          PyExc_RuntimeError);
  py::register_exception<partial_data_error>(m, "PartialDataError",
                                             PyExc_RuntimeError);
  py::register_exception<coverage_error>(m, "CoverageError",
                                         PyExc_RuntimeError);
  py::register_exception<fit_error>(m, "FitError", PyExc_RuntimeError);

  py::class_<ComplexAmplitude>(m, "ComplexAmplitude")
      .def(py::init<>())
      .def(py::init<double, double>(), py::arg("re"), py::arg("im"))
      .def_readwrite("re", &ComplexAmplitude::re)
      .def_readwrite("im", &ComplexAmplitude::im)
      .def_static("polar", &ComplexAmplitude::polar, py::arg("modulus"),
                  py::arg("phase"))
      .def("mod2", &ComplexAmplitude::mod2)
      .def("mod", &ComplexAmplitude::mod)
      .def("arg", &ComplexAmplitude::arg)
      .def("__repr__", [](const ComplexAmplitude& a) {
        return "ComplexAmplitude(" + std::to_string(a.re) + ", " +
               std::to_string(a.im) + ")";
      });

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", &Rng::uniform)
      .def("gaussian", &Rng::gaussian, py::arg("mean"), py::arg("sd"))
      .def("poisson", &Rng::poisson, py::arg("mean"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("signal_amplitude", &ExperimentConfig::signal_amplitude)
      .def_readwrite("probe_intensities", &ExperimentConfig::probe_intensities)
      .def_readwrite("phase_steps", &ExperimentConfig::phase_steps)
      .def_readwrite("eta_values", &ExperimentConfig::eta_values)
      .def_readwrite("eta_max", &ExperimentConfig::eta_max)
      .def_readwrite("gain", &ExperimentConfig::gain)
      .def_readwrite("overlap", &ExperimentConfig::overlap)
      .def_readwrite("shots_per_point", &ExperimentConfig::shots_per_point)
      .def_readwrite("electronic_noise_sd",
                     &ExperimentConfig::electronic_noise_sd)
      .def_readwrite("rng_seed", &ExperimentConfig::rng_seed)
      .def_readwrite("piezo_jitter_sd", &ExperimentConfig::piezo_jitter_sd)
      .def("n_intensities", &ExperimentConfig::n_intensities)
      .def("n_etas", &ExperimentConfig::n_etas)
      .def("validate", &ExperimentConfig::validate);

  py::class_<ShotDataset>(m, "ShotDataset")
      .def(py::init<>())
      .def_readwrite("config", &ShotDataset::config)
      .def_readwrite("cells", &ShotDataset::cells)
      .def_readwrite("true_phases", &ShotDataset::true_phases)
      .def("cell", &ShotDataset::cell, py::arg("i"), py::arg("k"),
           py::arg("e"), py::return_value_policy::reference_internal)
      .def("true_phase", &ShotDataset::true_phase, py::arg("i"), py::arg("k"));

  m.def("displaced_mean", &displaced_mean, py::arg("beta"), py::arg("beta0"),
        py::arg("xi"));
  m.def("cell_true_phase", &cell_true_phase, py::arg("config"), py::arg("i"),
        py::arg("k"));
  m.def("generate_cell", &generate_cell, py::arg("config"), py::arg("i"),
        py::arg("k"), py::arg("e"));
  m.def("generate_dataset", &generate_dataset, py::arg("config"),
        py::arg("workers") = 1);

  py::class_<FanoPoint>(m, "FanoPoint")
      .def(py::init<>())
      .def_readwrite("mean_voltage", &FanoPoint::mean_voltage)
      .def_readwrite("fano", &FanoPoint::fano)
      .def_readwrite("shot_count", &FanoPoint::shot_count);

  py::class_<CalibrationResult>(m, "CalibrationResult")
      .def(py::init<>())
      .def_readwrite("gamma", &CalibrationResult::gamma)
      .def_readwrite("slope", &CalibrationResult::slope)
      .def_readwrite("residual_rms", &CalibrationResult::residual_rms)
      .def_readwrite("points_used", &CalibrationResult::points_used);

  py::class_<PhotonHistogram>(m, "PhotonHistogram")
      .def(py::init<>())
      .def_readwrite("probs", &PhotonHistogram::probs)
      .def_readwrite("mean", &PhotonHistogram::mean)
      .def_readwrite("total_shots", &PhotonHistogram::total_shots)
      .def("m_max", &PhotonHistogram::m_max)
      .def("validate", &PhotonHistogram::validate);

  py::class_<FanoThresholds>(m, "FanoThresholds")
      .def(py::init<>())
      .def_readwrite("min_shots", &FanoThresholds::min_shots)
      .def_readwrite("min_mean_voltage", &FanoThresholds::min_mean_voltage);

  py::class_<FanoExtraction>(m, "FanoExtraction")
      .def(py::init<>())
      .def_readwrite("points", &FanoExtraction::points)
      .def_readwrite("excluded", &FanoExtraction::excluded);

  m.def("fano_points", &fano_points, py::arg("eta_groups"),
        py::arg("thresholds") = FanoThresholds{});
  m.def("fit_gamma", &fit_gamma, py::arg("points"));
  m.def("rebin", &rebin, py::arg("voltages"), py::arg("gamma"));
  m.def("bernoulli_convolve", &bernoulli_convolve, py::arg("hist"),
        py::arg("eta"));
  m.def("poisson_histogram", &poisson_histogram, py::arg("mean"),
        py::arg("tail") = 1e-12);

  py::class_<FringeAnalysis>(m, "FringeAnalysis")
      .def(py::init<>())
      .def_readwrite("visibility", &FringeAnalysis::visibility)
      .def_readwrite("offset", &FringeAnalysis::offset)
      .def_readwrite("amplitude", &FringeAnalysis::amplitude)
      .def_readwrite("cosines", &FringeAnalysis::cosines)
      .def_readwrite("phases", &FringeAnalysis::phases);

  py::class_<OverlapEstimate>(m, "OverlapEstimate")
      .def(py::init<>())
      .def_readwrite("xi", &OverlapEstimate::xi)
      .def_readwrite("v_max_used", &OverlapEstimate::v_max_used);

  py::enum_<VmaxMode>(m, "VmaxMode")
      .value("closest", VmaxMode::closest)
      .value("dedicated", VmaxMode::dedicated);

  py::class_<VmaxSelection>(m, "VmaxSelection")
      .def(py::init<>())
      .def_readwrite("intensity_index", &VmaxSelection::intensity_index)
      .def_readwrite("v_max", &VmaxSelection::v_max);

  m.def("analyze_fringe", &analyze_fringe, py::arg("mean_voltages"));
  m.def("overlap_from_visibility", &overlap_from_visibility, py::arg("v_max"));
  m.def("select_vmax", &select_vmax, py::arg("fringes"),
        py::arg("probe_intensities"), py::arg("signal_intensity"),
        py::arg("mode") = VmaxMode::closest);

  py::class_<WignerSample>(m, "WignerSample")
      .def(py::init<>())
      .def_readwrite("beta", &WignerSample::beta)
      .def_readwrite("value", &WignerSample::value)
      .def_readwrite("truncation_m", &WignerSample::truncation_m)
      .def_readwrite("tail_bound", &WignerSample::tail_bound);

  py::class_<WignerGrid>(m, "WignerGrid")
      .def(py::init<>())
      .def_readwrite("samples", &WignerGrid::samples)
      .def_readwrite("provenance", &WignerGrid::provenance);

  py::class_<TheoryParams>(m, "TheoryParams")
      .def(py::init<>())
      .def(py::init([](double beta0_mod, double xi) {
             return TheoryParams{beta0_mod, xi};
           }),
           py::arg("beta0_mod"), py::arg("xi") = 1.0)
      .def_readwrite("beta0_mod", &TheoryParams::beta0_mod)
      .def_readwrite("xi", &TheoryParams::xi);

  py::class_<SquareGrid>(m, "SquareGrid")
      .def(py::init<>())
      .def_readwrite("step", &SquareGrid::step)
      .def_readwrite("half_count", &SquareGrid::half_count)
      .def("coord", &SquareGrid::coord, py::arg("i"))
      .def("side", &SquareGrid::side)
      .def("count", &SquareGrid::count);

  m.def("make_grid", &make_grid, py::arg("half_width"), py::arg("step"));
  m.def("wigner_from_hist", &wigner_from_hist, py::arg("hist"),
        py::arg("beta"));
  m.def("theory_coherent", &theory_coherent, py::arg("beta"),
        py::arg("beta0"));
  m.def("theory_reduced", &theory_reduced, py::arg("beta"), py::arg("params"));
  m.def("evaluate_on_grid", &evaluate_on_grid, py::arg("geom"), py::arg("f"),
        py::arg("provenance"));
  m.def("loss_convolve", &loss_convolve, py::arg("input"), py::arg("geom"),
        py::arg("eta"), py::arg("workers") = 1);
  m.def("mean_error", &mean_error, py::arg("reconstructed"),
        py::arg("theory"));
  m.def("fit_beta0", &fit_beta0, py::arg("reconstructed"), py::arg("xi"));

  m.def("cell_filename", &cell_filename, py::arg("i"), py::arg("k"),
        py::arg("e"));
  m.def("write_manifest", &write_manifest, py::arg("config"), py::arg("dir"));
  m.def("read_manifest", &read_manifest, py::arg("dir"));
  m.def("write_cell", &write_cell, py::arg("dir"), py::arg("i"), py::arg("k"),
        py::arg("e"), py::arg("voltages"));
  m.def("read_cell", &read_cell, py::arg("dir"), py::arg("i"), py::arg("k"),
        py::arg("e"));
  m.def("write_true_phases", &write_true_phases, py::arg("config"),
        py::arg("phases"), py::arg("dir"));
  m.def("read_true_phases", &read_true_phases, py::arg("dir"));
  m.def("write_dataset", &write_dataset, py::arg("dataset"), py::arg("dir"));
  m.def("read_dataset", &read_dataset, py::arg("dir"));

  py::class_<AnalysisOptions>(m, "AnalysisOptions")
      .def(py::init<>())
      .def_readwrite("global_gamma", &AnalysisOptions::global_gamma)
      .def_readwrite("vmax_mode", &AnalysisOptions::vmax_mode)
      .def_readwrite("thresholds", &AnalysisOptions::thresholds)
      .def_readwrite("workers", &AnalysisOptions::workers);

  py::class_<ReportOptions>(m, "ReportOptions")
      .def(py::init<>())
      .def_readwrite("format", &ReportOptions::format)
      .def_readwrite("intensities", &ReportOptions::intensities);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("experiment", &RunConfig::experiment)
      .def_readwrite("analysis", &RunConfig::analysis)
      .def_readwrite("report", &RunConfig::report)
      .def_readwrite("run_dir", &RunConfig::run_dir);

  py::class_<CellAnalysis>(m, "CellAnalysis")
      .def(py::init<>())
      .def_readwrite("intensity_index", &CellAnalysis::intensity_index)
      .def_readwrite("phase_index", &CellAnalysis::phase_index)
      .def_readwrite("mean_voltage", &CellAnalysis::mean_voltage)
      .def_readwrite("calibrated", &CellAnalysis::calibrated)
      .def_readwrite("calib", &CellAnalysis::calib)
      .def_readwrite("skipped", &CellAnalysis::skipped)
      .def_readwrite("skip_reason", &CellAnalysis::skip_reason)
      .def_readwrite("hist", &CellAnalysis::hist)
      .def_readwrite("phase", &CellAnalysis::phase)
      .def_readwrite("wigner", &CellAnalysis::wigner);

  py::class_<RunReport>(m, "RunReport")
      .def(py::init<>())
      .def_readwrite("cells_total", &RunReport::cells_total)
      .def_readwrite("cells_skipped", &RunReport::cells_skipped)
      .def_readwrite("calibration_dominated",
                     &RunReport::calibration_dominated)
      .def_readwrite("gamma_mean", &RunReport::gamma_mean)
      .def_readwrite("gamma_sd", &RunReport::gamma_sd)
      .def_readwrite("gamma_spread", &RunReport::gamma_spread)
      .def_readwrite("visibilities", &RunReport::visibilities)
      .def_readwrite("vmax_intensity_index", &RunReport::vmax_intensity_index)
      .def_readwrite("v_max", &RunReport::v_max)
      .def_readwrite("xi", &RunReport::xi)
      .def_readwrite("beta0_fit", &RunReport::beta0_fit)
      .def_readwrite("epsilon", &RunReport::epsilon)
      .def_readwrite("files", &RunReport::files);

  py::class_<AnalysisResult>(m, "AnalysisResult")
      .def(py::init<>())
      .def_readwrite("config", &AnalysisResult::config)
      .def_readwrite("report", &AnalysisResult::report)
      .def_readwrite("cells", &AnalysisResult::cells)
      .def_readwrite("fringes", &AnalysisResult::fringes)
      .def_readwrite("grid", &AnalysisResult::grid);

  m.def("load_run_config", &load_run_config, py::arg("path"));
  m.def("simulate_run", &simulate_run, py::arg("config"), py::arg("dir"),
        py::arg("workers") = 1);
  m.def("analyze_run", &analyze_run, py::arg("dir"),
        py::arg("options") = AnalysisOptions{});
  m.def(
      "write_analysis",
      [](AnalysisResult& result, const std::filesystem::path& dir) {
        write_analysis(result, dir);
        return result.report.files;
      },
      py::arg("result"), py::arg("dir"),
      "Write the analysis artifacts and return their run-relative paths.");
  m.def("write_report_files", &write_report_files, py::arg("dir"),
        py::arg("options") = ReportOptions{});
}
