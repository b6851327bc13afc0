#include "wigrec/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "wigrec/dataset_io.hpp"
#include "wigrec/parallel.hpp"

namespace wigrec {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  out << body;
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

std::string indexed_name(const char* stem, int i) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_i%03d.txt", stem, i);
  return buf;
}

json require_object(const json& j, const std::string& what) {
  if (!j.is_object()) throw config_error(what + " must be a JSON object");
  return j;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> ok,
                         const std::string& where) {
  for (const auto& item : j.items()) {
    if (std::find_if(ok.begin(), ok.end(), [&](const char* k) {
          return item.key() == k;
        }) == ok.end()) {
      throw config_error("unknown key '" + item.key() + "' in " + where);
    }
  }
}

VmaxMode parse_vmax_mode(const std::string& s) {
  if (s == "closest") return VmaxMode::closest;
  if (s == "dedicated") return VmaxMode::dedicated;
  throw config_error("vmax_mode must be 'closest' or 'dedicated', got '" + s +
                     "'");
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error("unparseable config " + path.string() + ": " +
                       e.what());
  }
  require_object(j, "config");
  reject_unknown_keys(j, {"experiment", "analysis", "report", "run_dir"},
                      "config");

  RunConfig rc;
  try {
    const json& ex = j.at("experiment");
    require_object(ex, "experiment");
    reject_unknown_keys(ex,
                        {"signal_amplitude", "probe_intensities",
                         "phase_steps", "eta_values", "eta_max", "gain",
                         "overlap", "shots_per_point", "electronic_noise_sd",
                         "rng_seed", "piezo_jitter_sd"},
                        "experiment");
    auto& cfg = rc.experiment;
    cfg.signal_amplitude = {ex.at("signal_amplitude").at("re").get<double>(),
                            ex.at("signal_amplitude").at("im").get<double>()};
    cfg.probe_intensities =
        ex.at("probe_intensities").get<std::vector<double>>();
    cfg.phase_steps = ex.at("phase_steps").get<int>();
    cfg.eta_values = ex.at("eta_values").get<std::vector<double>>();
    cfg.eta_max = ex.at("eta_max").get<double>();
    cfg.gain = ex.at("gain").get<double>();
    cfg.overlap = ex.at("overlap").get<double>();
    cfg.shots_per_point = ex.at("shots_per_point").get<int>();
    if (ex.contains("electronic_noise_sd")) {
      cfg.electronic_noise_sd = ex.at("electronic_noise_sd").get<double>();
    }
    if (ex.contains("rng_seed")) {
      cfg.rng_seed = ex.at("rng_seed").get<std::uint64_t>();
    }
    if (ex.contains("piezo_jitter_sd")) {
      cfg.piezo_jitter_sd = ex.at("piezo_jitter_sd").get<double>();
    }

    if (j.contains("analysis")) {
      const json& an = j.at("analysis");
      require_object(an, "analysis");
      reject_unknown_keys(an,
                          {"global_gamma", "vmax_mode", "min_group_shots",
                           "min_mean_voltage", "workers"},
                          "analysis");
      if (an.contains("global_gamma")) {
        rc.analysis.global_gamma = an.at("global_gamma").get<bool>();
      }
      if (an.contains("vmax_mode")) {
        rc.analysis.vmax_mode =
            parse_vmax_mode(an.at("vmax_mode").get<std::string>());
      }
      if (an.contains("min_group_shots")) {
        rc.analysis.thresholds.min_shots =
            an.at("min_group_shots").get<long>();
      }
      if (an.contains("min_mean_voltage")) {
        rc.analysis.thresholds.min_mean_voltage =
            an.at("min_mean_voltage").get<double>();
      }
      if (an.contains("workers")) {
        rc.analysis.workers = an.at("workers").get<int>();
      }
    }
    if (j.contains("report")) {
      const json& rp = j.at("report");
      require_object(rp, "report");
      reject_unknown_keys(rp, {"format", "intensities"}, "report");
      if (rp.contains("format")) {
        rc.report.format = rp.at("format").get<std::string>();
      }
      if (rp.contains("intensities")) {
        rc.report.intensities = rp.at("intensities").get<std::vector<int>>();
      }
    }
    if (j.contains("run_dir")) {
      rc.run_dir = j.at("run_dir").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw config_error("config " + path.string() +
                       " missing or mistyped field: " + e.what());
  }

  rc.experiment.validate();
  if (rc.analysis.workers < 1) {
    throw config_error("analysis.workers must be >= 1");
  }
  if (rc.analysis.thresholds.min_shots < 2) {
    throw config_error("analysis.min_group_shots must be >= 2");
  }
  if (rc.analysis.thresholds.min_mean_voltage < 0.0) {
    throw config_error("analysis.min_mean_voltage must be >= 0");
  }
  if (rc.report.format != "text") {
    throw config_error("report.format must be 'text', got '" +
                       rc.report.format + "'");
  }
  for (int idx : rc.report.intensities) {
    if (idx < 0 || idx >= rc.experiment.n_intensities()) {
      throw config_error("report.intensities index " + std::to_string(idx) +
                         " outside the configured series");
    }
  }
  return rc;
}

void simulate_run(const ExperimentConfig& cfg,
                  const std::filesystem::path& dir, int workers) {
  cfg.validate();
  write_manifest(cfg, dir);
  std::filesystem::create_directories(dir / "cells");

  const int K = cfg.phase_steps;
  const int E = cfg.n_etas();
  const std::size_t total =
      static_cast<std::size_t>(cfg.n_intensities()) * K * E;
  // Cells are pure functions of (config, indices); each worker writes its
  // own files, so any schedule produces the same bytes.
  parallel_for(total, workers, [&](std::size_t flat) {
    const int e = static_cast<int>(flat % E);
    const int k = static_cast<int>((flat / E) % K);
    const int i = static_cast<int>(flat / (static_cast<std::size_t>(E) * K));
    write_cell(dir, i, k, e, generate_cell(cfg, i, k, e));
  });

  std::vector<double> phases(static_cast<std::size_t>(cfg.n_intensities()) *
                             K);
  for (int i = 0; i < cfg.n_intensities(); ++i) {
    for (int k = 0; k < K; ++k) {
      phases[static_cast<std::size_t>(i) * K + k] = cell_true_phase(cfg, i, k);
    }
  }
  write_true_phases(cfg, phases, dir);
}

AnalysisResult analyze_run(const std::filesystem::path& dir,
                           const AnalysisOptions& options) {
  AnalysisResult res;
  res.config = read_manifest(dir);
  const auto& cfg = res.config;
  const int K = cfg.phase_steps;
  const int E = cfg.n_etas();
  const std::size_t groups =
      static_cast<std::size_t>(cfg.n_intensities()) * K;

  res.cells.assign(groups, {});
  std::vector<std::string> gaps(groups);

  // Pass 1: per-setting voltage statistics and gain fit. Workers touch only
  // their own slot.
  parallel_for(groups, options.workers, [&](std::size_t g) {
    CellAnalysis& cell = res.cells[g];
    cell.intensity_index = static_cast<int>(g / K);
    cell.phase_index = static_cast<int>(g % K);
    try {
      std::vector<std::vector<double>> eta_groups(E);
      for (int e = 0; e < E; ++e) {
        eta_groups[e] = read_cell(dir, cell.intensity_index, cell.phase_index, e);
      }
      const auto& top = eta_groups[0];  // first efficiency is eta_max
      double sum = 0.0;
      for (double v : top) sum += v;
      cell.mean_voltage =
          top.empty() ? kNaN : sum / static_cast<double>(top.size());
      try {
        const auto extraction = fano_points(eta_groups, options.thresholds);
        cell.calib = fit_gamma(extraction.points);
        cell.calibrated = true;
      } catch (const insufficient_data_error& err) {
        cell.skip_reason = err.what();
      } catch (const calibration_error& err) {
        cell.skip_reason = err.what();
      }
      if (!options.global_gamma && cell.calibrated) {
        cell.hist = rebin(top, cell.calib.gamma);
        cell.skipped = false;
      }
    } catch (const std::exception& err) {
      gaps[g] = err.what();
    }
  });

  {
    std::vector<std::string> found;
    for (const auto& g : gaps) {
      if (!g.empty()) found.push_back(g);
    }
    if (!found.empty()) {
      std::ostringstream msg;
      msg << "run directory " << dir.string() << " has " << found.size()
          << " unusable cells:";
      const std::size_t shown = std::min<std::size_t>(found.size(), 10);
      for (std::size_t g = 0; g < shown; ++g) msg << "\n  " << found[g];
      if (found.size() > shown) {
        msg << "\n  ... and " << found.size() - shown << " more";
      }
      throw partial_data_error(msg.str());
    }
  }

  if (options.global_gamma) {
    // The shared gain is the first successful fit in scan order; every
    // setting is then re-binned with it, including ones whose own fit
    // failed.
    double shared = kNaN;
    for (const auto& cell : res.cells) {
      if (cell.calibrated) {
        shared = cell.calib.gamma;
        break;
      }
    }
    if (std::isfinite(shared)) {
      parallel_for(groups, options.workers, [&](std::size_t g) {
        CellAnalysis& cell = res.cells[g];
        try {
          const auto top =
              read_cell(dir, cell.intensity_index, cell.phase_index, 0);
          cell.hist = rebin(top, shared);
          cell.skipped = false;
        } catch (const std::exception& err) {
          gaps[g] = err.what();
        }
      });
      for (const auto& g : gaps) {
        if (!g.empty()) throw partial_data_error(g);
      }
    }
  }

  // Fringe inversion per intensity series at eta_max.
  res.fringes.reserve(cfg.n_intensities());
  for (int i = 0; i < cfg.n_intensities(); ++i) {
    std::vector<double> means(K);
    for (int k = 0; k < K; ++k) {
      means[k] = res.cells[static_cast<std::size_t>(i) * K + k].mean_voltage;
    }
    res.fringes.push_back(analyze_fringe(means));
  }
  for (std::size_t g = 0; g < groups; ++g) {
    res.cells[g].phase =
        res.fringes[res.cells[g].intensity_index].phases[res.cells[g].phase_index];
  }

  RunReport& report = res.report;
  report.cells_total = groups;
  for (const auto& f : res.fringes) report.visibilities.push_back(f.visibility);

  const auto sel =
      select_vmax(res.fringes, cfg.probe_intensities,
                  cfg.signal_amplitude.mod2(), options.vmax_mode);
  report.vmax_intensity_index = sel.intensity_index;
  report.v_max = sel.v_max;
  report.xi = overlap_from_visibility(sel.v_max).xi;

  res.grid.provenance = "reconstruction";
  for (auto& cell : res.cells) {
    if (cell.skipped) continue;
    const ComplexAmplitude beta = ComplexAmplitude::polar(
        std::sqrt(cfg.probe_intensities[cell.intensity_index]), cell.phase);
    cell.wigner = wigner_from_hist(cell.hist, beta);
    res.grid.samples.push_back(cell.wigner);
  }

  std::vector<double> gammas;
  for (const auto& cell : res.cells) {
    if (cell.calibrated) gammas.push_back(cell.calib.gamma);
    if (cell.skipped) ++report.cells_skipped;
  }
  if (gammas.empty()) {
    report.gamma_mean = report.gamma_sd = report.gamma_spread = kNaN;
  } else {
    double sum = 0.0;
    for (double g : gammas) sum += g;
    report.gamma_mean = sum / static_cast<double>(gammas.size());
    double ss = 0.0;
    for (double g : gammas) {
      ss += (g - report.gamma_mean) * (g - report.gamma_mean);
    }
    report.gamma_sd =
        gammas.size() < 2
            ? 0.0
            : std::sqrt(ss / static_cast<double>(gammas.size() - 1));
    report.gamma_spread = report.gamma_sd / report.gamma_mean;
  }

  report.calibration_dominated = 2 * report.cells_skipped > report.cells_total;
  if (report.calibration_dominated) {
    report.beta0_fit = kNaN;
    report.epsilon = kNaN;
    return res;
  }
  if (res.grid.samples.size() < 3) {
    throw insufficient_data_error(
        "too few reconstructed settings to fit the model: " +
        std::to_string(res.grid.samples.size()));
  }
  report.beta0_fit = fit_beta0(res.grid, report.xi);
  const TheoryParams model{report.beta0_fit, report.xi};
  report.epsilon = mean_error(
      res.grid, [&model](ComplexAmplitude b) { return theory_reduced(b, model); });
  return res;
}

void write_analysis(AnalysisResult& result, const std::filesystem::path& dir) {
  const auto out_dir = dir / "analysis";
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> files;

  {
    std::string body =
        "# gain calibration per (intensity, phase) setting\n"
        "# columns: intensity_index phase_index calibrated gamma slope "
        "residual_rms points_used\n";
    for (const auto& cell : result.cells) {
      body += std::to_string(cell.intensity_index) + " " +
              std::to_string(cell.phase_index) + " " +
              (cell.calibrated ? "1" : "0") + " " +
              format_double(cell.calibrated ? cell.calib.gamma : kNaN) + " " +
              format_double(cell.calibrated ? cell.calib.slope : kNaN) + " " +
              format_double(cell.calibrated ? cell.calib.residual_rms : kNaN) +
              " " + std::to_string(cell.calibrated ? cell.calib.points_used : 0) +
              "\n";
    }
    write_text_file(out_dir / "calibration.txt", body);
    files.push_back("analysis/calibration.txt");
  }

  {
    std::string body =
        "# per-setting summary\n"
        "# columns: intensity_index phase_index skipped calibrated "
        "mean_voltage phase_rad wigner_value truncation_m\n";
    for (const auto& cell : result.cells) {
      body += std::to_string(cell.intensity_index) + " " +
              std::to_string(cell.phase_index) + " " +
              (cell.skipped ? "1" : "0") + " " + (cell.calibrated ? "1" : "0") +
              " " + format_double(cell.mean_voltage) + " " +
              format_double(cell.phase) + " " +
              format_double(cell.skipped ? kNaN : cell.wigner.value) + " " +
              std::to_string(cell.skipped ? 0 : cell.wigner.truncation_m) +
              "\n";
    }
    write_text_file(out_dir / "cells.txt", body);
    files.push_back("analysis/cells.txt");
  }

  for (int i = 0; i < result.config.n_intensities(); ++i) {
    const auto& f = result.fringes[i];
    std::string body = "# fringe series at eta_max\n";
    body += "# visibility " + format_double(f.visibility) + "\n";
    body += "# offset " + format_double(f.offset) + "\n";
    body += "# amplitude " + format_double(f.amplitude) + "\n";
    body += "# columns: phase_index mean_voltage cosine phase_rad\n";
    for (std::size_t k = 0; k < f.cosines.size(); ++k) {
      const auto& cell =
          result.cells[static_cast<std::size_t>(i) * result.config.phase_steps +
                       k];
      body += std::to_string(k) + " " + format_double(cell.mean_voltage) +
              " " + format_double(f.cosines[k]) + " " +
              format_double(f.phases[k]) + "\n";
    }
    const std::string name = indexed_name("fringe", i);
    write_text_file(out_dir / name, body);
    files.push_back("analysis/" + name);
  }

  {
    std::string body =
        "# reconstructed Wigner samples at eta_max\n"
        "# columns: re im mod phase_rad value truncation_m\n";
    for (const auto& s : result.grid.samples) {
      body += format_double(s.beta.re) + " " + format_double(s.beta.im) +
              " " + format_double(s.beta.mod()) + " " +
              format_double(s.beta.arg()) + " " + format_double(s.value) +
              " " + std::to_string(s.truncation_m) + "\n";
    }
    write_text_file(out_dir / "wigner_grid.txt", body);
    files.push_back("analysis/wigner_grid.txt");
  }

  files.push_back("analysis/report.json");
  result.report.files = files;

  json j;
  const RunReport& r = result.report;
  j["cells_total"] = r.cells_total;
  j["cells_skipped"] = r.cells_skipped;
  j["calibration_dominated"] = r.calibration_dominated;
  json gamma;
  gamma["mean"] = r.gamma_mean;
  gamma["sd"] = r.gamma_sd;
  gamma["spread"] = r.gamma_spread;
  json values = json::array();
  for (const auto& cell : result.cells) {
    if (!cell.calibrated) continue;
    values.push_back({{"intensity_index", cell.intensity_index},
                      {"phase_index", cell.phase_index},
                      {"gamma", cell.calib.gamma}});
  }
  gamma["values"] = values;
  j["gamma"] = gamma;
  j["visibilities"] = r.visibilities;
  j["vmax_intensity_index"] = r.vmax_intensity_index;
  j["v_max"] = r.v_max;
  j["xi"] = r.xi;
  j["beta0_fit"] = r.beta0_fit;
  j["epsilon"] = r.epsilon;
  j["files"] = r.files;
  write_text_file(out_dir / "report.json", j.dump(2) + "\n");
}

namespace {

struct CellRow {
  int i = 0, k = 0;
  bool skipped = true, calibrated = false;
  double mean_voltage = kNaN, phase = kNaN, value = kNaN;
  long truncation_m = 0;
};

std::vector<CellRow> read_cells_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw partial_data_error("analysis artifacts missing: " + path.string());
  }
  std::vector<CellRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string tok[8];
    bool ok = true;
    for (auto& t : tok) ok = ok && static_cast<bool>(fields >> t);
    if (ok) {
      // stream extraction of double rejects "nan", the honest value of a
      // skipped cell; parse through stod instead
      try {
        CellRow row;
        row.i = std::stoi(tok[0]);
        row.k = std::stoi(tok[1]);
        row.skipped = std::stoi(tok[2]) != 0;
        row.calibrated = std::stoi(tok[3]) != 0;
        row.mean_voltage = std::stod(tok[4]);
        row.phase = std::stod(tok[5]);
        row.value = std::stod(tok[6]);
        row.truncation_m = std::stol(tok[7]);
        rows.push_back(row);
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok) {
      throw partial_data_error("unparseable row in " + path.string() + ": '" +
                               line + "'");
    }
  }
  return rows;
}

json read_report_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw partial_data_error("analysis artifacts missing: " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw partial_data_error("unparseable " + path.string() + ": " + e.what());
  }
  return j;
}

double json_number(const json& j, const char* key) {
  const auto& v = j.at(key);
  return v.is_number() ? v.get<double>() : kNaN;
}

}  // namespace

std::vector<std::string> write_report_files(const std::filesystem::path& dir,
                                            const ReportOptions& options) {
  if (options.format != "text") {
    throw config_error("report format must be 'text', got '" + options.format +
                       "'");
  }
  const ExperimentConfig cfg = read_manifest(dir);
  const json rep = read_report_json(dir / "analysis" / "report.json");
  const auto rows = read_cells_file(dir / "analysis" / "cells.txt");
  const std::size_t expected =
      static_cast<std::size_t>(cfg.n_intensities()) * cfg.phase_steps;
  if (rows.size() != expected) {
    throw partial_data_error("analysis cells.txt does not match the manifest");
  }

  const double xi = json_number(rep, "xi");
  const double beta0 = json_number(rep, "beta0_fit");
  if (!std::isfinite(beta0) || !std::isfinite(xi)) {
    throw insufficient_data_error(
        "analysis did not produce a model fit; nothing to report against");
  }
  const TheoryParams model{beta0, xi};

  std::vector<int> selected = options.intensities;
  for (int idx : selected) {
    if (idx < 0 || idx >= cfg.n_intensities()) {
      throw config_error("report intensity index " + std::to_string(idx) +
                         " outside the configured series");
    }
  }
  if (selected.empty()) {
    // Default: up to three series closest to the signal intensity.
    const double target = cfg.signal_amplitude.mod2();
    std::vector<int> order(cfg.probe_intensities.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(cfg.probe_intensities[a] - target) <
             std::abs(cfg.probe_intensities[b] - target);
    });
    order.resize(std::min<std::size_t>(order.size(), 3));
    std::sort(order.begin(), order.end());
    selected = order;
  }

  const auto out_dir = dir / "report";
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  const auto cell_at = [&](int i, int k) -> const CellRow& {
    return rows[static_cast<std::size_t>(i) * cfg.phase_steps + k];
  };

  for (int i : selected) {
    std::string mv = "# columns: phase_index mean_voltage\n";
    std::string cs = "# columns: phase_index cosine\n";
    std::string ph = "# columns: phase_index phase_rad\n";
    std::string wg = "# columns: phase_index phase_rad wigner_value\n";
    for (int k = 0; k < cfg.phase_steps; ++k) {
      const CellRow& row = cell_at(i, k);
      mv += std::to_string(k) + " " + format_double(row.mean_voltage) + "\n";
      cs += std::to_string(k) + " " + format_double(std::cos(row.phase)) + "\n";
      ph += std::to_string(k) + " " + format_double(row.phase) + "\n";
      if (!row.skipped) {
        wg += std::to_string(k) + " " + format_double(row.phase) + " " +
              format_double(row.value) + "\n";
      }
    }
    const std::pair<const char*, const std::string*> parts[] = {
        {"mean_voltage", &mv}, {"cosine", &cs}, {"phase", &ph}, {"wigner", &wg}};
    for (const auto& [stem, body] : parts) {
      const std::string name = indexed_name(stem, i);
      write_text_file(out_dir / name, *body);
      written.push_back("report/" + name);
    }
  }

  {
    std::string body =
        "# reconstruction vs model along the phase axis\n"
        "# columns: intensity_index mod phase_rad value model_value\n";
    for (int i : selected) {
      const double amp = std::sqrt(cfg.probe_intensities[i]);
      for (int k = 0; k < cfg.phase_steps; ++k) {
        const CellRow& row = cell_at(i, k);
        if (row.skipped) continue;
        const ComplexAmplitude beta =
            ComplexAmplitude::polar(amp, row.phase);
        body += std::to_string(i) + " " + format_double(amp) + " " +
                format_double(row.phase) + " " + format_double(row.value) +
                " " + format_double(theory_reduced(beta, model)) + "\n";
      }
    }
    write_text_file(out_dir / "sections.txt", body);
    written.push_back("report/sections.txt");
  }

  {
    std::string body =
        "# full reconstructed surface, one row per analyzed setting\n"
        "# columns: re im mod phase_rad value truncation_m\n";
    for (const auto& row : rows) {
      if (row.skipped) continue;
      const double amp = std::sqrt(cfg.probe_intensities[row.i]);
      const ComplexAmplitude beta = ComplexAmplitude::polar(amp, row.phase);
      body += format_double(beta.re) + " " + format_double(beta.im) + " " +
              format_double(amp) + " " + format_double(row.phase) + " " +
              format_double(row.value) + " " + std::to_string(row.truncation_m) +
              "\n";
    }
    write_text_file(out_dir / "surface.txt", body);
    written.push_back("report/surface.txt");
  }

  {
    std::ostringstream s;
    s << "Photon-counting reconstruction summary\n";
    s << "======================================\n\n";
    s << "settings: " << cfg.n_intensities() << " intensities x "
      << cfg.phase_steps << " phase steps x " << cfg.n_etas()
      << " efficiencies, " << cfg.shots_per_point << " shots per point\n";
    s << "cells analyzed: "
      << rep.at("cells_total").get<std::size_t>() -
             rep.at("cells_skipped").get<std::size_t>()
      << " of " << rep.at("cells_total").get<std::size_t>() << " (skipped "
      << rep.at("cells_skipped").get<std::size_t>() << ")\n\n";
    s << "gain: mean " << format_double(json_number(rep.at("gamma"), "mean"))
      << " V/photon, sd " << format_double(json_number(rep.at("gamma"), "sd"))
      << ", spread " << format_double(json_number(rep.at("gamma"), "spread"))
      << "\n\n";
    s << "visibility per intensity series:\n";
    const auto vis = rep.at("visibilities").get<std::vector<double>>();
    for (std::size_t i = 0; i < vis.size(); ++i) {
      s << "  " << i << "  |beta|^2 " << format_double(cfg.probe_intensities[i])
        << "  V " << format_double(vis[i]) << "\n";
    }
    s << "\npeak visibility: " << format_double(json_number(rep, "v_max"))
      << " at intensity index "
      << rep.at("vmax_intensity_index").get<std::size_t>() << "\n";
    s << "mode overlap estimate: " << format_double(xi) << "\n";
    s << "fitted signal amplitude: " << format_double(beta0) << "\n";
    s << "mean reconstruction error: "
      << format_double(json_number(rep, "epsilon")) << "\n\n";
    s << "plot data files:\n";
    for (const auto& name : written) s << "  " << name << "\n";
    write_text_file(out_dir / "summary.txt", s.str());
    written.push_back("report/summary.txt");
  }
  return written;
}

}  // namespace wigrec
