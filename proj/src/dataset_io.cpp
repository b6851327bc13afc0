#include "wigrec/dataset_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace wigrec {

namespace {

using nlohmann::json;

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

}  // namespace

std::string cell_filename(int i, int k, int e) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "cells/cell_i%03d_p%03d_e%03d.txt", i, k, e);
  return buf;
}

void write_manifest(const ExperimentConfig& cfg,
                    const std::filesystem::path& dir) {
  json j;
  j["signal_amplitude"] = {{"re", cfg.signal_amplitude.re},
                           {"im", cfg.signal_amplitude.im}};
  j["probe_intensities"] = cfg.probe_intensities;
  j["phase_steps"] = cfg.phase_steps;
  j["eta_values"] = cfg.eta_values;
  j["eta_max"] = cfg.eta_max;
  j["gain"] = cfg.gain;
  j["overlap"] = cfg.overlap;
  j["shots_per_point"] = cfg.shots_per_point;
  j["electronic_noise_sd"] = cfg.electronic_noise_sd;
  j["rng_seed"] = cfg.rng_seed;
  j["piezo_jitter_sd"] = cfg.piezo_jitter_sd;
  std::filesystem::create_directories(dir);
  write_text_file(dir / "manifest.json", j.dump(2) + "\n");
}

ExperimentConfig read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) {
    throw partial_data_error("missing manifest: " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error("unparseable manifest " + path.string() + ": " +
                       e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.signal_amplitude = {j.at("signal_amplitude").at("re").get<double>(),
                            j.at("signal_amplitude").at("im").get<double>()};
    cfg.probe_intensities =
        j.at("probe_intensities").get<std::vector<double>>();
    cfg.phase_steps = j.at("phase_steps").get<int>();
    cfg.eta_values = j.at("eta_values").get<std::vector<double>>();
    cfg.eta_max = j.at("eta_max").get<double>();
    cfg.gain = j.at("gain").get<double>();
    cfg.overlap = j.at("overlap").get<double>();
    cfg.shots_per_point = j.at("shots_per_point").get<int>();
    cfg.electronic_noise_sd = j.at("electronic_noise_sd").get<double>();
    cfg.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    cfg.piezo_jitter_sd = j.at("piezo_jitter_sd").get<double>();
  } catch (const json::exception& e) {
    throw config_error("manifest " + path.string() +
                       " missing or mistyped field: " + e.what());
  }
  cfg.validate();
  return cfg;
}

void write_cell(const std::filesystem::path& dir, int i, int k, int e,
                const std::vector<double>& voltages) {
  std::string body;
  body.reserve(voltages.size() * 20);
  for (double v : voltages) {
    body += format_double(v);
    body += '\n';
  }
  write_text_file(dir / cell_filename(i, k, e), body);
}

std::vector<double> read_cell(const std::filesystem::path& dir, int i, int k,
                              int e) {
  const auto path = dir / cell_filename(i, k, e);
  std::ifstream in(path);
  if (!in) {
    throw partial_data_error("missing cell file: " + path.string());
  }
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(line, &pos);
    } catch (const std::exception&) {
      throw partial_data_error("unparseable voltage in " + path.string() +
                               ": '" + line + "'");
    }
    if (pos != line.size() || !std::isfinite(v)) {
      throw partial_data_error("unparseable voltage in " + path.string() +
                               ": '" + line + "'");
    }
    out.push_back(v);
  }
  return out;
}

void write_true_phases(const ExperimentConfig& cfg,
                       const std::vector<double>& phases,
                       const std::filesystem::path& dir) {
  std::string body =
      "# ground truth: realized probe phases, one per (intensity, step).\n"
      "# columns: intensity_index step_index phase_rad\n";
  for (int i = 0; i < cfg.n_intensities(); ++i) {
    for (int k = 0; k < cfg.phase_steps; ++k) {
      const std::size_t idx =
          static_cast<std::size_t>(i) * cfg.phase_steps + k;
      body += std::to_string(i) + " " + std::to_string(k) + " " +
              format_double(phases.at(idx)) + "\n";
    }
  }
  write_text_file(dir / "true_phases.ground_truth.txt", body);
}

std::vector<double> read_true_phases(const std::filesystem::path& dir) {
  const auto path = dir / "true_phases.ground_truth.txt";
  std::ifstream in(path);
  if (!in) {
    throw partial_data_error("missing ground-truth sidecar: " + path.string());
  }
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    int i, k;
    double phase;
    if (!(fields >> i >> k >> phase)) {
      throw partial_data_error("unparseable sidecar line: '" + line + "'");
    }
    out.push_back(phase);
  }
  return out;
}

void write_dataset(const ShotDataset& data, const std::filesystem::path& dir) {
  write_manifest(data.config, dir);
  std::filesystem::create_directories(dir / "cells");
  const auto& cfg = data.config;
  for (int i = 0; i < cfg.n_intensities(); ++i) {
    for (int k = 0; k < cfg.phase_steps; ++k) {
      for (int e = 0; e < cfg.n_etas(); ++e) {
        write_cell(dir, i, k, e, data.cell(i, k, e));
      }
    }
  }
  write_true_phases(cfg, data.true_phases, dir);
}

ShotDataset read_dataset(const std::filesystem::path& dir) {
  ShotDataset data;
  data.config = read_manifest(dir);
  const auto& cfg = data.config;
  const std::size_t total = static_cast<std::size_t>(cfg.n_intensities()) *
                            cfg.phase_steps * cfg.n_etas();
  data.cells.resize(total);

  std::vector<std::string> gaps;
  for (int i = 0; i < cfg.n_intensities(); ++i) {
    for (int k = 0; k < cfg.phase_steps; ++k) {
      for (int e = 0; e < cfg.n_etas(); ++e) {
        try {
          data.cells[data.cell_index(i, k, e)] = read_cell(dir, i, k, e);
        } catch (const partial_data_error& err) {
          gaps.emplace_back(err.what());
        }
      }
    }
  }
  if (!gaps.empty()) {
    std::ostringstream msg;
    msg << "run directory " << dir.string() << " has " << gaps.size()
        << " unusable cells:";
    const std::size_t shown = std::min<std::size_t>(gaps.size(), 10);
    for (std::size_t g = 0; g < shown; ++g) msg << "\n  " << gaps[g];
    if (gaps.size() > shown) {
      msg << "\n  ... and " << gaps.size() - shown << " more";
    }
    throw partial_data_error(msg.str());
  }
  return data;
}

}  // namespace wigrec
