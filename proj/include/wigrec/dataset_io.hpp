#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wigrec/sim.hpp"

namespace wigrec {

/// Run directory layout:
///   manifest.json                   -- the experiment configuration
///   cells/cell_iAAA_pBBB_eCCC.txt   -- one voltage per line, full precision
///   true_phases.ground_truth.txt    -- realized phases, testing only
///
/// Indices are zero-based: AAA intensity, BBB phase step, CCC efficiency.

std::string cell_filename(int i, int k, int e);

void write_manifest(const ExperimentConfig& cfg,
                    const std::filesystem::path& dir);
ExperimentConfig read_manifest(const std::filesystem::path& dir);

void write_cell(const std::filesystem::path& dir, int i, int k, int e,
                const std::vector<double>& voltages);
std::vector<double> read_cell(const std::filesystem::path& dir, int i, int k,
                              int e);

/// The ground-truth sidecar exists for round-trip tests; analysis code must
/// not call these readers.
void write_true_phases(const ExperimentConfig& cfg,
                       const std::vector<double>& phases,
                       const std::filesystem::path& dir);
std::vector<double> read_true_phases(const std::filesystem::path& dir);

/// Write a complete in-memory dataset (manifest, cells, sidecar).
void write_dataset(const ShotDataset& data, const std::filesystem::path& dir);

/// Load manifest and every cell. The ground-truth sidecar is deliberately
/// not loaded; true_phases comes back empty. Missing or unreadable cells
/// raise partial_data_error listing the gaps.
ShotDataset read_dataset(const std::filesystem::path& dir);

}  // namespace wigrec
