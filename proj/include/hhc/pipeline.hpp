#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hhc/featurize.hpp"
#include "hhc/model.hpp"

namespace hhc {

struct PipelineConfig {
  std::string events;
  std::string facilities;
  std::string centroids;
  std::string weather;
  std::string flu;
  double lambda = 1.0;
  int folds = 10;
  std::uint64_t seed = 0;
  std::string facility;  // empty = all facilities (global mode)
  std::string out = "out";
  int threads = 1;
  int relief_neighbors = 10;
  std::int64_t relief_samples = -1;
  double relief_sigma = 20.0;
};

/// Artifact layout inside the output directory.
struct StagePaths {
  std::string shifts_kept;
  std::string shifts_dropped;
  std::string facility_summary;
  std::string joined;
  std::string design;
  std::string design_scaling;
  std::string relief_design;
  std::string hypothesis;
  std::string ranking;
  std::string margins_dir;
  std::string ttest;
  std::string report;
};

StagePaths stage_paths(const std::string& out_dir);

// Each stage reads its inputs from disk (raw inputs or earlier artifacts)
// and writes its own artifacts, so re-running a later stage alone gives the
// same bytes as a full run.
void run_ingest(const PipelineConfig& cfg);
void run_features(const PipelineConfig& cfg);
void run_fit(const PipelineConfig& cfg);
void run_rank(const PipelineConfig& cfg);
void run_margins(const PipelineConfig& cfg);
void run_ttest(const PipelineConfig& cfg);
void run_report(const PipelineConfig& cfg);
void run_all(const PipelineConfig& cfg);

// Artifact readers shared by stages and tests.
std::vector<ShiftRecord> read_shift_records(const std::string& path);
std::vector<JoinedShift> read_joined(const std::string& path);
DesignMatrix read_design(const std::string& design_path,
                         const std::string& scaling_path);
Hypothesis read_hypothesis(const std::string& path);

}  // namespace hhc
