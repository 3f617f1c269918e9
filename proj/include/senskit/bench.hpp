#pragma once

#include <map>
#include <string>
#include <vector>

#include "senskit/maps.hpp"
#include "senskit/types.hpp"

namespace senskit {

// One (calibration size, arm) cell of the comparison sweep.
struct BenchCell {
  Index calib_size = 0;
  std::string arm;
  std::map<std::string, StageStats> stage_medians;  // median seconds, peak accounted bytes
  double total_median_seconds = 0.0;
  double residual = 0.0;
  Index nullspace_rank = 0;
  Index grid_voxels = 0;
  // Accounted high-water mark of the per-voxel stages (field + eigensolve)
  // next to the projected cost of materializing the full R x Q filter
  // field: R * Q * N * 16 bytes (a projection, not a measurement).
  std::size_t pervoxel_peak_bytes = 0;
  std::size_t hfield_projection_bytes = 0;
  std::string error;  // nonempty if this arm failed at this size
};

struct BenchReport {
  std::vector<BenchCell> cells;
  int reps = 0;
  int threads = 0;
  PipelineConfig arm_a;
  PipelineConfig arm_b;
  std::string arm_a_name = "baseline";
  std::string arm_b_name = "pisco";
  // speedup[i] = total_a / total_b at calib_sizes[i]; NaN where an arm failed.
  std::vector<Index> calib_sizes;
  std::vector<double> speedups;
};

// Runs both arms at every calibration size: one discarded warm-up, then
// `reps` measured repetitions (floored at 5), reporting stage-wise medians.
// A failing arm is recorded in its cell and the sweep continues.
BenchReport run_benchmark(const ComplexImageStack& kspace, const PipelineConfig& arm_a,
                          const PipelineConfig& arm_b, const std::vector<Index>& calib_sizes,
                          int reps = 5);

// Schema: calib_size, arm, stage, median_seconds, peak_bytes, residual.
void write_bench_csv(const BenchReport& report, const std::string& path);
void write_bench_json(const BenchReport& report, const std::string& path);

}  // namespace senskit
