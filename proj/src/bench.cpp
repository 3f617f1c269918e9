#include "senskit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "senskit/memlog.hpp"
#include "senskit/metrics.hpp"
#include "senskit/parallel.hpp"
#include "senskit/serialize.hpp"

namespace senskit {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

BenchCell run_arm(const ComplexImageStack& kspace, const PipelineConfig& cfg,
                  const std::string& arm_name, Index calib_size, int reps) {
  BenchCell cell;
  cell.calib_size = calib_size;
  cell.arm = arm_name;

  try {
    const Dims size(kspace.dims.size(), calib_size);
    const CalibrationRegion calib = extract_calibration(kspace, size);

    memlog::reset();
    SensitivityResult warm = estimate_maps(calib, kspace.dims, cfg);  // discarded warm-up

    std::map<std::string, std::vector<double>> stage_secs;
    std::map<std::string, std::size_t> stage_peak;
    std::vector<double> totals;
    SensitivityResult last;
    for (int rep = 0; rep < reps; ++rep) {
      memlog::reset();
      last = estimate_maps(calib, kspace.dims, cfg);
      for (const auto& [name, stats] : last.provenance.stages) {
        stage_secs[name].push_back(stats.seconds);
        stage_peak[name] = std::max(stage_peak[name], stats.peak_bytes);
      }
      totals.push_back(last.provenance.total_seconds);
    }

    for (const auto& [name, secs] : stage_secs)
      cell.stage_medians[name] = {median(secs), stage_peak[name]};
    cell.total_median_seconds = median(totals);
    cell.residual = projection_residual(kspace, last).value;
    cell.nullspace_rank = last.provenance.nullspace_rank;
    cell.grid_voxels = numel(last.provenance.grid_dims);
    cell.pervoxel_peak_bytes =
        std::max(stage_peak["field"], stage_peak["eigensolve"]);
    cell.hfield_projection_bytes = std::size_t(cell.nullspace_rank) *
                                   std::size_t(kspace.channels) *
                                   std::size_t(cell.grid_voxels) * 16;
    (void)warm;
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  return cell;
}

}  // namespace

BenchReport run_benchmark(const ComplexImageStack& kspace, const PipelineConfig& arm_a,
                          const PipelineConfig& arm_b, const std::vector<Index>& calib_sizes,
                          int reps) {
  kspace.validate();
  reps = std::max(reps, 5);

  BenchReport report;
  report.reps = reps;
  report.threads = max_threads();
  report.arm_a = arm_a;
  report.arm_b = arm_b;
  report.calib_sizes = calib_sizes;

  for (Index size : calib_sizes) {
    BenchCell a = run_arm(kspace, arm_a, report.arm_a_name, size, reps);
    BenchCell b = run_arm(kspace, arm_b, report.arm_b_name, size, reps);
    double speedup = std::numeric_limits<double>::quiet_NaN();
    if (a.error.empty() && b.error.empty() && b.total_median_seconds > 0)
      speedup = a.total_median_seconds / b.total_median_seconds;
    report.speedups.push_back(speedup);
    report.cells.push_back(std::move(a));
    report.cells.push_back(std::move(b));
  }
  return report;
}

void write_bench_csv(const BenchReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "calib_size,arm,stage,median_seconds,peak_bytes,residual\n";
  for (const auto& cell : report.cells) {
    if (!cell.error.empty()) continue;
    for (const auto& [stage, stats] : cell.stage_medians)
      out << cell.calib_size << "," << cell.arm << "," << stage << "," << stats.seconds << ","
          << stats.peak_bytes << "," << cell.residual << "\n";
    out << cell.calib_size << "," << cell.arm << ",total," << cell.total_median_seconds << ","
        << cell.pervoxel_peak_bytes << "," << cell.residual << "\n";
  }
  if (!out.flush()) throw IoError("write failure on " + path);
}

void write_bench_json(const BenchReport& report, const std::string& path) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : report.cells) {
    nlohmann::json stages = nlohmann::json::object();
    for (const auto& [stage, stats] : cell.stage_medians)
      stages[stage] = {{"median_seconds", stats.seconds}, {"peak_bytes", stats.peak_bytes}};
    cells.push_back({{"calib_size", cell.calib_size},
                     {"arm", cell.arm},
                     {"stages", stages},
                     {"total_median_seconds", cell.total_median_seconds},
                     {"residual", cell.residual},
                     {"nullspace_rank", cell.nullspace_rank},
                     {"grid_voxels", cell.grid_voxels},
                     {"pervoxel_peak_bytes", cell.pervoxel_peak_bytes},
                     {"hfield_projection_bytes",
                      {{"bytes", cell.hfield_projection_bytes}, {"provenance", "projected"}}},
                     {"error", cell.error}});
  }
  nlohmann::json speedups = nlohmann::json::array();
  for (std::size_t i = 0; i < report.calib_sizes.size(); ++i) {
    const double s = report.speedups[i];
    speedups.push_back({{"calib_size", report.calib_sizes[i]},
                        {"speedup", std::isnan(s) ? nlohmann::json() : nlohmann::json(s)}});
  }
  nlohmann::json doc = {{"reps", report.reps},
                        {"threads", report.threads},
                        {"arm_a", {{"name", report.arm_a_name},
                                   {"config", serialize::config_json(report.arm_a)}}},
                        {"arm_b", {{"name", report.arm_b_name},
                                   {"config", serialize::config_json(report.arm_b)}}},
                        {"cells", cells},
                        {"speedups", speedups}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << doc.dump(2) << "\n";
  if (!out.flush()) throw IoError("write failure on " + path);
}

}  // namespace senskit
