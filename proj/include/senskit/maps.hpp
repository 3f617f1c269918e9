#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "senskit/calibration.hpp"
#include "senskit/eigensolve.hpp"
#include "senskit/kernels.hpp"
#include "senskit/nullspace.hpp"
#include "senskit/spatial_gram.hpp"
#include "senskit/types.hpp"

namespace senskit {

enum class GridMode { full, reduced };
enum class EigMethod { dense, power };
enum class MapMethod { nullspace, espirit };
enum class FieldPath { naive, fast };

struct PipelineConfig {
  KernelShape kernel = KernelShape::rect;
  int tau = 3;
  GramMethod gram = GramMethod::explicit_product;
  double nullspace_threshold = 0.05;
  GridMode grid = GridMode::full;
  Index grid_pad = 24;
  EigMethod eig = EigMethod::dense;
  int power_iters = 10;
  MapMethod method = MapMethod::nullspace;
  FieldPath field = FieldPath::fast;
  // Cut on the normalized smallest-eigenvalue surrogate. Calibrated against
  // generator ground truth: 0.01 sits inside the in/out-of-support gap of
  // the lambda map across the synthetic sweeps, where 0.05 does not.
  double mask_threshold = 0.01;
  // Gaussian apodization std-dev for the phase reference, in k-space index
  // units; <= 0 selects extent/4 per axis.
  double apod_width = -1.0;
  std::size_t field_byte_cap = kDefaultFieldByteCap;

  static PipelineConfig baseline();
  static PipelineConfig pisco();
};

struct NormalizationRecord {
  bool sos = false;
  bool phase_referenced = false;
  bool renormalized_after_interpolation = false;
  std::vector<double> apod_sigma;  // per axis
  Index zeroed_voxels = 0;
};

struct StageStats {
  double seconds = 0.0;
  std::size_t peak_bytes = 0;
};

struct Provenance {
  PipelineConfig config;
  Dims calib_dims;
  Dims full_dims;
  Dims grid_dims;
  Index channels = 0;
  Index support_size = 0;
  Index valid_shifts = 0;
  Index nullspace_rank = 0;
  double sigma1 = 0.0;
  VectorXd spectrum_normalized;
  std::map<std::string, StageStats> stages;
  double total_seconds = 0.0;
};

struct SensitivityResult {
  ComplexImageStack maps;  // image domain, Q channels, full dims
  ArrayXd lambda_min_map;  // smallest-eigenvalue surrogate on the [0,1] scale
  std::vector<std::uint8_t> support_mask;
  NormalizationRecord normalization;
  Provenance provenance;
};

// Full pipeline: support -> Gram -> nullspace -> per-voxel field -> eigsolve
// -> normalize -> (interpolate) -> mask, per the configuration.
SensitivityResult estimate_maps(const CalibrationRegion& calib, const Dims& full_dims,
                                const PipelineConfig& cfg);

// Sum-of-squares magnitude normalization followed by phase referencing
// against the Gaussian-apodized coil-combined calibration reconstruction;
// the combined image comes out real and non-negative, which both fixes the
// per-voxel gauge and makes the maps smooth enough to interpolate.
std::pair<ComplexImageStack, NormalizationRecord> normalize_maps(const ComplexImageStack& raw,
                                                                 const CalibrationRegion& calib,
                                                                 double apod_width);

// Periodic sinc interpolation via centered zero-padded transforms. DC
// amplitude is preserved, so constant maps stay constant.
ComplexImageStack interpolate_maps(const ComplexImageStack& lowres, const Dims& full_dims);
ArrayXd interpolate_real(const ArrayXd& lowres, const Dims& low_dims, const Dims& full_dims);

// Per axis min(calib_extent + pad, full_extent).
Dims reduced_grid_dims(const Dims& calib_dims, Index pad, const Dims& full_dims);

std::vector<std::uint8_t> support_mask(const ArrayXd& lambda_min_map, double mask_threshold);

// Pipeline stages, exposed so tests and the benchmark harness can drive the
// same code paths estimate_maps runs.
namespace pipeline {

struct RawMaps {
  ComplexImageStack maps;  // eigensolver output, one unit vector per voxel
  ArrayXd lambda;          // smallest-eigenvalue surrogate, [0,1] scale
};

GramMatrix compute_gram(const CalibrationRegion& calib, const KernelSupport& support,
                        const PipelineConfig& cfg);
Dims grid_dims_for(const CalibrationRegion& calib, const Dims& full_dims,
                   const PipelineConfig& cfg);
GramField compute_field(const NullspaceBasis& basis, const KernelSupport& support,
                        const Dims& grid_dims, const PipelineConfig& cfg);
RawMaps solve_field(GramField field, Index support_size, const PipelineConfig& cfg);
SensitivityResult finalize(RawMaps&& raw, const CalibrationRegion& calib, const Dims& full_dims,
                           const PipelineConfig& cfg);

}  // namespace pipeline

const char* name_of(KernelShape v);
const char* name_of(GramMethod v);
const char* name_of(GridMode v);
const char* name_of(EigMethod v);
const char* name_of(MapMethod v);
const char* name_of(FieldPath v);

}  // namespace senskit
