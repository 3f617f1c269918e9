#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "senskit/maps.hpp"
#include "senskit/types.hpp"

namespace senskit {

struct ResidualReport {
  double value = 0.0;  // ||data - projection||_2 / ||data||_2, in [0, 1+eps]
  std::string dataset_id;
  std::string config_snapshot;  // JSON text of the producing configuration
};

// Transforms the k-space data to the image domain per channel, projects each
// voxel's channel vector onto the map direction, and reports the normalized
// residual norm. Voxels where the maps vanish contribute their full data.
ResidualReport projection_residual(const ComplexImageStack& kspace_data,
                                   const SensitivityResult& maps);

// Largest per-voxel difference between two stacks after aligning each voxel
// of b to a by a unit phase.
double gauge_aligned_max_difference(const ComplexImageStack& a, const ComplexImageStack& b);

// Angle between two channel vectors modulo a unit phase, in radians.
double map_vector_angle(const VectorXcd& a, const VectorXcd& b);

double dice_coefficient(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);

}  // namespace senskit
