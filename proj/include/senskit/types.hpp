#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace senskit {

using Index = Eigen::Index;
using Cx = std::complex<double>;
using Dims = std::vector<Index>;

using Eigen::ArrayXd;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Raised when the calibration matrix has no approximate nullspace; map
// estimation cannot proceed in that case.
struct NullspaceEmptyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Index numel(const Dims& dims);

// Row-major strides, last axis fastest.
std::vector<Index> strides_of(const Dims& dims);

// Advance a row-major multi-index; returns false once all indices are visited.
bool next_index(std::vector<Index>& idx, const Dims& dims);

// Array slot of the centered origin (k-space zero frequency, or the image
// coordinate origin). For even extents this is extent/2, matching the
// standard centered-spectrum layout.
inline Index center_index(Index extent) { return extent / 2; }
Dims centers_of(const Dims& dims);

// FOV convention shared by every module: the field of view is the unit
// hypercube {x : |x|_inf < 1/2}, sampled uniformly so that voxel j along an
// axis of extent n sits at x = (j - floor(n/2)) / n. The map is affine and
// strictly monotone; voxel 0 sits on the -1/2 side.
inline double voxel_coord(Index j, Index extent) {
  return double(j - center_index(extent)) / double(extent);
}

enum class Domain { image, kspace };

// Gridded multichannel complex samples. Storage is channel-major: each
// channel's voxels are contiguous, row-major within the channel.
struct ComplexImageStack {
  Dims dims;
  Index channels = 0;
  Domain domain = Domain::image;
  VectorXcd data;  // channels * numel(dims)

  ComplexImageStack() = default;
  ComplexImageStack(Dims d, Index q, Domain dom);

  Index voxels() const { return numel(dims); }
  Eigen::Map<VectorXcd> channel(Index q);
  Eigen::Map<const VectorXcd> channel(Index q) const;

  void validate() const;
};

// Centered block of k-space samples used for calibration. center_offset is
// the array index of the k-space origin inside the block, so sample a maps
// to integer frequency a - center_offset per axis.
struct CalibrationRegion {
  ComplexImageStack grid;  // domain == kspace
  Dims center_offset;

  const Dims& dims() const { return grid.dims; }
  Index channels() const { return grid.channels; }
};

// Centered sub-block extraction. The parent's k-space origin (slot
// floor(dims/2)) maps into the region, which keeps extraction idempotent and
// commuting with centered zero-padding.
CalibrationRegion extract_calibration(const ComplexImageStack& stack, const Dims& size);

}  // namespace senskit
