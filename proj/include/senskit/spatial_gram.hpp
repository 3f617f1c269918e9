#pragma once

#include <cstddef>

#include "senskit/kernels.hpp"
#include "senskit/nullspace.hpp"
#include "senskit/types.hpp"

namespace senskit {

// Image-domain filter evaluations h_r(x, q) = sum_n h_r[n,q] exp(+i2pi n.x)
// on a voxel grid. This is the memory-hungry baseline representation; its
// construction refuses to allocate past `max_bytes`.
struct FilterField {
  Dims dims;
  Index channels = 0;
  Index filters = 0;
  VectorXcd values;  // plane (r, q) of length N at ((r * Q) + q) * N

  Index voxels() const { return numel(dims); }
  Eigen::Map<const VectorXcd> plane(Index r, Index q) const {
    const Index n = voxels();
    return Eigen::Map<const VectorXcd>(values.data() + (r * channels + q) * n, n);
  }
};

// Filter outer-product aggregate W = sum_r h_r h_r^H. Block (q,p) spans
// rows q|Lambda|.., columns p|Lambda|.. .
struct AggregateW {
  MatrixXcd entries;  // (Q|Lambda|) x (Q|Lambda|), Hermitian PSD, trace R
  Index channels = 0;
  Index support_size = 0;
};

// Per-voxel Q x Q Hermitian matrices, stored column-major per voxel.
struct GramField {
  Dims dims;
  Index channels = 0;
  VectorXcd values;  // N * Q * Q

  Index voxels() const { return numel(dims); }
  Eigen::Map<MatrixXcd> at(Index voxel) {
    const Index q = channels;
    return Eigen::Map<MatrixXcd>(values.data() + voxel * q * q, q, q);
  }
  Eigen::Map<const MatrixXcd> at(Index voxel) const {
    const Index q = channels;
    return Eigen::Map<const MatrixXcd>(values.data() + voxel * q * q, q, q);
  }
  std::size_t bytes() const { return std::size_t(values.size()) * sizeof(Cx); }
};

constexpr std::size_t kDefaultFieldByteCap = std::size_t(1) << 30;

FilterField filter_field_naive(const NullspaceBasis& basis, const KernelSupport& support,
                               const Dims& dims, std::size_t max_bytes = kDefaultFieldByteCap);

// G(x) = H(x)^H H(x) by direct summation over filters.
GramField gram_field_naive(const FilterField& field);

AggregateW aggregate_w(const NullspaceBasis& basis);

// Fast path: folds each W block into a lag-domain kernel and evaluates it on
// the grid with one transform per channel pair (upper-triangular blocks
// computed, the rest mirrored). Agrees with the naive composition up to
// transform roundoff on any grid.
GramField gram_field_fast(const AggregateW& w, const KernelSupport& support, const Dims& dims);

// B(x) = I - G(x)/|Lambda|: same eigenvectors, eigenvalues mapped
// lambda -> 1 - lambda/|Lambda|, so the largest eigenpair of B is the
// smallest of G.
GramField to_espirit_field(const GramField& g, Index support_size);
void espirit_inplace(GramField& g, Index support_size);

}  // namespace senskit
