#pragma once

#include "senskit/types.hpp"

namespace senskit {

enum class KernelShape { rect, ellipsoid };

// FIR filter support: the finite set of integer offsets the calibration
// filters live on. rect keeps |n|_inf <= tau, ellipsoid keeps n.n <= tau^2
// (exact integer comparison, so boundary lattice points are unambiguous).
//
// The enumeration order (lexicographic by axis) is part of the public
// contract: calibration-matrix columns and W blocks are laid out in it.
struct KernelSupport {
  KernelShape shape = KernelShape::rect;
  int tau = 0;
  Eigen::MatrixXi offsets;  // |Lambda| x D, row i = n_i

  Index size() const { return offsets.rows(); }
  Index ndim() const { return offsets.cols(); }
};

KernelSupport make_support(KernelShape shape, int tau, int ndim);

}  // namespace senskit
