#pragma once

#include "senskit/kernels.hpp"
#include "senskit/types.hpp"

namespace senskit {

// Convolution-structured calibration matrix C = [C_1 ... C_Q]. Row per
// valid shift n (row-major over shift positions), channel-major column
// blocks, inner column order = support enumeration; entry (n, (q,i)) is
// s_q[n - n_i].
//
// Valid shifts are those where the full rectangular bounding box of the
// support fits inside the calibration region, for both kernel shapes, so
// P = prod(extent - 2*tau) either way.
struct CalibMatrix {
  MatrixXcd entries;  // P x (Q * |Lambda|)
  Index valid_shifts = 0;
  Index channels = 0;
  Index support_size = 0;
};

enum class GramMethod { explicit_product, fft };

struct GramMatrix {
  MatrixXcd entries;  // (Q|Lambda|) x (Q|Lambda|), Hermitian PSD
  GramMethod method = GramMethod::explicit_product;
  Index channels = 0;
  Index support_size = 0;
};

CalibMatrix build_calib_matrix(const CalibrationRegion& calib, const KernelSupport& support);

// Reference path: C^H C by direct multiplication.
GramMatrix gram_explicit(const CalibMatrix& c);

// Matrix-free path: one zero-padded forward transform per channel and one
// inverse per channel pair give cross-correlation arrays; block (p,q) of
// the Gram is read off at lag n_s - n_t. The row masking of the exact Gram
// is dropped, so this approximates gram_explicit (exactly equal when
// |Lambda| == 1).
GramMatrix gram_fft(const CalibrationRegion& calib, const KernelSupport& support);

}  // namespace senskit
