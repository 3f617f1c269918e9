#pragma once

#include <cstdint>

#include "senskit/types.hpp"

namespace senskit::fft {

// In-place unnormalized n-D DFT of one row-major volume, applied axis by
// axis. sign == -1 computes sum exp(-i2pi k.j/N), sign == +1 the conjugate
// kernel. No scaling in either direction.
void transform_nd(Cx* data, const Dims& dims, int sign);

// Move the origin between array slot 0 and the centered slot floor(n/2):
// fftshift places slot 0 at the center, ifftshift undoes it. The two are
// exact inverses for both even and odd extents.
void fftshift_nd(Cx* data, const Dims& dims);
void ifftshift_nd(Cx* data, const Dims& dims);

// Centered Fourier-series pair. image_to_kspace produces the coefficients
// s[n] of img(x) = sum_n s[n] exp(+i2pi n.x) sampled at the FOV voxel
// coordinates (so s[0] is the image mean); kspace_to_image is its exact
// inverse. Frequency slot a holds integer frequency a - floor(n/2).
void image_to_kspace(Cx* data, const Dims& dims);
void kspace_to_image(Cx* data, const Dims& dims);

// Unitary centered pair (Parseval-preserving); the measurement model and
// the residual metric use these.
void image_to_kspace_unitary(Cx* data, const Dims& dims);
void kspace_to_image_unitary(Cx* data, const Dims& dims);

// Transform-count instrumentation, one tick per n-D transform, keyed by
// kernel sign. Used by tests and the benchmark harness.
std::int64_t forward_transforms();
std::int64_t inverse_transforms();
void reset_transform_counters();

}  // namespace senskit::fft
