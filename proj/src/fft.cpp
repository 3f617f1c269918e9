#include "senskit/fft.hpp"

#include <atomic>
#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace senskit::fft {

namespace {

std::atomic<std::int64_t> g_forward{0};
std::atomic<std::int64_t> g_inverse{0};

// Applies fn to every line along `axis`, gathered into a contiguous buffer.
template <typename Fn>
void for_each_line(Cx* data, const Dims& dims, std::size_t axis, Fn&& fn) {
  const Index n = dims[axis];
  Index outer = 1, inner = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= dims[a];
  for (std::size_t a = axis + 1; a < dims.size(); ++a) inner *= dims[a];

  std::vector<Cx> line(n), out(n);
  for (Index o = 0; o < outer; ++o) {
    for (Index i = 0; i < inner; ++i) {
      Cx* base = data + o * n * inner + i;
      for (Index k = 0; k < n; ++k) line[k] = base[k * inner];
      fn(line.data(), out.data(), n);
      for (Index k = 0; k < n; ++k) base[k * inner] = out[k];
    }
  }
}

}  // namespace

void transform_nd(Cx* data, const Dims& dims, int sign) {
  Eigen::FFT<double> impl;
  for (std::size_t axis = 0; axis < dims.size(); ++axis) {
    if (dims[axis] == 1) continue;
    if (sign < 0) {
      for_each_line(data, dims, axis,
                    [&](Cx* in, Cx* out, Index n) { impl.fwd(out, in, n); });
    } else {
      // Conjugate kernel via conj-fwd-conj keeps the pair exactly adjoint.
      for_each_line(data, dims, axis, [&](Cx* in, Cx* out, Index n) {
        for (Index k = 0; k < n; ++k) in[k] = std::conj(in[k]);
        impl.fwd(out, in, n);
        for (Index k = 0; k < n; ++k) out[k] = std::conj(out[k]);
      });
    }
  }
  (sign < 0 ? g_forward : g_inverse).fetch_add(1, std::memory_order_relaxed);
}

namespace {

// dir = +1: fftshift (out[a] = in[(a - c) mod n]); dir = -1: ifftshift.
void shift_impl(Cx* data, const Dims& dims, int dir) {
  const Index n = numel(dims);
  const auto strides = strides_of(dims);
  std::vector<Cx> scratch(data, data + n);
  std::vector<Index> idx(dims.size(), 0);
  Index dst = 0;
  do {
    Index src = 0;
    for (std::size_t a = 0; a < dims.size(); ++a) {
      const Index c = center_index(dims[a]);
      const Index s = dir > 0 ? (idx[a] - c + dims[a]) % dims[a] : (idx[a] + c) % dims[a];
      src += s * strides[a];
    }
    data[dst++] = scratch[src];
  } while (next_index(idx, dims));
}

}  // namespace

void fftshift_nd(Cx* data, const Dims& dims) { shift_impl(data, dims, +1); }
void ifftshift_nd(Cx* data, const Dims& dims) { shift_impl(data, dims, -1); }

void image_to_kspace(Cx* data, const Dims& dims) {
  const double scale = 1.0 / double(numel(dims));
  ifftshift_nd(data, dims);
  transform_nd(data, dims, -1);
  fftshift_nd(data, dims);
  const Index n = numel(dims);
  for (Index i = 0; i < n; ++i) data[i] *= scale;
}

void kspace_to_image(Cx* data, const Dims& dims) {
  ifftshift_nd(data, dims);
  transform_nd(data, dims, +1);
  fftshift_nd(data, dims);
}

void image_to_kspace_unitary(Cx* data, const Dims& dims) {
  const double scale = 1.0 / std::sqrt(double(numel(dims)));
  ifftshift_nd(data, dims);
  transform_nd(data, dims, -1);
  fftshift_nd(data, dims);
  const Index n = numel(dims);
  for (Index i = 0; i < n; ++i) data[i] *= scale;
}

void kspace_to_image_unitary(Cx* data, const Dims& dims) {
  const double scale = 1.0 / std::sqrt(double(numel(dims)));
  ifftshift_nd(data, dims);
  transform_nd(data, dims, +1);
  fftshift_nd(data, dims);
  const Index n = numel(dims);
  for (Index i = 0; i < n; ++i) data[i] *= scale;
}

std::int64_t forward_transforms() { return g_forward.load(); }
std::int64_t inverse_transforms() { return g_inverse.load(); }
void reset_transform_counters() {
  g_forward.store(0);
  g_inverse.store(0);
}

}  // namespace senskit::fft
