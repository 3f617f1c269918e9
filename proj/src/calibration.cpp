#include "senskit/calibration.hpp"

#include <vector>

#include "senskit/fft.hpp"
#include "senskit/parallel.hpp"

namespace senskit {

namespace {

void check_calib(const CalibrationRegion& calib, const KernelSupport& support) {
  calib.grid.validate();
  if (Index(calib.grid.dims.size()) != support.ndim())
    throw DimError("support dimension does not match calibration region");
  for (Index d : calib.grid.dims)
    if (d <= 2 * support.tau)
      throw DimError("calibration region too small for kernel radius " +
                     std::to_string(support.tau));
}

Index next_pow2(Index n) {
  Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

CalibMatrix build_calib_matrix(const CalibrationRegion& calib, const KernelSupport& support) {
  check_calib(calib, support);
  const Index q_count = calib.grid.channels;
  const Index lam = support.size();
  const Index nd = support.ndim();
  const Dims& ext = calib.grid.dims;
  const auto strides = strides_of(ext);
  const Index n_vox = calib.grid.voxels();

  Dims shift_ext(ext.size());
  Index p_rows = 1;
  for (std::size_t a = 0; a < ext.size(); ++a) {
    shift_ext[a] = ext[a] - 2 * support.tau;
    p_rows *= shift_ext[a];
  }

  CalibMatrix out;
  out.valid_shifts = p_rows;
  out.channels = q_count;
  out.support_size = lam;
  out.entries.resize(p_rows, q_count * lam);

  std::vector<Index> idx(ext.size(), 0);
  Index row = 0;
  do {
    // Shift position in array coordinates; offsets are subtracted from it.
    Index base = 0;
    for (Index a = 0; a < nd; ++a) base += (idx[a] + support.tau) * strides[a];
    for (Index i = 0; i < lam; ++i) {
      Index at = base;
      for (Index a = 0; a < nd; ++a) at -= support.offsets(i, a) * strides[a];
      for (Index q = 0; q < q_count; ++q)
        out.entries(row, q * lam + i) = calib.grid.data[q * n_vox + at];
    }
    ++row;
  } while (next_index(idx, shift_ext));

  return out;
}

GramMatrix gram_explicit(const CalibMatrix& c) {
  GramMatrix g;
  g.method = GramMethod::explicit_product;
  g.channels = c.channels;
  g.support_size = c.support_size;
  g.entries = c.entries.adjoint() * c.entries;
  g.entries = ((g.entries + g.entries.adjoint()) / 2.0).eval();
  return g;
}

GramMatrix gram_fft(const CalibrationRegion& calib, const KernelSupport& support) {
  check_calib(calib, support);
  const Index q_count = calib.grid.channels;
  const Index lam = support.size();
  const Index nd = support.ndim();
  const Dims& ext = calib.grid.dims;
  const Index n_vox = calib.grid.voxels();

  // Padded so that correlation lags up to 2*tau per axis stay linear.
  Dims pad(ext.size());
  for (std::size_t a = 0; a < ext.size(); ++a) pad[a] = next_pow2(ext[a] + 2 * support.tau);
  const Index n_pad = numel(pad);
  const auto pad_strides = strides_of(pad);
  const auto ext_strides = strides_of(ext);

  // Forward transforms, one per channel.
  std::vector<VectorXcd> spectra(static_cast<std::size_t>(q_count));
  for (Index q = 0; q < q_count; ++q) {
    VectorXcd vol = VectorXcd::Zero(n_pad);
    std::vector<Index> idx(ext.size(), 0);
    Index src = 0;
    do {
      Index dst = 0;
      for (std::size_t a = 0; a < ext.size(); ++a) dst += idx[a] * pad_strides[a];
      vol[dst] = calib.grid.data[q * n_vox + src];
      ++src;
    } while (next_index(idx, ext));
    fft::transform_nd(vol.data(), pad, -1);
    spectra[std::size_t(q)] = std::move(vol);
  }

  // Lag table: entry (s,t) of block (p,q) reads the (p,q) correlation at
  // n_s - n_t, wrapped into the padded volume.
  std::vector<Index> lag_at(std::size_t(lam) * lam);
  for (Index s = 0; s < lam; ++s)
    for (Index t = 0; t < lam; ++t) {
      Index at = 0;
      for (Index a = 0; a < nd; ++a) {
        const Index lag = support.offsets(s, a) - support.offsets(t, a);
        at += ((lag % pad[a]) + pad[a]) % pad[a] * pad_strides[a];
      }
      lag_at[std::size_t(s * lam + t)] = at;
    }

  GramMatrix g;
  g.method = GramMethod::fft;
  g.channels = q_count;
  g.support_size = lam;
  g.entries.resize(q_count * lam, q_count * lam);

  // Channel pairs are independent; spectra are shared read-only.
  parallel_for(0, q_count * q_count, [&](Index pair) {
    const Index p = pair / q_count;
    const Index q = pair % q_count;
    VectorXcd corr = spectra[std::size_t(p)].conjugate().cwiseProduct(spectra[std::size_t(q)]);
    fft::transform_nd(corr.data(), pad, +1);
    corr /= double(n_pad);
    for (Index s = 0; s < lam; ++s)
      for (Index t = 0; t < lam; ++t)
        g.entries(p * lam + s, q * lam + t) = corr[lag_at[std::size_t(s * lam + t)]];
  });

  g.entries = ((g.entries + g.entries.adjoint()) / 2.0).eval();
  return g;
}

}  // namespace senskit
