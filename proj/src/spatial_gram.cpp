#include "senskit/spatial_gram.hpp"

#include <vector>

#include "senskit/fft.hpp"
#include "senskit/parallel.hpp"

namespace senskit {

namespace {

void check_grid(const KernelSupport& support, const Dims& dims) {
  if (Index(dims.size()) != support.ndim())
    throw DimError("voxel grid rank does not match support dimension");
  for (Index d : dims)
    if (d < 1) throw DimError("voxel grid extents must be >= 1");
}

// Raw-layout slot of integer frequency n (wrapped mod the grid); wrapping
// keeps the grid evaluation exact even when lags exceed the grid.
Index wrap_slot(const Eigen::MatrixXi& offsets, Index row, int sign, const Dims& dims,
                const std::vector<Index>& strides) {
  Index at = 0;
  for (Index a = 0; a < offsets.cols(); ++a) {
    const Index v = sign * Index(offsets(row, a));
    at += (((v % dims[a]) + dims[a]) % dims[a]) * strides[a];
  }
  return at;
}

}  // namespace

FilterField filter_field_naive(const NullspaceBasis& basis, const KernelSupport& support,
                               const Dims& dims, std::size_t max_bytes) {
  check_grid(support, dims);
  const Index r_count = basis.rank();
  const Index q_count = basis.channels;
  const Index lam = support.size();
  const Index n = numel(dims);

  const std::size_t need = std::size_t(r_count) * q_count * n * sizeof(Cx);
  if (need > max_bytes)
    throw std::length_error("filter field would need " + std::to_string(need) +
                            " bytes (cap " + std::to_string(max_bytes) + ")");

  FilterField field;
  field.dims = dims;
  field.channels = q_count;
  field.filters = r_count;
  field.values.resize(r_count * q_count * n);

  const auto strides = strides_of(dims);
  parallel_for(0, r_count * q_count, [&](Index plane) {
    const Index r = plane / q_count;
    const Index q = plane % q_count;
    VectorXcd vol = VectorXcd::Zero(n);
    for (Index i = 0; i < lam; ++i)
      vol[wrap_slot(support.offsets, i, +1, dims, strides)] += basis.filters(q * lam + i, r);
    fft::transform_nd(vol.data(), dims, +1);
    fft::fftshift_nd(vol.data(), dims);
    field.values.segment(plane * n, n) = vol;
  });
  return field;
}

GramField gram_field_naive(const FilterField& field) {
  const Index q_count = field.channels;
  const Index n = field.voxels();
  GramField out;
  out.dims = field.dims;
  out.channels = q_count;
  out.values = VectorXcd::Zero(n * q_count * q_count);

  parallel_for(0, n, [&](Index j) {
    auto g = out.at(j);
    for (Index r = 0; r < field.filters; ++r) {
      for (Index q = 0; q < q_count; ++q) {
        const Cx hq = field.plane(r, q)[j];
        for (Index p = 0; p < q_count; ++p)
          g(p, q) += std::conj(field.plane(r, p)[j]) * hq;
      }
    }
  });
  return out;
}

AggregateW aggregate_w(const NullspaceBasis& basis) {
  if (basis.rank() < 1) throw NullspaceEmptyError("aggregate requires at least one filter");
  AggregateW w;
  w.channels = basis.channels;
  w.support_size = basis.support_size;
  w.entries = basis.filters * basis.filters.adjoint();
  return w;
}

GramField gram_field_fast(const AggregateW& w, const KernelSupport& support, const Dims& dims) {
  check_grid(support, dims);
  const Index q_count = w.channels;
  const Index lam = support.size();
  const Index n = numel(dims);
  const auto strides = strides_of(dims);

  GramField out;
  out.dims = dims;
  out.channels = q_count;
  out.values.resize(n * q_count * q_count);

  // Lag slot per (s,t): frequency m_t - n_s wrapped into the grid.
  std::vector<Index> lag_slot(std::size_t(lam) * lam);
  for (Index s = 0; s < lam; ++s)
    for (Index t = 0; t < lam; ++t) {
      Index at = 0;
      for (Index a = 0; a < support.ndim(); ++a) {
        const Index v = Index(support.offsets(t, a)) - Index(support.offsets(s, a));
        at += (((v % dims[a]) + dims[a]) % dims[a]) * strides[a];
      }
      lag_slot[std::size_t(s * lam + t)] = at;
    }

  // Upper-triangular (p <= q) channel pairs; (q,p) is the conjugate mirror.
  std::vector<std::pair<Index, Index>> pairs;
  for (Index p = 0; p < q_count; ++p)
    for (Index q = p; q < q_count; ++q) pairs.emplace_back(p, q);

  parallel_for(0, Index(pairs.size()), [&](Index k) {
    const auto [p, q] = pairs[std::size_t(k)];
    VectorXcd kernel = VectorXcd::Zero(n);
    for (Index s = 0; s < lam; ++s)
      for (Index t = 0; t < lam; ++t)
        kernel[lag_slot[std::size_t(s * lam + t)]] += w.entries(q * lam + s, p * lam + t);
    fft::transform_nd(kernel.data(), dims, -1);
    fft::fftshift_nd(kernel.data(), dims);
    for (Index j = 0; j < n; ++j) {
      out.values[j * q_count * q_count + q * q_count + p] = kernel[j];
      if (p != q)
        out.values[j * q_count * q_count + p * q_count + q] = std::conj(kernel[j]);
    }
  });

  // Diagonal blocks pick up roundoff-sized imaginary parts; drop them.
  parallel_for(0, n, [&](Index j) {
    for (Index q = 0; q < q_count; ++q) {
      Cx& d = out.values[j * q_count * q_count + q * q_count + q];
      d = Cx(d.real(), 0.0);
    }
  });
  return out;
}

GramField to_espirit_field(const GramField& g, Index support_size) {
  GramField b = g;
  espirit_inplace(b, support_size);
  return b;
}

void espirit_inplace(GramField& g, Index support_size) {
  const double inv = 1.0 / double(support_size);
  const Index q_count = g.channels;
  parallel_for(0, g.voxels(), [&](Index j) {
    auto m = g.at(j);
    m *= -inv;
    for (Index q = 0; q < q_count; ++q) m(q, q) += 1.0;
  });
}

}  // namespace senskit
