#include "senskit/types.hpp"

#include <numeric>

namespace senskit {

Index numel(const Dims& dims) {
  Index n = 1;
  for (Index d : dims) n *= d;
  return n;
}

std::vector<Index> strides_of(const Dims& dims) {
  std::vector<Index> s(dims.size(), 1);
  for (int a = int(dims.size()) - 2; a >= 0; --a) s[a] = s[a + 1] * dims[a + 1];
  return s;
}

bool next_index(std::vector<Index>& idx, const Dims& dims) {
  for (int a = int(dims.size()) - 1; a >= 0; --a) {
    if (++idx[a] < dims[a]) return true;
    idx[a] = 0;
  }
  return false;
}

Dims centers_of(const Dims& dims) {
  Dims c(dims.size());
  for (std::size_t a = 0; a < dims.size(); ++a) c[a] = center_index(dims[a]);
  return c;
}

ComplexImageStack::ComplexImageStack(Dims d, Index q, Domain dom)
    : dims(std::move(d)), channels(q), domain(dom) {
  data = VectorXcd::Zero(channels * numel(dims));
  validate();
}

Eigen::Map<VectorXcd> ComplexImageStack::channel(Index q) {
  const Index n = voxels();
  return Eigen::Map<VectorXcd>(data.data() + q * n, n);
}

Eigen::Map<const VectorXcd> ComplexImageStack::channel(Index q) const {
  const Index n = voxels();
  return Eigen::Map<const VectorXcd>(data.data() + q * n, n);
}

void ComplexImageStack::validate() const {
  if (dims.empty()) throw DimError("stack needs at least one axis");
  for (Index d : dims)
    if (d < 1) throw DimError("stack axis extents must be >= 1");
  if (channels < 1) throw DimError("stack needs at least one channel");
  if (data.size() != channels * numel(dims))
    throw DimError("stack data length must be channels * voxels");
}

CalibrationRegion extract_calibration(const ComplexImageStack& stack, const Dims& size) {
  stack.validate();
  if (size.size() != stack.dims.size())
    throw DimError("calibration size rank does not match stack");
  for (std::size_t a = 0; a < size.size(); ++a) {
    if (size[a] < 1 || size[a] > stack.dims[a])
      throw DimError("calibration size exceeds stack extent on axis " + std::to_string(a));
  }

  const Dims parent_center = centers_of(stack.dims);
  const Dims region_center = centers_of(size);
  Dims start(size.size());
  for (std::size_t a = 0; a < size.size(); ++a) start[a] = parent_center[a] - region_center[a];

  ComplexImageStack region(size, stack.channels, Domain::kspace);
  const auto src_strides = strides_of(stack.dims);
  const auto dst_strides = strides_of(size);
  const Index n_src = stack.voxels();
  const Index n_dst = region.voxels();

  std::vector<Index> idx(size.size(), 0);
  do {
    Index src = 0, dst = 0;
    for (std::size_t a = 0; a < size.size(); ++a) {
      src += (start[a] + idx[a]) * src_strides[a];
      dst += idx[a] * dst_strides[a];
    }
    for (Index q = 0; q < stack.channels; ++q)
      region.data[q * n_dst + dst] = stack.data[q * n_src + src];
  } while (next_index(idx, size));

  return CalibrationRegion{std::move(region), region_center};
}

}  // namespace senskit
