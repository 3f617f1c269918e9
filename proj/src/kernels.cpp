#include "senskit/kernels.hpp"

#include <vector>

namespace senskit {

KernelSupport make_support(KernelShape shape, int tau, int ndim) {
  if (tau < 0) throw DimError("kernel radius must be >= 0");
  if (ndim < 1) throw DimError("kernel dimension must be >= 1");

  const Index side = 2 * Index(tau) + 1;
  std::vector<int> kept;
  kept.reserve(std::size_t(side) * ndim);

  Dims box(ndim, side);
  std::vector<Index> idx(ndim, 0);
  do {
    long r2 = 0;
    for (int a = 0; a < ndim; ++a) {
      const long v = long(idx[a]) - tau;
      r2 += v * v;
    }
    if (shape == KernelShape::ellipsoid && r2 > long(tau) * tau) continue;
    for (int a = 0; a < ndim; ++a) kept.push_back(int(idx[a]) - tau);
  } while (next_index(idx, box));

  KernelSupport support;
  support.shape = shape;
  support.tau = tau;
  const Index count = Index(kept.size()) / ndim;
  support.offsets.resize(count, ndim);
  for (Index i = 0; i < count; ++i)
    for (int a = 0; a < ndim; ++a) support.offsets(i, a) = kept[std::size_t(i) * ndim + a];
  return support;
}

}  // namespace senskit
