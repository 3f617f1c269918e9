#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "senskit/kernels.hpp"
#include "senskit/types.hpp"

namespace senskit {

enum class PhantomKind { disk, rectangles };

// Ground-truth scene: coil maps built from seeded Fourier coefficients on
// rect(tau_gen) — so they are *exactly* bandlimited — and a compactly
// supported phantom whose support keeps a >= 10% FOV margin per side. Each
// per-channel map magnitude stays in [0.5, 1.5], so the map vector never
// vanishes.
struct SyntheticScene {
  ComplexImageStack true_maps;  // image domain, Q channels
  ArrayXd phantom;              // rho(x), real, zero outside the support
  std::vector<std::uint8_t> support_mask_true;
  Dims dims;
  Index channels = 0;
  int tau_gen = 0;
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;  // recorded by forward_kspace callers
  KernelSupport gen_support;
  MatrixXcd gen_coeffs;  // |Lambda_gen| x Q generator coefficients
};

SyntheticScene make_scene(Index channels, const Dims& dims, int tau_gen, std::uint64_t seed,
                          PhantomKind kind);

// Measurement model: unitary centered transform of each c_q * rho on the
// full Nyquist grid, plus i.i.d. complex Gaussian noise with std-dev
// noise_sigma per real/imag component.
ComplexImageStack forward_kspace(const SyntheticScene& scene, double noise_sigma,
                                 std::uint64_t seed);

// Analytic annihilators from the cross-relation: for each requested (i, j)
// channel pair, a packed filter with h[n,i] = -c~_j[n], h[n,j] = +c~_i[n]
// over the generator support. One column per pair.
MatrixXcd cross_relation_filters(const SyntheticScene& scene, const KernelSupport& support,
                                 const std::vector<std::pair<Index, Index>>& pairs);

}  // namespace senskit
