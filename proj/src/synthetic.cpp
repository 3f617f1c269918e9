#include "senskit/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "senskit/fft.hpp"

namespace senskit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Phantoms live inside |x| <= 0.4 per axis, keeping a 10% FOV margin.
constexpr double kMargin = 0.4;

double disk_value(const std::vector<double>& x, std::uint64_t /*seed*/) {
  double r2 = 0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    const double d = x[a] - (a == 0 ? 0.03 : -0.02);
    r2 += d * d;
  }
  if (r2 > 0.27 * 0.27) return 0.0;
  double v = 1.0;
  for (std::size_t a = 0; a < x.size(); ++a)
    v *= 1.0 + 0.18 * std::cos(kTwoPi * x[a] + 0.7 * double(a + 1));
  return v;  // product of factors in [0.82, 1.18]: strictly positive
}

struct Box {
  std::vector<double> lo, hi;
  double value;
};

std::vector<Box> make_boxes(std::size_t nd, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  std::vector<Box> boxes;
  const double spans[3][2] = {{-0.32, 0.32}, {-0.25, 0.05}, {0.0, 0.3}};
  const double values[3] = {1.0, 0.6, 1.3};
  for (int b = 0; b < 3; ++b) {
    Box box;
    box.value = values[b];
    for (std::size_t a = 0; a < nd; ++a) {
      double lo = spans[b][0] + jitter(rng);
      double hi = spans[b][1] + jitter(rng);
      if (lo > hi) std::swap(lo, hi);
      box.lo.push_back(std::max(lo, -kMargin));
      box.hi.push_back(std::min(hi, kMargin));
    }
    boxes.push_back(std::move(box));
  }
  return boxes;
}

double boxes_value(const std::vector<double>& x, const std::vector<Box>& boxes) {
  double v = 0;
  for (const auto& box : boxes) {
    bool inside = true;
    for (std::size_t a = 0; a < x.size(); ++a)
      inside = inside && x[a] >= box.lo[a] && x[a] <= box.hi[a];
    if (inside) v = std::max(v, box.value);
  }
  return v;
}

}  // namespace

SyntheticScene make_scene(Index channels, const Dims& dims, int tau_gen, std::uint64_t seed,
                          PhantomKind kind) {
  if (channels < 1) throw DimError("scene needs at least one channel");
  for (Index d : dims)
    if (d < 2 * Index(tau_gen) + 1)
      throw DimError("grid too small for generator bandwidth tau_gen");

  SyntheticScene scene;
  scene.dims = dims;
  scene.channels = channels;
  scene.tau_gen = tau_gen;
  scene.seed = seed;
  scene.gen_support = make_support(KernelShape::rect, tau_gen, int(dims.size()));

  const Index lam = scene.gen_support.size();
  const Index n = numel(dims);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);

  // Coefficients: a unit-magnitude DC term per channel plus a gently decaying
  // random remainder whose total magnitude stays below 1/2, so every map
  // magnitude lies in [0.5, 1.5].
  scene.gen_coeffs.resize(lam, channels);
  for (Index q = 0; q < channels; ++q) {
    double off_dc_abs = 0;
    Index dc_row = -1;
    for (Index i = 0; i < lam; ++i) {
      double r2 = 0;
      for (Index a = 0; a < scene.gen_support.ndim(); ++a)
        r2 += double(scene.gen_support.offsets(i, a)) * scene.gen_support.offsets(i, a);
      if (r2 == 0) {
        dc_row = i;
        scene.gen_coeffs(i, q) = std::polar(1.0, phase(rng));
        continue;
      }
      const double decay = std::exp(-r2 / (2.0 * std::max(1.0, double(tau_gen))));
      scene.gen_coeffs(i, q) = Cx(gauss(rng), gauss(rng)) * decay;
      off_dc_abs += std::abs(scene.gen_coeffs(i, q));
    }
    if (off_dc_abs > 0.5) {
      const double shrink = 0.5 / off_dc_abs;
      for (Index i = 0; i < lam; ++i)
        if (i != dc_row) scene.gen_coeffs(i, q) *= shrink;
    }
  }

  // Evaluate maps on the grid from the k-space construction: exactly
  // bandlimited by definition.
  scene.true_maps = ComplexImageStack(dims, channels, Domain::image);
  const auto strides = strides_of(dims);
  for (Index q = 0; q < channels; ++q) {
    VectorXcd vol = VectorXcd::Zero(n);
    for (Index i = 0; i < lam; ++i) {
      Index at = 0;
      for (Index a = 0; a < scene.gen_support.ndim(); ++a) {
        const Index v = scene.gen_support.offsets(i, a);
        at += (((v % dims[a]) + dims[a]) % dims[a]) * strides[a];
      }
      vol[at] += scene.gen_coeffs(i, q);
    }
    fft::transform_nd(vol.data(), dims, +1);
    fft::fftshift_nd(vol.data(), dims);
    scene.true_maps.channel(q) = vol;
  }

  scene.phantom.resize(n);
  scene.support_mask_true.resize(std::size_t(n));
  const auto boxes = kind == PhantomKind::rectangles ? make_boxes(dims.size(), seed)
                                                     : std::vector<Box>{};
  std::vector<Index> idx(dims.size(), 0);
  std::vector<double> x(dims.size());
  Index j = 0;
  do {
    for (std::size_t a = 0; a < dims.size(); ++a) x[a] = voxel_coord(idx[a], dims[a]);
    const double v =
        kind == PhantomKind::disk ? disk_value(x, seed) : boxes_value(x, boxes);
    scene.phantom[j] = v;
    scene.support_mask_true[std::size_t(j)] = v != 0.0 ? 1 : 0;
    ++j;
  } while (next_index(idx, dims));

  return scene;
}

ComplexImageStack forward_kspace(const SyntheticScene& scene, double noise_sigma,
                                 std::uint64_t seed) {
  const Index n = numel(scene.dims);
  ComplexImageStack out(scene.dims, scene.channels, Domain::kspace);
  for (Index q = 0; q < scene.channels; ++q) {
    VectorXcd vol(n);
    for (Index j = 0; j < n; ++j) vol[j] = scene.true_maps.data[q * n + j] * scene.phantom[j];
    fft::image_to_kspace_unitary(vol.data(), scene.dims);
    out.channel(q) = vol;
  }
  if (noise_sigma > 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, noise_sigma);
    for (Index i = 0; i < out.data.size(); ++i) out.data[i] += Cx(gauss(rng), gauss(rng));
  }
  return out;
}

MatrixXcd cross_relation_filters(const SyntheticScene& scene, const KernelSupport& support,
                                 const std::vector<std::pair<Index, Index>>& pairs) {
  const Index lam = support.size();
  const Index gen_lam = scene.gen_support.size();

  // Locate each generator offset inside the target support.
  std::vector<Index> where(std::size_t(gen_lam), -1);
  for (Index g = 0; g < gen_lam; ++g) {
    for (Index i = 0; i < lam; ++i) {
      bool same = support.ndim() == scene.gen_support.ndim();
      for (Index a = 0; same && a < support.ndim(); ++a)
        same = support.offsets(i, a) == scene.gen_support.offsets(g, a);
      if (same) {
        where[std::size_t(g)] = i;
        break;
      }
    }
    if (where[std::size_t(g)] < 0)
      throw DimError("filter support does not contain the generator support");
  }

  MatrixXcd filters = MatrixXcd::Zero(scene.channels * lam, Index(pairs.size()));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    if (i == j || i < 0 || j < 0 || i >= scene.channels || j >= scene.channels)
      throw DimError("cross-relation pair out of range");
    for (Index g = 0; g < gen_lam; ++g) {
      filters(i * lam + where[std::size_t(g)], Index(k)) = -scene.gen_coeffs(g, j);
      filters(j * lam + where[std::size_t(g)], Index(k)) = scene.gen_coeffs(g, i);
    }
  }
  return filters;
}

}  // namespace senskit
