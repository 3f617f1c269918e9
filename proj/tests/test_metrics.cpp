#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "senskit/fft.hpp"
#include "senskit/metrics.hpp"
#include "senskit/synthetic.hpp"

using namespace senskit;

namespace {

SensitivityResult result_with_maps(ComplexImageStack maps) {
  SensitivityResult r;
  r.maps = std::move(maps);
  return r;
}

}  // namespace

TEST_CASE("projection residual") {
  SUBCASE("true maps span noiseless data exactly") {
    const SyntheticScene scene = make_scene(4, {32, 32}, 2, 91, PhantomKind::disk);
    const ComplexImageStack kspace = forward_kspace(scene, 0.0, 0);
    const ResidualReport report =
        projection_residual(kspace, result_with_maps(scene.true_maps));
    CHECK(report.value < 1e-10);
  }

  SUBCASE("orthogonal maps leave the full residual") {
    const SyntheticScene scene = make_scene(1, {16, 16}, 1, 92, PhantomKind::disk);
    ComplexImageStack data(scene.dims, 2, Domain::kspace);
    const ComplexImageStack single = forward_kspace(scene, 0.0, 0);
    data.channel(0) = single.channel(0);  // all data on channel 1
    data.channel(1).setZero();
    ComplexImageStack maps(scene.dims, 2, Domain::image);
    maps.channel(0).setZero();
    maps.channel(1).setOnes();  // maps on channel 2
    const ResidualReport report = projection_residual(data, result_with_maps(maps));
    CHECK(report.value == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("invariant to data scaling and per-voxel map phase") {
    const ComplexImageStack data = test::random_stack({12, 12}, 3, Domain::kspace, 93);
    const ComplexImageStack maps = test::random_stack({12, 12}, 3, Domain::image, 94);
    const double base = projection_residual(data, result_with_maps(maps)).value;

    ComplexImageStack scaled_data = data;
    scaled_data.data *= Cx(-1.7, 0.4);
    ComplexImageStack phased_maps = maps;
    std::mt19937_64 rng(95);
    std::uniform_real_distribution<double> ph(0.0, 6.28);
    const Index n = maps.voxels();
    for (Index j = 0; j < n; ++j) {
      const Cx u = std::polar(1.0, ph(rng));
      for (Index q = 0; q < 3; ++q) phased_maps.data[q * n + j] *= u;
    }
    const double perturbed =
        projection_residual(scaled_data, result_with_maps(phased_maps)).value;
    CHECK(std::abs(perturbed - base) < 1e-12);
  }

  SUBCASE("dimension mismatch") {
    const ComplexImageStack data = test::random_stack({8, 8}, 2, Domain::kspace, 96);
    const ComplexImageStack maps = test::random_stack({8, 10}, 2, Domain::image, 97);
    CHECK_THROWS_AS(projection_residual(data, result_with_maps(maps)), DimError);
  }
}

TEST_CASE("gauge-aligned comparison") {
  const ComplexImageStack a = test::random_stack({10, 10}, 2, Domain::image, 98);
  ComplexImageStack b = a;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ph(0.0, 6.28);
  const Index n = a.voxels();
  for (Index j = 0; j < n; ++j) {
    const Cx u = std::polar(1.0, ph(rng));
    for (Index q = 0; q < 2; ++q) b.data[q * n + j] *= u;
  }
  CHECK(gauge_aligned_max_difference(a, b) < 1e-12);

  b.data[3] += Cx(0.5, 0);
  CHECK(gauge_aligned_max_difference(a, b) > 1e-3);
}

TEST_CASE("map vector angle") {
  VectorXcd a(2), b(2);
  a << Cx(1, 0), Cx(0, 0);
  b << Cx(0, 1), Cx(0, 0);  // same direction, different phase
  CHECK(map_vector_angle(a, b) < 1e-12);
  b << Cx(0, 0), Cx(1, 0);
  CHECK(map_vector_angle(a, b) == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("dice coefficient") {
  CHECK(dice_coefficient({1, 1, 0, 0}, {1, 1, 0, 0}) == 1.0);
  CHECK(dice_coefficient({1, 1, 0, 0}, {0, 0, 1, 1}) == 0.0);
  CHECK(dice_coefficient({1, 0}, {1, 1}) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(dice_coefficient({1}, {1, 0}), DimError);
}
