#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "senskit/calibration.hpp"
#include "senskit/fft.hpp"
#include "senskit/nullspace.hpp"
#include "senskit/synthetic.hpp"

using namespace senskit;

TEST_CASE("scene determinism") {
  const SyntheticScene a = make_scene(4, {32, 32}, 2, 7, PhantomKind::disk);
  const SyntheticScene b = make_scene(4, {32, 32}, 2, 7, PhantomKind::disk);
  CHECK((a.true_maps.data - b.true_maps.data).norm() == 0.0);
  CHECK((a.phantom == b.phantom).all());
  CHECK(a.support_mask_true == b.support_mask_true);
}

TEST_CASE("degenerate single-channel DC scene is a constant map") {
  const SyntheticScene scene = make_scene(1, {16, 16}, 0, 5, PhantomKind::disk);
  const Cx first = scene.true_maps.data[0];
  for (Index j = 0; j < scene.true_maps.voxels(); ++j)
    CHECK(std::abs(scene.true_maps.data[j] - first) < 1e-12);
  CHECK(std::abs(first) == doctest::Approx(1.0));
}

TEST_CASE("maps are exactly bandlimited to the generator support") {
  const SyntheticScene scene = make_scene(4, {64, 64}, 2, 7, PhantomKind::disk);
  for (Index q = 0; q < 4; ++q) {
    VectorXcd spec(scene.true_maps.voxels());
    spec = scene.true_maps.channel(q);
    fft::image_to_kspace(spec.data(), scene.dims);
    const double scale = spec.cwiseAbs().maxCoeff();
    for (Index r = 0; r < 64; ++r)
      for (Index c = 0; c < 64; ++c)
        if (std::abs(r - 32) > 2 || std::abs(c - 32) > 2)
          CHECK(std::abs(spec[r * 64 + c]) < 1e-13 * scale);
  }
}

TEST_CASE("phantom margin and in-support map magnitudes") {
  for (PhantomKind kind : {PhantomKind::disk, PhantomKind::rectangles}) {
    const SyntheticScene scene = make_scene(3, {40, 40}, 1, 9, kind);
    Index in_support = 0;
    for (Index j = 0; j < Index(scene.phantom.size()); ++j) {
      if (scene.phantom[j] == 0.0) continue;
      ++in_support;
      const double x0 = voxel_coord(j / 40, 40), x1 = voxel_coord(j % 40, 40);
      CHECK(std::abs(x0) <= 0.4);
      CHECK(std::abs(x1) <= 0.4);
      double sos = 0;
      for (Index q = 0; q < 3; ++q)
        sos += std::norm(scene.true_maps.data[q * 1600 + j]);
      CHECK(sos > 0.2);
    }
    CHECK(in_support > 0);
    CHECK(in_support < Index(scene.phantom.size()));  // the complement is nonempty
  }
}

TEST_CASE("forward model") {
  SUBCASE("unit map: k-space equals the phantom spectrum") {
    SyntheticScene scene = make_scene(1, {24, 24}, 0, 3, PhantomKind::rectangles);
    scene.true_maps.data.setOnes();
    const ComplexImageStack kspace = forward_kspace(scene, 0.0, 0);

    VectorXcd want(scene.phantom.size());
    for (Index j = 0; j < want.size(); ++j) want[j] = Cx(scene.phantom[j], 0.0);
    fft::image_to_kspace_unitary(want.data(), scene.dims);
    CHECK((kspace.data - want).cwiseAbs().maxCoeff() < 1e-12 * want.cwiseAbs().maxCoeff());
  }

  SUBCASE("Parseval under the unitary convention") {
    const SyntheticScene scene = make_scene(3, {32, 32}, 2, 11, PhantomKind::disk);
    const ComplexImageStack kspace = forward_kspace(scene, 0.0, 0);
    double image_energy = 0;
    for (Index q = 0; q < 3; ++q)
      for (Index j = 0; j < 1024; ++j)
        image_energy += std::norm(scene.true_maps.data[q * 1024 + j] * scene.phantom[j]);
    CHECK(kspace.data.squaredNorm() == doctest::Approx(image_energy).epsilon(1e-12));
  }

  SUBCASE("noise is seed-deterministic") {
    const SyntheticScene scene = make_scene(2, {16, 16}, 1, 13, PhantomKind::disk);
    const ComplexImageStack a = forward_kspace(scene, 0.05, 99);
    const ComplexImageStack b = forward_kspace(scene, 0.05, 99);
    const ComplexImageStack c = forward_kspace(scene, 0.05, 100);
    CHECK((a.data - b.data).norm() == 0.0);
    CHECK((a.data - c.data).norm() > 0.0);
  }
}

TEST_CASE("coil-compression relation adds a nullspace vector") {
  const SyntheticScene scene = make_scene(3, {24, 24}, 1, 17, PhantomKind::disk);
  const ComplexImageStack kspace = forward_kspace(scene, 0.0, 0);

  // Append channel c_4 = sum w_q c_q; its data obeys the same combination.
  const VectorXcd w = test::random_complex(3, 1, 18);
  ComplexImageStack extended(scene.dims, 4, Domain::kspace);
  const Index n = kspace.voxels();
  for (Index q = 0; q < 3; ++q) extended.channel(q) = kspace.channel(q);
  extended.channel(3).setZero();
  for (Index q = 0; q < 3; ++q) extended.channel(3) += w[q] * kspace.channel(q);

  const KernelSupport support = make_support(KernelShape::rect, 1, 2);
  const CalibMatrix c =
      build_calib_matrix(extract_calibration(extended, {20, 20}), support);

  VectorXcd h = VectorXcd::Zero(4 * support.size());
  const Index center = support.size() / 2;
  for (Index q = 0; q < 3; ++q) h[q * support.size() + center] = w[q];
  h[3 * support.size() + center] = -1.0;
  CHECK((c.entries * h).norm() < 1e-10 * c.entries.norm() * h.norm());
  (void)n;
}

TEST_CASE("cross-relation filters") {
  SUBCASE("constant maps give the two-entry filter") {
    SyntheticScene scene = make_scene(2, {16, 16}, 0, 21, PhantomKind::disk);
    scene.gen_coeffs(0, 0) = Cx(1, 0);
    scene.gen_coeffs(0, 1) = Cx(0, 1);
    // Re-evaluate maps for consistency with the edited coefficients.
    scene.true_maps.channel(0).setConstant(Cx(1, 0));
    scene.true_maps.channel(1).setConstant(Cx(0, 1));

    const KernelSupport support = make_support(KernelShape::rect, 1, 2);
    const MatrixXcd filters = cross_relation_filters(scene, support, {{0, 1}});
    const Index center = support.size() / 2;
    CHECK(filters(center, 0) == Cx(0, -1));
    CHECK(filters(support.size() + center, 0) == Cx(1, 0));
    CHECK(filters.col(0).cwiseAbs().sum() == doctest::Approx(2.0));

    const ComplexImageStack kspace = forward_kspace(scene, 0.0, 0);
    const CalibMatrix c = build_calib_matrix(extract_calibration(kspace, {12, 12}), support);
    CHECK((c.entries * filters.col(0)).norm() <
          1e-10 * c.entries.norm() * filters.col(0).norm());
  }

  SUBCASE("pair swap negates the filter") {
    const SyntheticScene scene = make_scene(3, {16, 16}, 1, 23, PhantomKind::disk);
    const KernelSupport support = make_support(KernelShape::rect, 2, 2);
    const MatrixXcd f = cross_relation_filters(scene, support, {{0, 2}, {2, 0}});
    CHECK((f.col(0) + f.col(1)).norm() == 0.0);
  }

  SUBCASE("all pairs have tiny Gram residual") {
    const SyntheticScene scene = make_scene(3, {20, 20}, 1, 29, PhantomKind::disk);
    const ComplexImageStack kspace = forward_kspace(scene, 0.0, 0);
    const KernelSupport support = make_support(KernelShape::rect, 2, 2);
    const GramMatrix g =
        gram_explicit(build_calib_matrix(extract_calibration(kspace, {16, 16}), support));
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(g.entries);
    const double sigma1_sq = es.eigenvalues().maxCoeff();
    const MatrixXcd f = cross_relation_filters(scene, support, {{0, 1}, {0, 2}, {1, 2}});
    for (Index k = 0; k < f.cols(); ++k) {
      const VectorXcd h = f.col(k).normalized();
      CHECK(std::real(h.dot(g.entries * h)) < 1e-16 * sigma1_sq);
    }
  }

  SUBCASE("support too small for the generator") {
    const SyntheticScene scene = make_scene(2, {16, 16}, 2, 31, PhantomKind::disk);
    CHECK_THROWS_AS(
        cross_relation_filters(scene, make_support(KernelShape::rect, 1, 2), {{0, 1}}),
        DimError);
  }
}

TEST_CASE("every scene yields at least Q(Q-1)/2 annihilators") {
  const SyntheticScene scene = make_scene(3, {24, 24}, 1, 37, PhantomKind::disk);
  const ComplexImageStack kspace = forward_kspace(scene, 0.0, 0);
  const NullspaceBasis basis = extract_nullspace(
      gram_explicit(build_calib_matrix(extract_calibration(kspace, {16, 16}),
                                       make_support(KernelShape::rect, 2, 2))),
      0.05);
  CHECK(basis.rank() >= 3);
}
