#include <doctest.h>

#include "helpers.hpp"
#include "senskit/calibration.hpp"
#include "senskit/nullspace.hpp"
#include "senskit/synthetic.hpp"

using namespace senskit;

namespace {

GramMatrix diag_gram(const VectorXd& values) {
  GramMatrix g;
  g.entries = values.cast<Cx>().asDiagonal();
  g.channels = 1;
  g.support_size = values.size();
  return g;
}

}  // namespace

TEST_CASE("diagonal gram selects the small direction") {
  VectorXd d(3);
  d << 4.0, 1.0, 1e-6;
  const NullspaceBasis basis = extract_nullspace(diag_gram(d), 0.05);
  CHECK(basis.rank() == 1);
  CHECK(basis.spectrum[0] == doctest::Approx(2.0));
  CHECK(basis.spectrum[1] == doctest::Approx(1.0));
  CHECK(basis.spectrum[2] == doctest::Approx(1e-3));
  // The surviving filter is the third basis vector (up to phase).
  CHECK(std::abs(basis.filters(2, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(basis.filters(0, 0)) < 1e-12);
  CHECK(std::abs(basis.filters(1, 0)) < 1e-12);
}

TEST_CASE("identity gram has no nullspace") {
  CHECK_THROWS_AS(extract_nullspace(diag_gram(VectorXd::Ones(4)), 0.05), NullspaceEmptyError);
}

TEST_CASE("threshold ratio must be in (0,1)") {
  CHECK_THROWS_AS(extract_nullspace(diag_gram(VectorXd::Ones(2)), 0.0), DimError);
  CHECK_THROWS_AS(extract_nullspace(diag_gram(VectorXd::Ones(2)), 1.0), DimError);
}

TEST_CASE("filters of a rank-deficient calibration annihilate") {
  auto stack = test::random_stack({12, 12}, 2, Domain::kspace, 21);
  stack.channel(1) = Cx(0, 1) * stack.channel(0);
  const CalibrationRegion calib = extract_calibration(stack, stack.dims);
  const KernelSupport support = make_support(KernelShape::rect, 1, 2);
  const CalibMatrix c = build_calib_matrix(calib, support);
  const NullspaceBasis basis = extract_nullspace(gram_explicit(c), 0.05);

  CHECK(basis.rank() >= 1);
  for (Index r = 0; r < basis.rank(); ++r)
    CHECK((c.entries * basis.filters.col(r)).norm() / basis.spectrum[0] < 0.05);

  SUBCASE("orthonormal to 1e-10") {
    const MatrixXcd gram_f = basis.filters.adjoint() * basis.filters;
    const MatrixXcd eye = MatrixXcd::Identity(basis.rank(), basis.rank());
    CHECK((gram_f - eye).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("per-filter residual bound") {
    const GramMatrix g = gram_explicit(c);
    const double bound =
        basis.threshold_ratio * basis.spectrum[0] * basis.threshold_ratio * basis.spectrum[0];
    for (Index r = 0; r < basis.rank(); ++r) {
      const double quad = std::real(basis.filters.col(r).dot(g.entries * basis.filters.col(r)));
      CHECK(quad <= bound * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("spectrum report") {
  VectorXd d(2);
  d << 4.0, 1.0;
  GramMatrix g = diag_gram(d);
  // Gram diag(4,1): sigma = (2,1), normalized (1.0, 0.5).
  NullspaceBasis basis;
  basis.spectrum = VectorXd(2);
  basis.spectrum << 2.0, 1.0;
  const VectorXd report = singular_spectrum_report(basis);
  CHECK(report[0] == 1.0);
  CHECK(report[1] == doctest::Approx(0.5));
}

TEST_CASE("synthetic low-rank data has a long spectrum tail") {
  const SyntheticScene scene = make_scene(4, {24, 24}, 1, 22, PhantomKind::disk);
  const ComplexImageStack kspace = forward_kspace(scene, 0.0, 0);
  const CalibrationRegion calib = extract_calibration(kspace, {16, 16});
  const KernelSupport support = make_support(KernelShape::rect, 2, 2);
  const NullspaceBasis basis =
      extract_nullspace(gram_explicit(build_calib_matrix(calib, support)), 0.05);
  CHECK(basis.spectrum.size() == 4 * 25);
  CHECK(basis.rank() >= 4 * 3 / 2);  // at least the cross-relation count
  CHECK(singular_spectrum_report(basis)[0] == 1.0);
}

TEST_CASE("W depends only on the subspace") {
  const Index n = 12, r = 4;
  const MatrixXcd filters = test::random_orthonormal(n, r, 23);
  const MatrixXcd u = test::random_orthonormal(r, r, 24);
  const MatrixXcd w1 = filters * filters.adjoint();
  const MatrixXcd rotated = filters * u;
  const MatrixXcd w2 = rotated * rotated.adjoint();
  CHECK((w1 - w2).cwiseAbs().maxCoeff() < 1e-12);
}
