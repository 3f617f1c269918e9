#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "senskit/eigensolve.hpp"
#include "senskit/parallel.hpp"

using namespace senskit;

namespace {

GramField field_of(const std::vector<MatrixXcd>& voxels) {
  GramField f;
  f.dims = {Index(voxels.size())};
  f.channels = voxels[0].rows();
  f.values.resize(Index(voxels.size()) * f.channels * f.channels);
  for (Index j = 0; j < Index(voxels.size()); ++j) f.at(j) = voxels[std::size_t(j)];
  return f;
}

GramField random_hermitian_field(Index q, Index n, std::uint64_t seed) {
  std::vector<MatrixXcd> voxels;
  for (Index j = 0; j < n; ++j) {
    const MatrixXcd m = test::random_complex(q, q, seed + std::uint64_t(j));
    voxels.push_back(((m + m.adjoint()) / 2.0).eval());
  }
  return field_of(voxels);
}

double angle_between(const VectorXcd& a, const VectorXcd& b) {
  return std::acos(std::min(1.0, std::abs(a.dot(b)) / (a.norm() * b.norm())));
}

}  // namespace

TEST_CASE("dense solver on diagonal voxels") {
  MatrixXcd d = MatrixXcd::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 0.01;
  const EigenResult r = eig_dense_field(field_of({d}), Extremal::smallest);
  CHECK(r.values[0] == doctest::Approx(0.01));
  CHECK(r.second_values[0] == doctest::Approx(1.0));
  CHECK(std::abs(r.vectors(2, 0)) == doctest::Approx(1.0));
}

TEST_CASE("degenerate voxel is flagged by a zero eigengap") {
  const EigenResult r =
      eig_dense_field(field_of({MatrixXcd::Identity(3, 3)}), Extremal::smallest);
  CHECK(r.values[0] == doctest::Approx(1.0));
  CHECK(r.second_values[0] == doctest::Approx(1.0));
  CHECK(r.vectors.col(0).norm() == doctest::Approx(1.0));
}

TEST_CASE("dense residual check on random fields") {
  const GramField f = random_hermitian_field(4, 32, 41);
  for (Extremal which : {Extremal::smallest, Extremal::largest}) {
    const EigenResult r = eig_dense_field(f, which);
    for (Index j = 0; j < 32; ++j) {
      CHECK((f.at(j) * r.vectors.col(j) - r.values[j] * r.vectors.col(j)).norm() < 1e-9);
      CHECK(r.vectors.col(j).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("power iteration contracts by the eigenvalue ratio") {
  MatrixXcd b = MatrixXcd::Zero(2, 2);
  b(0, 0) = 1.0;
  b(1, 1) = 0.1;
  const EigenResult r = eig_power_field(field_of({b}), 10);
  VectorXcd e1 = VectorXcd::Zero(2);
  e1[0] = 1.0;
  CHECK(angle_between(r.vectors.col(0), e1) < 1e-9);
  CHECK(r.values[0] == doctest::Approx(1.0));
  CHECK(r.iterations_used == 10);
}

TEST_CASE("identity B returns the initial vector") {
  const EigenResult r = eig_power_field(field_of({MatrixXcd::Identity(3, 3)}), 10);
  for (Index q = 0; q < 3; ++q)
    CHECK(std::abs(r.vectors(q, 0) - Cx(1.0 / std::sqrt(3.0), 0.0)) < 1e-12);
}

TEST_CASE("Rayleigh quotient is non-decreasing over iterations for PSD B") {
  // PSD per-voxel matrices from A^H A.
  std::vector<MatrixXcd> voxels;
  for (Index j = 0; j < 8; ++j) {
    const MatrixXcd a = test::random_complex(3, 3, 47 + std::uint64_t(j));
    voxels.push_back((a.adjoint() * a).eval());
  }
  const GramField f = field_of(voxels);
  VectorXd prev = VectorXd::Constant(8, -1e300);
  for (int iters = 1; iters <= 10; ++iters) {
    const EigenResult r = eig_power_field(f, iters);
    for (Index j = 0; j < 8; ++j) {
      CHECK(r.values[j] >= prev[j] - 1e-12);
      prev[j] = r.values[j];
    }
  }
}

TEST_CASE("batched result matches voxel-at-a-time and is thread-invariant") {
  const GramField f = random_hermitian_field(3, 17, 53);
  const EigenResult batched = eig_power_field(f, 10);
  for (Index j = 0; j < 17; ++j) {
    const EigenResult single = eig_power_field(field_of({MatrixXcd(f.at(j))}), 10);
    CHECK((batched.vectors.col(j) - single.vectors.col(0)).norm() < 1e-12);
    CHECK(batched.values[j] == doctest::Approx(single.values[0]).epsilon(1e-12));
  }

  const int saved = max_threads();
  set_max_threads(1);
  const EigenResult serial = eig_power_field(f, 10);
  set_max_threads(saved);
  CHECK((batched.vectors - serial.vectors).cwiseAbs().maxCoeff() < 1e-12);
}
