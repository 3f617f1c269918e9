#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "senskit/nullspace.hpp"
#include "senskit/types.hpp"

namespace senskit::test {

inline std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("senskit_" + tag);
  std::filesystem::create_directories(dir);
  return dir;
}

inline ComplexImageStack random_stack(const Dims& dims, Index channels, Domain domain,
                                      std::uint64_t seed) {
  ComplexImageStack stack(dims, channels, domain);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Index i = 0; i < stack.data.size(); ++i) stack.data[i] = Cx(gauss(rng), gauss(rng));
  return stack;
}

inline MatrixXcd random_complex(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXcd m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = Cx(gauss(rng), gauss(rng));
  return m;
}

// Orthonormal columns from the QR of a random complex matrix.
inline MatrixXcd random_orthonormal(Index rows, Index cols, std::uint64_t seed) {
  const MatrixXcd m = random_complex(rows, cols, seed);
  Eigen::HouseholderQR<MatrixXcd> qr(m);
  MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(rows, cols);
  return q;
}

inline NullspaceBasis basis_from_filters(MatrixXcd filters, Index channels, Index support_size) {
  NullspaceBasis basis;
  basis.channels = channels;
  basis.support_size = support_size;
  basis.spectrum = VectorXd::Ones(channels * support_size);
  basis.filters = std::move(filters);
  return basis;
}

}  // namespace senskit::test
