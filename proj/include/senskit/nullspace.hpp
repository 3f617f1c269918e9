#pragma once

#include "senskit/calibration.hpp"
#include "senskit/types.hpp"

namespace senskit {

// Approximate nullspace of the calibration matrix, obtained from the Gram's
// eigendecomposition. Column r of `filters` is one annihilating filter,
// packed channel-major with support-enumeration inner order.
struct NullspaceBasis {
  MatrixXcd filters;   // (Q|Lambda|) x R, orthonormal columns
  VectorXd spectrum;   // all Q|Lambda| singular values of C, descending
  double threshold_ratio = 0.05;
  Index channels = 0;
  Index support_size = 0;

  Index rank() const { return filters.cols(); }
};

// Keeps every eigenvector whose implied singular value sqrt(max(lambda, 0))
// falls below threshold_ratio * sigma_1. Throws NullspaceEmptyError when
// nothing qualifies.
NullspaceBasis extract_nullspace(const GramMatrix& gram, double threshold_ratio = 0.05);

// sigma_n / sigma_1 in descending order, for plots and CSV export.
VectorXd singular_spectrum_report(const NullspaceBasis& basis);

}  // namespace senskit
