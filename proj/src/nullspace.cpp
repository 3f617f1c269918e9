#include "senskit/nullspace.hpp"

#include <cmath>

namespace senskit {

NullspaceBasis extract_nullspace(const GramMatrix& gram, double threshold_ratio) {
  if (!(threshold_ratio > 0.0 && threshold_ratio < 1.0))
    throw DimError("nullspace threshold ratio must lie in (0,1)");
  const Index n = gram.entries.rows();
  if (n == 0 || gram.entries.cols() != n) throw DimError("Gram matrix must be square");

  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gram.entries);
  if (es.info() != Eigen::Success) throw std::runtime_error("Gram eigendecomposition failed");

  // Ascending eigenvalues; roundoff negatives clamp to zero before sqrt.
  VectorXd sigma_asc(n);
  for (Index i = 0; i < n; ++i) sigma_asc[i] = std::sqrt(std::max(0.0, es.eigenvalues()[i]));

  NullspaceBasis basis;
  basis.threshold_ratio = threshold_ratio;
  basis.channels = gram.channels;
  basis.support_size = gram.support_size;
  basis.spectrum = sigma_asc.reverse();

  const double cutoff = threshold_ratio * basis.spectrum[0];
  Index r = 0;
  while (r < n && sigma_asc[r] < cutoff) ++r;
  if (r == 0)
    throw NullspaceEmptyError("calibration matrix has no approximate nullspace at ratio " +
                              std::to_string(threshold_ratio));

  basis.filters = es.eigenvectors().leftCols(r);
  return basis;
}

VectorXd singular_spectrum_report(const NullspaceBasis& basis) {
  const double s1 = basis.spectrum.size() > 0 ? basis.spectrum[0] : 0.0;
  if (s1 <= 0.0) return VectorXd::Zero(basis.spectrum.size());
  return basis.spectrum / s1;
}

}  // namespace senskit
