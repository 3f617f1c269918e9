#include "senskit/eigensolve.hpp"

#include <cmath>

#include "senskit/parallel.hpp"

namespace senskit {

EigenResult eig_dense_field(const GramField& field, Extremal which) {
  const Index q = field.channels;
  const Index n = field.voxels();
  EigenResult out;
  out.dims = field.dims;
  out.channels = q;
  out.vectors.resize(q, n);
  out.values.resize(n);
  out.second_values.resize(n);

  const int nt = max_threads();
  const Index chunk = (n + nt - 1) / nt;
  parallel_for(0, Index(nt), [&](Index t) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es;
    const Index lo = t * chunk, hi = std::min(n, lo + chunk);
    for (Index j = lo; j < hi; ++j) {
      es.compute(field.at(j));
      if (which == Extremal::smallest) {
        out.vectors.col(j) = es.eigenvectors().col(0);
        out.values[j] = es.eigenvalues()[0];
        out.second_values[j] = q > 1 ? es.eigenvalues()[1] : es.eigenvalues()[0];
      } else {
        out.vectors.col(j) = es.eigenvectors().col(q - 1);
        out.values[j] = es.eigenvalues()[q - 1];
        out.second_values[j] = q > 1 ? es.eigenvalues()[q - 2] : es.eigenvalues()[q - 1];
      }
    }
  });
  return out;
}

EigenResult eig_power_field(const GramField& b_field, int iters) {
  const Index q = b_field.channels;
  const Index n = b_field.voxels();
  EigenResult out;
  out.dims = b_field.dims;
  out.channels = q;
  out.vectors.resize(q, n);
  out.values.resize(n);
  out.iterations_used = iters;

  const double init = 1.0 / std::sqrt(double(q));
  parallel_for(0, n, [&](Index j) {
    const auto b = b_field.at(j);
    VectorXcd v = VectorXcd::Constant(q, Cx(init, 0.0));
    VectorXcd w(q);
    for (int it = 0; it < iters; ++it) {
      w.noalias() = b * v;
      double nrm = w.norm();
      if (nrm < 1e-14) {
        if (it == 0) {
          // All-ones start was (numerically) annihilated; restart from e_1.
          v.setZero();
          v[0] = 1.0;
          w.noalias() = b * v;
          nrm = w.norm();
        }
        if (nrm < 1e-14) break;  // B ~ 0 at this voxel; keep the current v
      }
      v = w / nrm;
    }
    out.vectors.col(j) = v;
    out.values[j] = std::real(v.dot(b * v));
  });
  return out;
}

}  // namespace senskit
