#pragma once

#include "senskit/spatial_gram.hpp"
#include "senskit/types.hpp"

namespace senskit {

enum class Extremal { smallest, largest };

struct EigenResult {
  Dims dims;
  Index channels = 0;
  MatrixXcd vectors;      // Q x N, unit-norm column per voxel
  VectorXd values;        // extremal eigenvalue per voxel
  VectorXd second_values; // runner-up eigenvalue (dense path only)
  int iterations_used = 0;
};

// Dense reference: full per-voxel eigendecomposition, extremal pair plus the
// runner-up eigenvalue for gap diagnostics.
EigenResult eig_dense_field(const GramField& field, Extremal which);

// Batched power iteration on the B-form field: all voxels iterate
// v <- normalize(B v) the same fixed number of times, then report the
// Rayleigh quotient. Initialization is the normalized all-ones vector, with
// an e_1 restart if the first iterate collapses.
EigenResult eig_power_field(const GramField& b_field, int iters = 10);

}  // namespace senskit
