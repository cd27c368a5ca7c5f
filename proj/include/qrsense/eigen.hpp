// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "qrsense/dense.hpp"

namespace qrsense {

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column j pairs with values[j]
};

/// Cyclic Jacobi on a small dense Hermitian matrix.
///
/// Stops once the off-diagonal Frobenius mass is <= 1e-12 * ||G||_F. Throws
/// InvalidArgument for a non-square input or one that is not Hermitian to
/// 1e-10 (relative to its largest entry), and ConvergenceError after 100 sweeps.
HermitianEigen hermitian_eigen(const ComplexMatrix& gram);

/// Eigenvalues only, ascending.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& gram);

}  // namespace qrsense
