#pragma once

#include "sinefield/types.hpp"

namespace sf {

struct SymEig {
  Vector eigenvalues;   // sorted descending
  Matrix eigenvectors;  // orthonormal columns, eigenvectors[:, i] pairs eigenvalues[i]
};

// Eigendecomposition of a symmetric matrix. Rejects non-square input and
// asymmetry beyond 1e-9 (scaled by the largest entry magnitude when that
// exceeds one). Satisfies ||K v_i - lambda_i v_i|| <= 1e-7 ||K||_F and
// ||V^T V - I||_F <= 1e-8.
SymEig sym_eig(const Matrix& K);

}  // namespace sf
