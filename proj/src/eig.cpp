#include "sinefield/eig.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "sinefield/errors.hpp"

namespace sf {

SymEig sym_eig(const Matrix& K) {
  if (K.rows() != K.cols()) throw InvalidArgument("sym_eig: matrix must be square");
  if (K.rows() == 0) throw InvalidArgument("sym_eig: empty matrix");
  const double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
  const double asym = (K - K.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale)
    throw InvalidArgument("sym_eig: matrix asymmetric beyond tolerance");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(K);
  if (solver.info() != Eigen::Success)
    throw InvalidArgument("sym_eig: eigendecomposition failed to converge");

  // Eigen returns ascending order; flip to descending.
  const Index n = K.rows();
  SymEig out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors.resize(n, n);
  for (Index i = 0; i < n; ++i) out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  return out;
}

}  // namespace sf
