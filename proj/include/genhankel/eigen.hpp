#pragma once

#include <vector>

#include "genhankel/matrix.hpp"

namespace genhankel {

/// Symmetric tridiagonal matrix: diagonal and first sub-diagonal.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;  // size n-1 (empty for n <= 1)
};

/// Householder reduction of a symmetric matrix to tridiagonal form. Only the
/// lower triangle of `a` is read; `a` is consumed as workspace.
Tridiagonal tridiagonalize(Matrix a);

/// Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL.
/// Returned in ascending order.
std::vector<double> tridiagonal_eigenvalues(Tridiagonal t);

/// All eigenvalues of a real symmetric matrix, ascending.
/// Throws std::invalid_argument for non-finite entries or asymmetry above
/// `symmetry_tol` (absolute).
std::vector<double> eigenvalues_symmetric(const Matrix& a, double symmetry_tol = 1e-12);

}  // namespace genhankel
