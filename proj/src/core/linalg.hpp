#pragma once

// Thin dense-symmetric helpers over LAPACKE used by the covariance square
// root, the dense eigensolver fallback, and LOBPCG's Rayleigh-Ritz step.

#include <vector>

namespace pam {

// Eigendecomposition of a symmetric n x n row-major matrix; ascending
// eigenvalues. a is overwritten with eigenvectors (rows of a^T, i.e. column j
// of the original problem lands in a[i*n+j]).
void sym_eig(std::vector<double>& a, std::vector<double>& w, int n);

// B = A * A^T style products for row-major square blocks.
void matmul(const double* a, const double* b, double* c, int n);  // c = a b

// Symmetric PSD square root (eigenvalues clamped at zero).
std::vector<double> sym_sqrt(std::vector<double> a, int n);

} // namespace pam
