#pragma once

#include <stdexcept>

#include "numerics/linalg.hpp"

namespace depsgd::num {

struct EigenDecomposition {
    Mat u;            // columns are eigenvectors, orthogonal
    Vec eigenvalues;  // sorted descending, matching u's columns
};

struct NotSymmetricError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NoConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularCovarianceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
/// Sweeps until the off-diagonal Frobenius mass falls below tol * ||A||_F,
/// at most max_sweeps passes. Eigenvalues come back sorted descending.
EigenDecomposition sym_eigendecompose(const Mat& a, double tol = 1e-12, int max_sweeps = 100);

/// U diag(lambda_j^{-1/2}) U^T for symmetric positive definite input.
/// Any eigenvalue below `floor` raises SingularCovarianceError.
Mat inv_sqrt_psd(const Mat& a, double floor = 1e-10);

}  // namespace depsgd::num
