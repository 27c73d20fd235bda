#pragma once

#include <Eigen/Dense>

namespace subspace::geometry {

// Thin QR orthonormalization of the columns of x (the projection used by
// every learner in this project). The R factor's diagonal is positive by
// construction, which makes the result unique and idempotent up to
// roundoff. Throws NumericError if the smallest R diagonal falls below
// 1e-12 times the largest (rank-deficient input).
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& x);

// Principal angles between span(x) and span(y), ascending, in [0, pi/2].
// Inputs are orthonormalized first, so any full-rank spanning sets work.
Eigen::VectorXd principal_angles(const Eigen::MatrixXd& x,
                                 const Eigen::MatrixXd& y);

// Grassmann geodesic distance: sqrt of the sum of squared principal angles.
double grassmann_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

// Per-column cosine similarities diag(x_n^T y_n) where both matrices have
// their columns normalized to unit length (not orthonormalized). Inputs
// must have identical shapes and nonzero columns.
Eigen::VectorXd cosine_diagonals(const Eigen::MatrixXd& x,
                                 const Eigen::MatrixXd& y);

// Mean squared residual of the rows of `samples` after projection onto the
// column span of `basis`: mean_i ||x_i - B B^T x_i||^2. The basis must be
// orthonormal within 1e-6.
double reconstruction_error(const Eigen::MatrixXd& samples,
                            const Eigen::MatrixXd& basis);

// Pads an orthonormal n x r matrix to an orthonormal n x p matrix whose
// first r columns are x, exactly. Padding columns are standard basis
// vectors of largest index, each made orthogonal to everything already
// accepted by one Gram-Schmidt pass; candidates with residual norm below
// 1e-8 are skipped. Throws NumericError if fewer than p - r usable
// candidates exist.
Eigen::MatrixXd uplift(const Eigen::MatrixXd& x, Eigen::Index p);

}  // namespace subspace::geometry
