#pragma once

#include <Eigen/Dense>

namespace subspace::baselines {

// Shared state for the two classical online subspace trackers. The basis is
// kept column-orthonormal by every step.
struct BaselineState {
    Eigen::MatrixXd basis;  // n x d
    long step = 0;
};

// Validates orthonormality within 1e-8.
BaselineState make_baseline_state(Eigen::MatrixXd basis);

// Oja's rule: X <- Pi[X + tau y (y^T X)], Pi the thin-QR orthonormalizer
// with the positive-diagonal convention.
BaselineState oja_step(const BaselineState& state, const Eigen::VectorXd& y,
                       double tau);

// GROUSE: rank-one geodesic rotation of the basis toward the sample. With an
// orthonormal basis the least-squares weights are w = X^T y; residual or
// projection norms below 1e-14 make the step an exact identity.
BaselineState grouse_step(const BaselineState& state, const Eigen::VectorXd& y,
                          double tau);

}  // namespace subspace::baselines
