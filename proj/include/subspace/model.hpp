#pragma once

#include <Eigen/Dense>

#include "subspace/rng.hpp"

namespace subspace {

// Ground-truth generative model: y = U c + sqrt(eta) a with c drawn from a
// centered Gaussian with diagonal covariance Lambda and a standard normal
// in the ambient dimension. Lambda is stored through its square root so
// callers state the sampling convention explicitly.
struct SpikedModel {
    Eigen::MatrixXd basis;     // n x d, orthonormal columns
    Eigen::VectorXd cov_sqrt;  // diagonal of Lambda^{1/2}
    double noise_level = 0.0;  // eta

    Eigen::Index ambient_dim() const { return basis.rows(); }
    Eigen::Index rank() const { return basis.cols(); }
    // Diagonal of Lambda itself.
    Eigen::VectorXd signal_cov() const { return cov_sqrt.array().square(); }
};

// Validating constructor; throws on a non-orthonormal basis (tolerance
// 1e-10), nonpositive covariance entries, or negative noise.
SpikedModel make_spiked_model(Eigen::MatrixXd basis, Eigen::VectorXd cov_sqrt,
                              double noise_level);

struct Sample {
    Eigen::VectorXd value;   // y, ambient dimension
    Eigen::VectorXd latent;  // c, covariance Lambda
};

Sample sample(const SpikedModel& model, RandomStream& rng);

// Player matrices: truth U (n x d), generator V (n x p), discriminator
// W (n x q).
struct MicroState {
    Eigen::MatrixXd u, v, w;
};

// Second-moment summary of a MicroState. All training-relevant statistics
// of the high-dimensional system live here.
struct MacroState {
    Eigen::MatrixXd p;  // U^T V, d x p
    Eigen::MatrixXd q;  // U^T W, d x q
    Eigen::MatrixXd r;  // V^T W, p x q
    Eigen::MatrixXd s;  // V^T V, p x p
    Eigen::MatrixXd z;  // W^T W, q x q

    Eigen::Index truth_rank() const { return p.rows(); }
    Eigen::Index gen_rank() const { return p.cols(); }
    Eigen::Index disc_rank() const { return q.cols(); }

    // Gram matrix of [U V W]; symmetric positive semidefinite whenever the
    // state comes from an actual MicroState.
    Eigen::MatrixXd block_matrix() const;
};

MacroState macro_state(const MicroState& state);

// Gaussian matrix with entry variance scale^2 / n so squared column norms
// concentrate at scale^2; optionally orthonormalized.
Eigen::MatrixXd scaled_random_init(Eigen::Index n, Eigen::Index cols,
                                   double scale, RandomStream& rng,
                                   bool orthonormal = false);

// Constructs generator and discriminator matrices whose macroscopic state
// hits the requested targets exactly (up to roundoff): U^T V = p0,
// U^T W = q0, V^T V = s0, W^T W = I, and V^T W = p0^T q0. The two
// complements are drawn inside a shared orthonormal frame orthogonal to U,
// which is what pins the cross term. Throws NumericError if the targets
// are not realizable (non-PSD residual Gram blocks).
MicroState matched_init(const Eigen::MatrixXd& u, const Eigen::MatrixXd& p0,
                        const Eigen::MatrixXd& q0, const Eigen::MatrixXd& s0,
                        RandomStream& rng);

}  // namespace subspace
