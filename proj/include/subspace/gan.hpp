#pragma once

#include <Eigen/Dense>
#include <limits>

#include "subspace/model.hpp"
#include "subspace/ode.hpp"
#include "subspace/rng.hpp"

namespace subspace::gan {

// Two-player SGD hyperparameters. lambda is the orthogonality penalty
// strength; the value infinity selects the projected (hard-constraint)
// discriminator update together with the matching effective damping on the
// generator.
struct GanConfig {
    Eigen::Index n = 0;            // ambient dimension
    Eigen::Index d = 0;            // true rank
    Eigen::Index p = 0;            // generator rank
    Eigen::Index q = 0;            // discriminator rank
    double tau = 0.0;              // discriminator learning rate
    double tau_tilde = 0.0;        // generator learning rate
    double lambda = 0.0;           // penalty strength, may be infinity
    double gen_noise = 0.0;        // eta_G
    Eigen::VectorXd gen_cov_sqrt;  // diagonal of Lambda-tilde^{1/2}, length p

    bool infinite_lambda() const {
        return lambda == std::numeric_limits<double>::infinity();
    }
    Eigen::VectorXd gen_cov() const { return gen_cov_sqrt.array().square(); }
};

// Validates: 1 <= d, q <= p <= n; learning rates >= 0 (zero allowed so the
// frozen-dynamics case stays representable); lambda > 0 or infinite;
// gen_noise >= 0; gen_cov_sqrt has length p with positive entries.
GanConfig make_gan_config(Eigen::Index n, Eigen::Index d, Eigen::Index p,
                          Eigen::Index q, double tau, double tau_tilde,
                          double lambda, double gen_noise,
                          Eigen::VectorXd gen_cov_sqrt);

struct GanState {
    Eigen::MatrixXd generator;      // V, n x p
    Eigen::MatrixXd discriminator;  // W, n x q
    long step = 0;
};

// Generator sample y~ = V c~ + sqrt(eta_G) a with c~ ~ N(0, Lambda-tilde).
// V need not be orthonormal, so this cannot reuse the spiked-model sampler.
Sample sample_generator(const Eigen::MatrixXd& v, const GanConfig& cfg,
                        RandomStream& rng);

// Value of the adversarial objective at (V, W) for one true sample y and one
// generated sample y_fake. The orthogonality penalties sum an element-wise
// logcosh over all entries of the Gram residuals. Finite lambda only.
double loss(const Eigen::VectorXd& y, const Eigen::VectorXd& y_fake,
            const Eigen::MatrixXd& v, const Eigen::MatrixXd& w,
            const GanConfig& cfg);

// Exact gradients of `loss` with respect to V and W (finite lambda only);
// first element of the pair is d loss / d V, second is d loss / d W.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> loss_gradients(
    const Eigen::VectorXd& y, const Eigen::VectorXd& y_fake,
    const Eigen::VectorXd& latent_fake, const Eigen::MatrixXd& v,
    const Eigen::MatrixXd& w, const GanConfig& cfg);

// One simultaneous two-player update from (V_k, W_k). The discriminator
// ascends, the generator descends. In the infinite-lambda mode the
// discriminator step is followed by orthonormalization and the generator
// penalty becomes the effective damping V L_k with
// L_k = -diag(R_k R_k^T Lambda-tilde), R_k = V^T W.
GanState sgd_step(const GanState& state, const Eigen::VectorXd& y,
                  const Eigen::VectorXd& y_fake,
                  const Eigen::VectorXd& latent_fake, const GanConfig& cfg);

// Destination for the macroscopic trajectory of a training run; the sink
// keeps every record_every-th step plus the final one, time axis t = k/n.
struct TrajectoryRecorder {
    int record_every = 1;
    ode::Trajectory points;
};

// Runs `steps` SGD steps, drawing one true and one fresh generated sample
// per step from `rng` (true latent, true noise, fake latent, fake noise, in
// that order). Records macroscopic states against true_model.basis.
GanState train(GanState state, const SpikedModel& true_model,
               const GanConfig& cfg, long steps, TrajectoryRecorder& recorder,
               RandomStream& rng);

// Conditional one-step drift at a fixed state, Monte-Carlo averaged over
// fresh sample pairs, against the closed-form conditional expectations.
// noise_scale is the largest per-entry standard error of the empirical
// averages; max_abs_error should sit within a few multiples of it.
struct DriftReport {
    Eigen::MatrixXd empirical_v, analytic_v;  // n x p
    Eigen::MatrixXd empirical_q, analytic_q;  // d x q
    double max_abs_error = 0.0;
    double noise_scale = 0.0;
};

// Infinite-lambda mode only; mc_samples >= 10^4.
DriftReport drift_check(const GanState& state, const SpikedModel& true_model,
                        const GanConfig& cfg, long mc_samples,
                        RandomStream& rng);

}  // namespace subspace::gan
