#pragma once

#include <Eigen/Dense>
#include <vector>

#include "subspace/model.hpp"

namespace subspace::ode {

// Parameters of the deterministic macroscopic dynamics (the scaling limit of
// adversarial subspace training). Covariances are diagonal throughout.
struct OdeSystem {
    Eigen::VectorXd signal_cov;  // diagonal of Lambda, one entry per truth feature
    Eigen::VectorXd gen_cov;     // diagonal of Lambda-tilde, one per generator column
    double tau = 0.0;            // discriminator learning rate
    double tau_tilde = 0.0;      // generator learning rate
    double eta_t = 0.0;          // noise level on the true-data side
    double eta_g = 0.0;          // noise level on the generator side
};

// Validates: covariance entries >= 0, learning rates > 0, noise levels >= 0.
OdeSystem make_ode_system(Eigen::VectorXd signal_cov, Eigen::VectorXd gen_cov,
                          double tau, double tau_tilde, double eta_t,
                          double eta_g);

// State-dependent drift corrections. L damps generator columns by how much
// discriminator mass they have attracted; H collects the discriminator
// self-interaction including the second-order noise penalty.
struct OdeCoefficients {
    Eigen::VectorXd l;  // diagonal of L = -diag(R R^T Lambda-tilde), length p
    Eigen::MatrixXd h;  // q x q, symmetric
};

OdeCoefficients coefficients(const MacroState& state, const OdeSystem& sys);

// Time derivative of the macroscopic state. dZ is identically zero; the
// returned struct carries a zero block so callers can treat it uniformly.
MacroState rhs(const MacroState& state, const OdeSystem& sys);

struct TrajectoryPoint {
    double t = 0.0;
    MacroState state;
};
using Trajectory = std::vector<TrajectoryPoint>;

// Classical fixed-step RK4 over [0, t_end] with step dt. Records every
// record_every-th step (plus the initial and final states). Z is copied from
// m0 and never touched. Throws NumericError with the offending time if any
// entry stops being finite.
Trajectory integrate(const MacroState& m0, const OdeSystem& sys, double t_end,
                     double dt, int record_every = 1);

enum class Regime { converged, oscillating, collapsed, not_learning };

const char* regime_name(Regime r);

// Deterministic label from tail-window statistics of the diagonal overlaps
// |P_ii| (window = last 20% of samples, at least 100 samples total):
//   not-learning  if even the best feature's tail mean stays below 0.15
//   oscillating   if some feature's tail peak-to-peak exceeds 0.1
//   collapsed     if some feature that once reached 0.15 has lost more than
//                 half of its peak by the tail window
//   converged     otherwise
Regime classify_regime(const Trajectory& traj);

}  // namespace subspace::ode
