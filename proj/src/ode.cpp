#include "subspace/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "subspace/common.hpp"

namespace subspace::ode {

namespace {

void check_dims(const MacroState& st, const OdeSystem& sys) {
    const Eigen::Index d = st.truth_rank();
    const Eigen::Index p = st.gen_rank();
    const Eigen::Index q = st.disc_rank();
    bool ok = st.q.rows() == d && st.r.rows() == p && st.r.cols() == q &&
              st.s.rows() == p && st.s.cols() == p && st.z.rows() == q &&
              st.z.cols() == q && sys.signal_cov.size() == d &&
              sys.gen_cov.size() == p;
    if (!ok) {
        throw std::invalid_argument(
            "ode: macroscopic state blocks have inconsistent shapes");
    }
}

bool all_finite(const MacroState& st) {
    return st.p.allFinite() && st.q.allFinite() && st.r.allFinite() &&
           st.s.allFinite();
}

}  // namespace

OdeSystem make_ode_system(Eigen::VectorXd signal_cov, Eigen::VectorXd gen_cov,
                          double tau, double tau_tilde, double eta_t,
                          double eta_g) {
    if (signal_cov.size() == 0 || gen_cov.size() == 0) {
        throw std::invalid_argument("ode system: empty covariance diagonal");
    }
    if ((signal_cov.array() < 0.0).any() || (gen_cov.array() < 0.0).any()) {
        throw std::invalid_argument("ode system: covariance entries must be >= 0");
    }
    if (tau <= 0.0 || tau_tilde <= 0.0) {
        throw std::invalid_argument("ode system: learning rates must be > 0");
    }
    if (eta_t < 0.0 || eta_g < 0.0) {
        throw std::invalid_argument("ode system: noise levels must be >= 0");
    }
    return OdeSystem{std::move(signal_cov), std::move(gen_cov),
                     tau,       tau_tilde,  eta_t, eta_g};
}

OdeCoefficients coefficients(const MacroState& state, const OdeSystem& sys) {
    check_dims(state, sys);
    const Eigen::Index q = state.disc_rank();

    OdeCoefficients c;
    // L_ii = -lambda~_i * sum_j R_ij^2: damping proportional to how much of
    // generator column i the discriminator has picked up.
    c.l = -(state.r.array().square().rowwise().sum() * sys.gen_cov.array());

    double noise_shift =
        sys.tau * (sys.eta_g * sys.eta_g + sys.eta_t * sys.eta_t) / 2.0;
    c.h = (1.0 - sys.tau * sys.eta_g / 2.0) *
              (state.r.transpose() * sys.gen_cov.asDiagonal() * state.r) -
          (1.0 + sys.tau * sys.eta_t / 2.0) *
              (state.q.transpose() * sys.signal_cov.asDiagonal() * state.q);
    c.h.diagonal().array() -= noise_shift;
    return c;
}

MacroState rhs(const MacroState& state, const OdeSystem& sys) {
    OdeCoefficients c = coefficients(state, sys);
    const auto lam = sys.signal_cov.asDiagonal();
    const auto lam_g = sys.gen_cov.asDiagonal();
    const auto ldiag = c.l.asDiagonal();

    MacroState d;
    d.p = sys.tau_tilde *
          (state.q * state.r.transpose() * lam_g + state.p * ldiag);
    d.q = sys.tau *
          (lam * state.q - state.p * (lam_g * state.r) + state.q * c.h);
    d.r = sys.tau * (state.p.transpose() * (lam * state.q) -
                     state.s * (lam_g * state.r) + state.r * c.h) +
          sys.tau_tilde *
              ((sys.gen_cov + c.l).asDiagonal() * state.r);
    Eigen::MatrixXd rr = state.r * state.r.transpose();
    d.s = sys.tau_tilde * (rr * lam_g + lam_g * rr + state.s * ldiag +
                           ldiag * state.s);
    d.z = Eigen::MatrixXd::Zero(state.disc_rank(), state.disc_rank());
    return d;
}

Trajectory integrate(const MacroState& m0, const OdeSystem& sys, double t_end,
                     double dt, int record_every) {
    check_dims(m0, sys);
    if (!(dt > 0.0)) throw std::invalid_argument("ode: dt must be > 0");
    if (t_end < 0.0) throw std::invalid_argument("ode: t_end must be >= 0");
    if (record_every < 1) {
        throw std::invalid_argument("ode: record_every must be >= 1");
    }

    const long steps = std::lround(t_end / dt);
    MacroState y = m0;

    Trajectory traj;
    traj.reserve(static_cast<size_t>(steps / record_every) + 2);
    traj.push_back({0.0, y});

    auto axpy = [](MacroState& acc, double a, const MacroState& k) {
        acc.p += a * k.p;
        acc.q += a * k.q;
        acc.r += a * k.r;
        acc.s += a * k.s;
    };

    for (long step = 1; step <= steps; ++step) {
        MacroState k1 = rhs(y, sys);
        MacroState y2 = y;
        axpy(y2, dt / 2.0, k1);
        MacroState k2 = rhs(y2, sys);
        MacroState y3 = y;
        axpy(y3, dt / 2.0, k2);
        MacroState k3 = rhs(y3, sys);
        MacroState y4 = y;
        axpy(y4, dt, k3);
        MacroState k4 = rhs(y4, sys);

        axpy(y, dt / 6.0, k1);
        axpy(y, dt / 3.0, k2);
        axpy(y, dt / 3.0, k3);
        axpy(y, dt / 6.0, k4);
        // Z is conserved exactly: never touched by the update above.

        double t = static_cast<double>(step) * dt;
        if (!all_finite(y)) {
            throw NumericError("macroscopic integration diverged at t = " +
                               std::to_string(t));
        }
        if (step % record_every == 0 || step == steps) {
            traj.push_back({t, y});
        }
    }
    return traj;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::converged: return "converged";
        case Regime::oscillating: return "oscillating";
        case Regime::collapsed: return "collapsed";
        case Regime::not_learning: return "not-learning";
    }
    return "unknown";
}

Regime classify_regime(const Trajectory& traj) {
    const size_t count = traj.size();
    if (count < 100) {
        throw std::invalid_argument(
            "classify_regime: need at least 100 trajectory samples");
    }
    const Eigen::Index nfeat =
        std::min(traj.front().state.p.rows(), traj.front().state.p.cols());
    if (nfeat == 0) {
        throw std::invalid_argument("classify_regime: empty overlap diagonal");
    }

    const size_t tail_start = count - std::max<size_t>(count / 5, 1);

    bool any_alive = false;       // some feature's tail mean >= 0.15
    bool any_swinging = false;    // some feature's tail peak-to-peak > 0.1
    bool any_collapsed = false;   // some once-learned feature lost > half its peak
    for (Eigen::Index i = 0; i < nfeat; ++i) {
        double peak = 0.0;
        double tail_sum = 0.0, tail_min = 0.0, tail_max = 0.0;
        size_t tail_n = 0;
        for (size_t s = 0; s < count; ++s) {
            double a = std::abs(traj[s].state.p(i, i));
            peak = std::max(peak, a);
            if (s >= tail_start) {
                if (tail_n == 0) {
                    tail_min = tail_max = a;
                } else {
                    tail_min = std::min(tail_min, a);
                    tail_max = std::max(tail_max, a);
                }
                tail_sum += a;
                ++tail_n;
            }
        }
        double tail_mean = tail_sum / static_cast<double>(tail_n);
        if (tail_mean >= 0.15) any_alive = true;
        if (tail_max - tail_min > 0.1) any_swinging = true;
        if (peak >= 0.15 && tail_mean < 0.5 * peak) any_collapsed = true;
    }

    if (!any_alive) return Regime::not_learning;
    if (any_swinging) return Regime::oscillating;
    if (any_collapsed) return Regime::collapsed;
    return Regime::converged;
}

}  // namespace subspace::ode
