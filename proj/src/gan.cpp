#include "subspace/gan.hpp"

#include <cmath>
#include <stdexcept>

#include "subspace/common.hpp"
#include "subspace/geometry.hpp"

namespace subspace::gan {

namespace {

// log(cosh(x)) without overflow for large |x|.
double logcosh(double x) {
    double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

void check_player_dims(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w,
                       const GanConfig& cfg) {
    if (v.rows() != cfg.n || v.cols() != cfg.p || w.rows() != cfg.n ||
        w.cols() != cfg.q) {
        throw std::invalid_argument("gan: player matrix shape mismatch");
    }
}

void check_sample_dims(const Eigen::VectorXd& y, const Eigen::VectorXd& y_fake,
                       const GanConfig& cfg) {
    if (y.size() != cfg.n || y_fake.size() != cfg.n) {
        throw std::invalid_argument("gan: sample dimension mismatch");
    }
}

// Effective large-lambda damping L = -diag(R R^T Lambda-tilde).
Eigen::VectorXd damping(const Eigen::MatrixXd& r, const GanConfig& cfg) {
    return -(r.array().square().rowwise().sum() * cfg.gen_cov().array());
}

}  // namespace

GanConfig make_gan_config(Eigen::Index n, Eigen::Index d, Eigen::Index p,
                          Eigen::Index q, double tau, double tau_tilde,
                          double lambda, double gen_noise,
                          Eigen::VectorXd gen_cov_sqrt) {
    if (!(1 <= d && 1 <= q && d <= p && q <= p && p <= n)) {
        throw std::invalid_argument(
            "gan config: need 1 <= d, q <= p <= n");
    }
    if (tau < 0.0 || tau_tilde < 0.0) {
        throw std::invalid_argument("gan config: learning rates must be >= 0");
    }
    if (!(lambda > 0.0)) {  // infinity passes, NaN and <= 0 do not
        throw std::invalid_argument("gan config: lambda must be > 0 or infinite");
    }
    if (gen_noise < 0.0) {
        throw std::invalid_argument("gan config: gen_noise must be >= 0");
    }
    if (gen_cov_sqrt.size() != p || (gen_cov_sqrt.array() <= 0.0).any()) {
        throw std::invalid_argument(
            "gan config: gen_cov_sqrt needs p positive entries");
    }
    GanConfig cfg;
    cfg.n = n;
    cfg.d = d;
    cfg.p = p;
    cfg.q = q;
    cfg.tau = tau;
    cfg.tau_tilde = tau_tilde;
    cfg.lambda = lambda;
    cfg.gen_noise = gen_noise;
    cfg.gen_cov_sqrt = std::move(gen_cov_sqrt);
    return cfg;
}

Sample sample_generator(const Eigen::MatrixXd& v, const GanConfig& cfg,
                        RandomStream& rng) {
    if (v.rows() != cfg.n || v.cols() != cfg.p) {
        throw std::invalid_argument("gan: generator matrix shape mismatch");
    }
    Sample s;
    s.latent.resize(cfg.p);
    for (Eigen::Index i = 0; i < cfg.p; ++i) {
        s.latent(i) = cfg.gen_cov_sqrt(i) * rng.gaussian();
    }
    s.value.noalias() = v * s.latent;
    if (cfg.gen_noise > 0.0) {
        double scale = std::sqrt(cfg.gen_noise);
        for (Eigen::Index i = 0; i < cfg.n; ++i) {
            s.value(i) += scale * rng.gaussian();
        }
    }
    return s;
}

double loss(const Eigen::VectorXd& y, const Eigen::VectorXd& y_fake,
            const Eigen::MatrixXd& v, const Eigen::MatrixXd& w,
            const GanConfig& cfg) {
    if (cfg.infinite_lambda()) {
        throw std::invalid_argument(
            "gan loss: undefined at infinite lambda (use the projected mode)");
    }
    check_player_dims(v, w, cfg);
    check_sample_dims(y, y_fake, cfg);

    double data_term = 0.5 * (w.transpose() * y).squaredNorm() -
                       0.5 * (w.transpose() * y_fake).squaredNorm();

    auto penalty = [&](const Eigen::MatrixXd& m) {
        Eigen::MatrixXd g = m.transpose() * m;
        g.diagonal().array() -= 1.0;
        double sum = 0.0;
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            for (Eigen::Index i = 0; i < g.rows(); ++i) {
                sum += logcosh(g(i, j));
            }
        }
        return sum;
    };
    return data_term - 0.5 * cfg.lambda * penalty(w) +
           0.5 * cfg.lambda * penalty(v);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> loss_gradients(
    const Eigen::VectorXd& y, const Eigen::VectorXd& y_fake,
    const Eigen::VectorXd& latent_fake, const Eigen::MatrixXd& v,
    const Eigen::MatrixXd& w, const GanConfig& cfg) {
    if (cfg.infinite_lambda()) {
        throw std::invalid_argument(
            "gan gradients: undefined at infinite lambda");
    }
    check_player_dims(v, w, cfg);
    check_sample_dims(y, y_fake, cfg);
    if (latent_fake.size() != cfg.p) {
        throw std::invalid_argument("gan: latent_fake must have length p");
    }

    Eigen::MatrixXd gram_w = w.transpose() * w;
    gram_w.diagonal().array() -= 1.0;
    Eigen::MatrixXd gram_v = v.transpose() * v;
    gram_v.diagonal().array() -= 1.0;

    Eigen::MatrixXd grad_w =
        y * (y.transpose() * w) - y_fake * (y_fake.transpose() * w) -
        cfg.lambda * w * gram_w.array().tanh().matrix();
    Eigen::MatrixXd grad_v =
        -(w * (w.transpose() * y_fake)) * latent_fake.transpose() +
        cfg.lambda * v * gram_v.array().tanh().matrix();
    return {std::move(grad_v), std::move(grad_w)};
}

GanState sgd_step(const GanState& state, const Eigen::VectorXd& y,
                  const Eigen::VectorXd& y_fake,
                  const Eigen::VectorXd& latent_fake, const GanConfig& cfg) {
    check_player_dims(state.generator, state.discriminator, cfg);
    check_sample_dims(y, y_fake, cfg);
    if (latent_fake.size() != cfg.p) {
        throw std::invalid_argument("gan: latent_fake must have length p");
    }

    const Eigen::MatrixXd& v = state.generator;
    const Eigen::MatrixXd& w = state.discriminator;
    GanState next;
    next.step = state.step + 1;

    if (cfg.infinite_lambda()) {
        // Hard-constraint mode: project the discriminator back onto the
        // Stiefel manifold, and damp the generator by how much of it the
        // discriminator has already caught (the large-lambda limit of the
        // penalty gradient). Both players read the step-k state.
        Eigen::MatrixXd w_raw =
            w + (cfg.tau / static_cast<double>(cfg.n)) *
                    (y * (y.transpose() * w) -
                     y_fake * (y_fake.transpose() * w));
        next.discriminator = geometry::orthonormalize(w_raw);
        Eigen::MatrixXd r = v.transpose() * w;
        next.generator =
            v + (cfg.tau_tilde / static_cast<double>(cfg.n)) *
                    ((w * (w.transpose() * y_fake)) * latent_fake.transpose() +
                     v * damping(r, cfg).asDiagonal());
    } else {
        auto [grad_v, grad_w] = loss_gradients(y, y_fake, latent_fake, v, w, cfg);
        next.discriminator =
            w + (cfg.tau / static_cast<double>(cfg.n)) * grad_w;
        next.generator =
            v - (cfg.tau_tilde / static_cast<double>(cfg.n)) * grad_v;
    }
    return next;
}

GanState train(GanState state, const SpikedModel& true_model,
               const GanConfig& cfg, long steps, TrajectoryRecorder& recorder,
               RandomStream& rng) {
    if (steps < 0) throw std::invalid_argument("gan train: steps must be >= 0");
    if (recorder.record_every < 1) {
        throw std::invalid_argument("gan train: record_every must be >= 1");
    }
    if (true_model.ambient_dim() != cfg.n || true_model.rank() != cfg.d) {
        throw std::invalid_argument("gan train: model does not match config");
    }
    check_player_dims(state.generator, state.discriminator, cfg);

    const double n = static_cast<double>(cfg.n);
    auto snapshot = [&](double t) {
        MicroState micro{true_model.basis, state.generator,
                         state.discriminator};
        recorder.points.push_back({t, macro_state(micro)});
    };
    if (steps > 0) snapshot(static_cast<double>(state.step) / n);

    for (long k = 1; k <= steps; ++k) {
        Sample real = sample(true_model, rng);
        Sample fake = sample_generator(state.generator, cfg, rng);
        state = sgd_step(state, real.value, fake.value, fake.latent, cfg);
        if (k % recorder.record_every == 0 || k == steps) {
            snapshot(static_cast<double>(state.step) / n);
        }
    }
    return state;
}

DriftReport drift_check(const GanState& state, const SpikedModel& true_model,
                        const GanConfig& cfg, long mc_samples,
                        RandomStream& rng) {
    if (!cfg.infinite_lambda()) {
        throw std::invalid_argument(
            "drift_check: closed-form drift known only for infinite lambda");
    }
    if (mc_samples < 10000) {
        throw std::invalid_argument("drift_check: need mc_samples >= 10^4");
    }
    if (true_model.ambient_dim() != cfg.n || true_model.rank() != cfg.d) {
        throw std::invalid_argument("drift_check: model does not match config");
    }
    check_player_dims(state.generator, state.discriminator, cfg);
    Eigen::MatrixXd gram =
        state.discriminator.transpose() * state.discriminator;
    gram.diagonal().array() -= 1.0;
    if (gram.norm() > 1e-8) {
        throw std::invalid_argument(
            "drift_check: discriminator must be orthonormal (the analytic "
            "drift assumes the projected mode's invariant)");
    }

    MicroState micro{true_model.basis, state.generator, state.discriminator};
    MacroState mac = macro_state(micro);

    // Closed-form conditional expectations, shared with the macroscopic flow.
    auto sys = ode::make_ode_system(
        true_model.signal_cov(), cfg.gen_cov(),
        cfg.tau > 0.0 ? cfg.tau : 1.0,
        cfg.tau_tilde > 0.0 ? cfg.tau_tilde : 1.0, true_model.noise_level,
        cfg.gen_noise);
    ode::OdeCoefficients coef = ode::coefficients(mac, sys);

    const double n = static_cast<double>(cfg.n);
    DriftReport rep;
    rep.analytic_v =
        (cfg.tau_tilde / n) *
        (state.discriminator * (cfg.gen_cov().asDiagonal() * mac.r).transpose() +
         state.generator * coef.l.asDiagonal());
    rep.analytic_q =
        (cfg.tau / n) *
        (true_model.signal_cov().asDiagonal() * mac.q -
         mac.p * (cfg.gen_cov().asDiagonal() * mac.r) + mac.q * coef.h);

    Eigen::MatrixXd sum_v = Eigen::MatrixXd::Zero(cfg.n, cfg.p);
    Eigen::MatrixXd sumsq_v = sum_v;
    Eigen::MatrixXd sum_q = Eigen::MatrixXd::Zero(cfg.d, cfg.q);
    Eigen::MatrixXd sumsq_q = sum_q;

    for (long i = 0; i < mc_samples; ++i) {
        Sample real = sample(true_model, rng);
        Sample fake = sample_generator(state.generator, cfg, rng);
        GanState next = sgd_step(state, real.value, fake.value, fake.latent, cfg);
        Eigen::MatrixXd dv = next.generator - state.generator;
        Eigen::MatrixXd dq = true_model.basis.transpose() *
                             (next.discriminator - state.discriminator);
        sum_v += dv;
        sumsq_v += dv.cwiseProduct(dv);
        sum_q += dq;
        sumsq_q += dq.cwiseProduct(dq);
    }

    const double m = static_cast<double>(mc_samples);
    rep.empirical_v = sum_v / m;
    rep.empirical_q = sum_q / m;

    auto max_se = [&](const Eigen::MatrixXd& sum, const Eigen::MatrixXd& sumsq) {
        Eigen::MatrixXd var =
            (sumsq - sum.cwiseProduct(sum) / m) / std::max(m - 1.0, 1.0);
        return std::sqrt(var.maxCoeff() / m);
    };
    rep.noise_scale = std::max(max_se(sum_v, sumsq_v), max_se(sum_q, sumsq_q));
    rep.max_abs_error =
        std::max((rep.empirical_v - rep.analytic_v).cwiseAbs().maxCoeff(),
                 (rep.empirical_q - rep.analytic_q).cwiseAbs().maxCoeff());
    return rep;
}

}  // namespace subspace::gan
