#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "subspace/gan.hpp"
#include "subspace/geometry.hpp"
#include "subspace/model.hpp"
#include "subspace/rng.hpp"

using namespace subspace;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                              RandomStream& rng, double scale = 1.0) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = scale * rng.gaussian();
    return m;
}

Eigen::VectorXd random_vector(Eigen::Index n, RandomStream& rng,
                              double scale = 1.0) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = scale * rng.gaussian();
    return v;
}

}  // namespace

TEST_CASE("config construction enforces the shape and range rules") {
    Eigen::VectorXd cs2 = Eigen::VectorXd::Ones(2);
    CHECK_NOTHROW((void)gan::make_gan_config(8, 2, 2, 2, 0.2, 0.04, 1.0, 0.0, cs2));
    CHECK_NOTHROW((void)gan::make_gan_config(8, 2, 2, 1, 0.0, 0.0, kInf, 2.0, cs2));
    // d > p, q > p, p > n
    CHECK_THROWS_AS((void)gan::make_gan_config(8, 3, 2, 2, 0.2, 0.04, 1, 0, cs2),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)gan::make_gan_config(8, 2, 2, 3, 0.2, 0.04, 1, 0, cs2),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        (void)gan::make_gan_config(1, 2, 2, 2, 0.2, 0.04, 1, 0, cs2),
        std::invalid_argument);
    CHECK_THROWS_AS(
        (void)gan::make_gan_config(8, 2, 2, 2, -0.1, 0.04, 1, 0, cs2),
        std::invalid_argument);
    CHECK_THROWS_AS(
        (void)gan::make_gan_config(8, 2, 2, 2, 0.2, 0.04, 0.0, 0, cs2),
        std::invalid_argument);
    CHECK_THROWS_AS(
        (void)gan::make_gan_config(8, 2, 2, 2, 0.2, 0.04, 1, -1, cs2),
        std::invalid_argument);
    CHECK_THROWS_AS((void)gan::make_gan_config(8, 2, 2, 2, 0.2, 0.04, 1, 0,
                                               Eigen::VectorXd::Ones(3)),
                    std::invalid_argument);
    Eigen::VectorXd bad = cs2;
    bad(1) = 0.0;
    CHECK_THROWS_AS((void)gan::make_gan_config(8, 2, 2, 2, 0.2, 0.04, 1, 0, bad),
                    std::invalid_argument);
}

TEST_CASE("loss vanishes under exact symmetric cancellation") {
    const Eigen::Index n = 6;
    auto cfg = gan::make_gan_config(n, 2, 2, 2, 0.2, 0.04, 3.0, 0.0,
                                    Eigen::VectorXd::Ones(2));
    // Standard-basis columns: the Gram residuals are exactly zero.
    Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n, 2);
    auto rng = RandomStream(31, 0);
    Eigen::VectorXd y = random_vector(n, rng);
    CHECK(gan::loss(y, y, w, w, cfg) == 0.0);
}

TEST_CASE("loss at a dead discriminator is pure penalty") {
    const Eigen::Index n = 6, q = 2;
    const double lambda = 2.0;
    auto cfg = gan::make_gan_config(n, 2, 2, q, 0.2, 0.04, lambda, 0.0,
                                    Eigen::VectorXd::Ones(2));
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, q);
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, 2);
    auto rng = RandomStream(32, 0);
    Eigen::VectorXd y = random_vector(n, rng);
    Eigen::VectorXd yf = random_vector(n, rng);
    // W^T W - I = -I: q diagonal logcosh(1) terms survive in the W penalty;
    // the V penalty is exactly zero.
    double expected = -0.5 * lambda * q * std::log(std::cosh(1.0));
    CHECK(gan::loss(y, yf, v, w, cfg) ==
          doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("loss matches an independent term-by-term evaluation") {
    const Eigen::Index n = 4, d = 2, p = 2, q = 2;
    const double lambda = 1.3;
    auto cfg = gan::make_gan_config(n, d, p, q, 0.2, 0.04, lambda, 0.0,
                                    Eigen::VectorXd::Ones(p));
    auto rng = RandomStream(33, 0);
    Eigen::MatrixXd v = random_matrix(n, p, rng, 0.7);
    Eigen::MatrixXd w = random_matrix(n, q, rng, 0.7);
    Eigen::VectorXd y = random_vector(n, rng);
    Eigen::VectorXd yf = random_vector(n, rng);

    // Straight-line re-implementation with scalar loops and the naive
    // log(cosh(x)), sharing no code with the module.
    double data = 0.0;
    for (Eigen::Index j = 0; j < q; ++j) {
        double wy = 0.0, wyf = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            wy += w(i, j) * y(i);
            wyf += w(i, j) * yf(i);
        }
        data += 0.5 * wy * wy - 0.5 * wyf * wyf;
    }
    auto penalty = [&](const Eigen::MatrixXd& m) {
        double sum = 0.0;
        for (Eigen::Index a = 0; a < m.cols(); ++a) {
            for (Eigen::Index b = 0; b < m.cols(); ++b) {
                double g = 0.0;
                for (Eigen::Index i = 0; i < m.rows(); ++i)
                    g += m(i, a) * m(i, b);
                if (a == b) g -= 1.0;
                sum += std::log(std::cosh(g));
            }
        }
        return sum;
    };
    double expected = data - 0.5 * lambda * penalty(w) + 0.5 * lambda * penalty(v);
    CHECK(gan::loss(y, yf, v, w, cfg) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("loss and gradients refuse the infinite-lambda sentinel") {
    const Eigen::Index n = 4;
    auto cfg = gan::make_gan_config(n, 1, 1, 1, 0.2, 0.04, kInf, 0.0,
                                    Eigen::VectorXd::Ones(1));
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, 1);
    Eigen::VectorXd y = Eigen::VectorXd::Ones(n);
    CHECK_THROWS_AS((void)gan::loss(y, y, v, v, cfg), std::invalid_argument);
    CHECK_THROWS_AS(
        (void)gan::loss_gradients(y, y, Eigen::VectorXd::Ones(1), v, v, cfg),
        std::invalid_argument);
}

TEST_CASE("analytic gradients agree with central finite differences") {
    const Eigen::Index n = 8, d = 2, p = 2, q = 2;
    const double h = 1e-5;
    auto cfg = gan::make_gan_config(n, d, p, q, 0.2, 0.04, 1.0, 0.5,
                                    Eigen::VectorXd::Ones(p));
    auto rng = RandomStream(34, 0);

    for (int inst = 0; inst < 50; ++inst) {
        Eigen::MatrixXd v = random_matrix(n, p, rng, 0.8);
        Eigen::MatrixXd w = random_matrix(n, q, rng, 0.8);
        Eigen::VectorXd y = random_vector(n, rng);
        Eigen::VectorXd latent = random_vector(p, rng);
        Eigen::VectorXd ambient = random_vector(n, rng);
        auto fake_of = [&](const Eigen::MatrixXd& vv) -> Eigen::VectorXd {
            return vv * latent + std::sqrt(cfg.gen_noise) * ambient;
        };
        Eigen::VectorXd yf = fake_of(v);

        auto [gv, gw] = gan::loss_gradients(y, yf, latent, v, w, cfg);

        // The generated sample is a function of V with the latent and the
        // ambient noise held fixed, so V-perturbations move y_fake too.
        for (Eigen::Index j = 0; j < p; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                Eigen::MatrixXd vp = v, vm = v;
                vp(i, j) += h;
                vm(i, j) -= h;
                double num = (gan::loss(y, fake_of(vp), vp, w, cfg) -
                              gan::loss(y, fake_of(vm), vm, w, cfg)) /
                             (2.0 * h);
                CHECK(std::abs(num - gv(i, j)) <=
                      1e-5 * std::max(1.0, std::abs(gv(i, j))));
            }
        }
        for (Eigen::Index j = 0; j < q; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                Eigen::MatrixXd wp = w, wm = w;
                wp(i, j) += h;
                wm(i, j) -= h;
                double num =
                    (gan::loss(y, yf, v, wp, cfg) - gan::loss(y, yf, v, wm, cfg)) /
                    (2.0 * h);
                CHECK(std::abs(num - gw(i, j)) <=
                      1e-5 * std::max(1.0, std::abs(gw(i, j))));
            }
        }
    }
}

TEST_CASE("one finite-lambda step matches the hand-evaluated formulas") {
    const Eigen::Index n = 3;
    const double tau = 0.3, tau_tilde = 0.11, lambda = 0.7;
    Eigen::VectorXd cs = Eigen::VectorXd::Ones(1);
    auto cfg = gan::make_gan_config(n, 1, 1, 1, tau, tau_tilde, lambda, 0.0, cs);

    Eigen::VectorXd v(n), w(n), y(n), yf(n);
    v << 0.5, -0.2, 0.1;
    w << 0.8, 0.3, -0.4;
    y << 1.2, -0.7, 0.5;
    yf << 0.4, 0.9, -0.3;
    const double latent = 0.6;

    // Straight-line scalar evaluation of the two gradients and the update.
    double wty = w.dot(y), wtyf = w.dot(yf);
    double tw = std::tanh(w.dot(w) - 1.0), tv = std::tanh(v.dot(v) - 1.0);
    Eigen::VectorXd grad_w = y * wty - yf * wtyf - lambda * w * tw;
    Eigen::VectorXd grad_v = -w * wtyf * latent + lambda * v * tv;
    Eigen::VectorXd w_next = w + (tau / double(n)) * grad_w;
    Eigen::VectorXd v_next = v - (tau_tilde / double(n)) * grad_v;

    gan::GanState st{v, w, 7};
    Eigen::VectorXd lat(1);
    lat << latent;
    gan::GanState out = gan::sgd_step(st, y, yf, lat, cfg);
    CHECK(out.step == 8);
    CHECK((out.discriminator.col(0) - w_next).norm() <= 1e-12);
    CHECK((out.generator.col(0) - v_next).norm() <= 1e-12);
}

TEST_CASE("zero learning rates freeze the state") {
    const Eigen::Index n = 10;
    auto rng = RandomStream(35, 0);
    Eigen::MatrixXd v = random_matrix(n, 2, rng, 0.5);
    Eigen::MatrixXd w = geometry::orthonormalize(random_matrix(n, 2, rng));
    Eigen::VectorXd y = random_vector(n, rng);
    Eigen::VectorXd yf = random_vector(n, rng);
    Eigen::VectorXd lat = random_vector(2, rng);

    auto cfg_fin = gan::make_gan_config(n, 2, 2, 2, 0.0, 0.0, 1.0, 0.0,
                                        Eigen::VectorXd::Ones(2));
    gan::GanState st{v, w, 0};
    gan::GanState out = gan::sgd_step(st, y, yf, lat, cfg_fin);
    CHECK(out.generator == v);  // bitwise: the update is exactly zero
    CHECK(out.discriminator == w);

    // In the projected mode the discriminator passes once more through the
    // orthonormalizer; idempotence holds to roundoff.
    auto cfg_inf = gan::make_gan_config(n, 2, 2, 2, 0.0, 0.0, kInf, 0.0,
                                        Eigen::VectorXd::Ones(2));
    gan::GanState out2 = gan::sgd_step(st, y, yf, lat, cfg_inf);
    CHECK(out2.generator == v);
    CHECK((out2.discriminator - w).norm() <= 1e-13);
}

TEST_CASE("projected mode keeps the discriminator orthonormal") {
    const Eigen::Index n = 30;
    auto rng = RandomStream(36, 0);
    auto cfg = gan::make_gan_config(n, 2, 3, 2, 0.4, 0.1, kInf, 1.0,
                                    Eigen::VectorXd::Ones(3));
    gan::GanState st{random_matrix(n, 3, rng, 0.3),
                     geometry::orthonormalize(random_matrix(n, 2, rng)), 0};
    for (int k = 0; k < 50; ++k) {
        Eigen::VectorXd y = random_vector(n, rng);
        auto fake = gan::sample_generator(st.generator, cfg, rng);
        st = gan::sgd_step(st, y, fake.value, fake.latent, cfg);
        Eigen::MatrixXd gram =
            st.discriminator.transpose() * st.discriminator;
        gram.diagonal().array() -= 1.0;
        CHECK(gram.norm() < 1e-8);
    }
}

TEST_CASE("single-feature update equals the scalar projection form") {
    const Eigen::Index n = 20;
    const double tau = 0.25, tau_tilde = 0.07;
    Eigen::VectorXd cs(2);
    cs << 1.2, 0.9;
    auto cfg = gan::make_gan_config(n, 2, 2, 1, tau, tau_tilde, kInf, 0.8, cs);
    auto rng = RandomStream(37, 0);

    Eigen::MatrixXd v = random_matrix(n, 2, rng, 0.4);
    Eigen::VectorXd w = geometry::orthonormalize(random_matrix(n, 1, rng));
    gan::GanState st{v, w, 0};

    Eigen::MatrixXd v_ref = v;
    Eigen::VectorXd w_ref = w;
    auto rng_step = RandomStream(38, 0);
    for (int k = 0; k < 200; ++k) {
        Eigen::VectorXd y = random_vector(n, rng_step);
        auto fake = gan::sample_generator(st.generator, cfg, rng_step);

        // hand-coded scalar-projection reference, kept in lockstep
        Eigen::VectorXd wr =
            w_ref + (tau / double(n)) * ((y.dot(w_ref)) * y -
                                         (fake.value.dot(w_ref)) * fake.value);
        wr /= wr.norm();
        Eigen::VectorXd r = v_ref.transpose() * w_ref;  // p x 1
        Eigen::VectorXd l =
            -(r.array().square() * cfg.gen_cov().array());
        Eigen::MatrixXd vr =
            v_ref + (tau_tilde / double(n)) *
                        ((w_ref * (w_ref.dot(fake.value))) *
                             fake.latent.transpose() +
                         v_ref * l.asDiagonal());

        st = gan::sgd_step(st, y, fake.value, fake.latent, cfg);
        w_ref = wr;
        v_ref = vr;
        CHECK((st.discriminator.col(0) - w_ref).norm() <= 1e-12);
        CHECK((st.generator - v_ref).norm() <= 1e-12);
    }
}

TEST_CASE("training loop records on the t = k/n axis and replays bitwise") {
    const Eigen::Index n = 50, d = 2;
    auto rng = RandomStream(39, 0);
    Eigen::MatrixXd u = scaled_random_init(n, d, 1.0, rng, true);
    Eigen::VectorXd cs(d);
    cs << std::sqrt(3.0), std::sqrt(5.0);
    auto model = make_spiked_model(u, cs, 2.0);
    auto cfg = gan::make_gan_config(n, d, d, d, 0.2, 0.04, kInf, 2.0, cs);

    Eigen::MatrixXd p0 = 0.1 * Eigen::MatrixXd::Identity(d, d);
    auto micro = matched_init(u, p0, p0, Eigen::MatrixXd::Identity(d, d), rng);
    gan::GanState st0{micro.v, micro.w, 0};

    SUBCASE("zero steps change nothing and record nothing") {
        gan::TrajectoryRecorder rec;
        auto sr = RandomStream(40, 0);
        gan::GanState out = gan::train(st0, model, cfg, 0, rec, sr);
        CHECK(out.generator == st0.generator);
        CHECK(out.discriminator == st0.discriminator);
        CHECK(rec.points.empty());
    }

    SUBCASE("time axis and recording cadence") {
        gan::TrajectoryRecorder rec;
        rec.record_every = 10;
        auto sr = RandomStream(41, 0);
        gan::GanState out = gan::train(st0, model, cfg, 100, rec, sr);
        CHECK(out.step == 100);
        CHECK(rec.points.size() == 11);  // t=0 plus every 10th of 100 steps
        CHECK(rec.points.front().t == 0.0);
        CHECK(rec.points.back().t == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(rec.points[1].t == doctest::Approx(0.2).epsilon(1e-12));

        gan::TrajectoryRecorder rec7;
        rec7.record_every = 7;
        auto sr7 = RandomStream(41, 0);
        (void)gan::train(st0, model, cfg, 100, rec7, sr7);
        // t=0, every 7th step, and the off-grid final step
        CHECK(rec7.points.size() == 16);
        CHECK(rec7.points.back().t == doctest::Approx(2.0).epsilon(1e-12));
    }

    SUBCASE("identical seeds give bit-identical runs") {
        gan::TrajectoryRecorder rec_a, rec_b;
        auto sa = RandomStream(42, 5);
        auto sb = RandomStream(42, 5);
        gan::GanState a = gan::train(st0, model, cfg, 200, rec_a, sa);
        gan::GanState b = gan::train(st0, model, cfg, 200, rec_b, sb);
        CHECK(a.generator == b.generator);
        CHECK(a.discriminator == b.discriminator);
        REQUIRE(rec_a.points.size() == rec_b.points.size());
        for (size_t i = 0; i < rec_a.points.size(); ++i) {
            CHECK(rec_a.points[i].t == rec_b.points[i].t);
            CHECK(rec_a.points[i].state.p == rec_b.points[i].state.p);
            CHECK(rec_a.points[i].state.q == rec_b.points[i].state.q);
            CHECK(rec_a.points[i].state.r == rec_b.points[i].state.r);
            CHECK(rec_a.points[i].state.s == rec_b.points[i].state.s);
            CHECK(rec_a.points[i].state.z == rec_b.points[i].state.z);
        }
    }

    SUBCASE("the recorded Z block sticks to the identity") {
        gan::TrajectoryRecorder rec;
        rec.record_every = 25;
        auto sr = RandomStream(43, 0);
        (void)gan::train(st0, model, cfg, 500, rec, sr);
        for (const auto& pt : rec.points) {
            CHECK((pt.state.z - Eigen::MatrixXd::Identity(d, d)).norm() <
                  1e-10);
        }
    }
}

TEST_CASE("drift check: a dead generator has zero expected generator drift") {
    const Eigen::Index n = 100;
    auto rng = RandomStream(44, 0);
    Eigen::MatrixXd u = scaled_random_init(n, 2, 1.0, rng, true);
    Eigen::VectorXd cs(2);
    cs << 1.3, 0.9;
    auto model = make_spiked_model(u, cs, 1.0);
    auto cfg = gan::make_gan_config(n, 2, 2, 2, 0.2, 0.04, kInf, 0.7, cs);

    gan::GanState st{Eigen::MatrixXd::Zero(n, 2),
                     geometry::orthonormalize(random_matrix(n, 2, rng)), 0};
    auto sr = RandomStream(45, 0);
    auto rep = gan::drift_check(st, model, cfg, 20000, sr);
    CHECK(rep.analytic_v.norm() == 0.0);
    CHECK(rep.empirical_v.cwiseAbs().maxCoeff() < 5.0 * rep.noise_scale);
}

TEST_CASE("drift check: scalar closed forms match a hand evaluation") {
    const Eigen::Index n = 100;
    const double tau = 0.25, tau_tilde = 0.1, eta_t = 0.8, eta_g = 0.3;
    const double lam = 2.25, lam_g = 1.21;  // covariances themselves

    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, 1);
    u(0, 0) = 1.0;
    Eigen::VectorXd cs(1), cs_g(1);
    cs << std::sqrt(lam);
    cs_g << std::sqrt(lam_g);
    auto model = make_spiked_model(u, cs, eta_t);
    auto cfg = gan::make_gan_config(n, 1, 1, 1, tau, tau_tilde, kInf, eta_g, cs_g);

    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, 1);
    v(0, 0) = 0.4;
    v(1, 0) = 0.2;
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, 1);
    w(0, 0) = 1.0 / std::sqrt(2.0);
    w(2, 0) = 1.0 / std::sqrt(2.0);
    gan::GanState st{v, w, 0};

    auto sr = RandomStream(46, 0);
    auto rep = gan::drift_check(st, model, cfg, 10000, sr);

    double p = 0.4, q = 1.0 / std::sqrt(2.0), r = v.col(0).dot(w.col(0));
    double l = -lam_g * r * r;
    double h = (1.0 - tau * eta_g / 2.0) * lam_g * r * r -
               (1.0 + tau * eta_t / 2.0) * lam * q * q -
               tau * (eta_g * eta_g + eta_t * eta_t) / 2.0;
    Eigen::VectorXd av = (tau_tilde / double(n)) *
                         (lam_g * r * w.col(0) + l * v.col(0));
    double aq = (tau / double(n)) * (lam * q - p * lam_g * r + q * h);

    CHECK((rep.analytic_v.col(0) - av).norm() <= 1e-12);
    CHECK(rep.analytic_q(0, 0) == doctest::Approx(aq).epsilon(1e-12));
    CHECK(rep.max_abs_error < 5.0 * rep.noise_scale);
}

TEST_CASE("drift check: accuracy scales as one over root samples") {
    const Eigen::Index n = 400;
    auto rng = RandomStream(91, 0);
    Eigen::MatrixXd u = scaled_random_init(n, 2, 1.0, rng, true);
    Eigen::VectorXd cs(2);
    cs << std::pow(3.0, 0.25), std::pow(5.0, 0.25);
    auto model = make_spiked_model(u, cs, 2.0);

    Eigen::MatrixXd p0(2, 2), q0(2, 2);
    p0 << 0.3, 0.05, -0.02, 0.25;
    q0 << 0.28, -0.04, 0.03, 0.31;
    auto micro = matched_init(u, p0, q0, Eigen::MatrixXd::Identity(2, 2), rng);
    auto cfg = gan::make_gan_config(n, 2, 2, 2, 0.2, 0.04, kInf, 2.0, cs);
    gan::GanState st{micro.v, micro.w, 0};

    double err[3];
    long mcs[3] = {10000, 40000, 160000};
    for (int i = 0; i < 3; ++i) {
        auto sr = RandomStream(92, 7);
        auto rep = gan::drift_check(st, model, cfg, mcs[i], sr);
        err[i] = rep.max_abs_error;
        CHECK(rep.max_abs_error < 5.0 * rep.noise_scale);
    }
    // nominal ratio 2 per quadrupling, factor-2 tolerance on each side
    CHECK(err[0] / err[1] >= 1.0);
    CHECK(err[0] / err[1] <= 4.0);
    CHECK(err[1] / err[2] >= 1.0);
    CHECK(err[1] / err[2] <= 4.0);
}

TEST_CASE("drift check rejects misuse") {
    const Eigen::Index n = 50;
    auto rng = RandomStream(47, 0);
    Eigen::MatrixXd u = scaled_random_init(n, 1, 1.0, rng, true);
    auto model = make_spiked_model(u, Eigen::VectorXd::Ones(1), 0.5);
    Eigen::MatrixXd v = random_matrix(n, 1, rng, 0.3);
    Eigen::MatrixXd w = geometry::orthonormalize(random_matrix(n, 1, rng));
    gan::GanState st{v, w, 0};
    auto sr = RandomStream(48, 0);

    auto cfg_fin = gan::make_gan_config(n, 1, 1, 1, 0.2, 0.04, 1.0, 0.5,
                                        Eigen::VectorXd::Ones(1));
    CHECK_THROWS_AS((void)gan::drift_check(st, model, cfg_fin, 10000, sr),
                    std::invalid_argument);

    auto cfg = gan::make_gan_config(n, 1, 1, 1, 0.2, 0.04, kInf, 0.5,
                                    Eigen::VectorXd::Ones(1));
    CHECK_THROWS_AS((void)gan::drift_check(st, model, cfg, 9999, sr),
                    std::invalid_argument);

    gan::GanState skew{v, 2.0 * w, 0};  // not orthonormal
    CHECK_THROWS_AS((void)gan::drift_check(skew, model, cfg, 10000, sr),
                    std::invalid_argument);
}
