#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "subspace/common.hpp"
#include "subspace/geometry.hpp"
#include "subspace/model.hpp"
#include "subspace/rng.hpp"

using subspace::RandomStream;

namespace {

Eigen::MatrixXd random_orthonormal(Eigen::Index n, Eigen::Index k,
                                   RandomStream& rng) {
    Eigen::MatrixXd m(n, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = rng.gaussian();
    return subspace::geometry::orthonormalize(m);
}

Eigen::MatrixXd random_matrix(Eigen::Index n, Eigen::Index k,
                              RandomStream& rng) {
    Eigen::MatrixXd m(n, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = rng.gaussian();
    return m;
}

}  // namespace

TEST_CASE("model construction validates its inputs") {
    RandomStream rng(11, 0);
    Eigen::MatrixXd u = random_orthonormal(6, 2, rng);
    Eigen::VectorXd lam(2);
    lam << 1.0, 2.0;

    CHECK_NOTHROW(subspace::make_spiked_model(u, lam, 0.5));
    CHECK_NOTHROW(subspace::make_spiked_model(u, lam, 0.0));

    // basis that is not orthonormal
    CHECK_THROWS_AS(subspace::make_spiked_model(2.0 * u, lam, 0.5),
                    std::invalid_argument);
    // covariance size mismatch
    Eigen::VectorXd lam3 = Eigen::VectorXd::Ones(3);
    CHECK_THROWS_AS(subspace::make_spiked_model(u, lam3, 0.5),
                    std::invalid_argument);
    // non-positive covariance entry
    Eigen::VectorXd bad = lam;
    bad(1) = 0.0;
    CHECK_THROWS_AS(subspace::make_spiked_model(u, bad, 0.5),
                    std::invalid_argument);
    // negative noise
    CHECK_THROWS_AS(subspace::make_spiked_model(u, lam, -0.1),
                    std::invalid_argument);
    // more columns than rows
    Eigen::MatrixXd fat = random_matrix(2, 4, rng);
    Eigen::VectorXd lam4 = Eigen::VectorXd::Ones(4);
    CHECK_THROWS_AS(subspace::make_spiked_model(fat, lam4, 0.5),
                    std::invalid_argument);
}

TEST_CASE("signal covariance is the elementwise square of the stored root") {
    RandomStream rng(12, 0);
    Eigen::MatrixXd u = random_orthonormal(5, 2, rng);
    Eigen::VectorXd root(2);
    root << std::sqrt(3.0), std::sqrt(5.0);
    auto model = subspace::make_spiked_model(u, root, 1.0);
    Eigen::VectorXd cov = model.signal_cov();
    CHECK(cov(0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(cov(1) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("noise-free samples lie in the planted subspace") {
    RandomStream rng(13, 0);
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(4, 1);
    u(0, 0) = 1.0;
    Eigen::VectorXd root(1);
    root << 2.0;
    auto model = subspace::make_spiked_model(u, root, 0.0);

    for (int rep = 0; rep < 20; ++rep) {
        auto s = subspace::sample(model, rng);
        REQUIRE(s.value.size() == 4);
        REQUIRE(s.latent.size() == 1);
        // value = latent * e1 exactly: no noise term is added at eta = 0
        CHECK(s.value(0) == s.latent(0));
        CHECK(s.value(1) == 0.0);
        CHECK(s.value(2) == 0.0);
        CHECK(s.value(3) == 0.0);
    }
}

TEST_CASE("samples are reproducible from the seed") {
    RandomStream a(55, 3), b(55, 3);
    RandomStream init(54, 0);
    Eigen::MatrixXd u = random_orthonormal(7, 2, init);
    Eigen::VectorXd root(2);
    root << 1.0, 2.0;
    auto model = subspace::make_spiked_model(u, root, 0.7);
    for (int rep = 0; rep < 10; ++rep) {
        auto sa = subspace::sample(model, a);
        auto sb = subspace::sample(model, b);
        CHECK(sa.value == sb.value);
        CHECK(sa.latent == sb.latent);
    }
}

TEST_CASE("empirical second moments match the spiked covariance") {
    RandomStream init(21, 0);
    const Eigen::Index n = 8, d = 2;
    Eigen::MatrixXd u = random_orthonormal(n, d, init);
    Eigen::VectorXd root(d);
    root << std::sqrt(3.0), std::sqrt(5.0);
    const double eta = 2.0;
    auto model = subspace::make_spiked_model(u, root, eta);

    Eigen::MatrixXd target = u * root.array().square().matrix().asDiagonal() *
                                 u.transpose() +
                             eta * Eigen::MatrixXd::Identity(n, n);

    const int trials = 100000;
    RandomStream rng(22, 0);
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd mean_sq = Eigen::MatrixXd::Zero(n, n);
    for (int t = 0; t < trials; ++t) {
        auto s = subspace::sample(model, rng);
        Eigen::MatrixXd outer = s.value * s.value.transpose();
        mean += outer;
        mean_sq += outer.cwiseProduct(outer);
    }
    mean /= trials;
    mean_sq /= trials;

    // each entry of the sample covariance sits within 4 standard errors
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            double var = mean_sq(i, j) - mean(i, j) * mean(i, j);
            double se = std::sqrt(std::max(var, 0.0) / trials);
            CHECK(std::abs(mean(i, j) - target(i, j)) <= 4.0 * se + 1e-12);
        }
    }
}

TEST_CASE("latent coordinates carry variance root^2, not root") {
    // pins the convention: the stored vector multiplies the unit normal
    // draw directly, so latent variance is its square
    RandomStream init(31, 0);
    Eigen::MatrixXd u = random_orthonormal(6, 2, init);
    Eigen::VectorXd root(2);
    root << std::pow(3.0, 0.25), std::pow(5.0, 0.25);
    auto model = subspace::make_spiked_model(u, root, 0.0);

    const int trials = 200000;
    RandomStream rng(32, 0);
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Vector2d mean_sq = Eigen::Vector2d::Zero();
    for (int t = 0; t < trials; ++t) {
        auto s = subspace::sample(model, rng);
        Eigen::Vector2d c2 = s.latent.array().square();
        mean += c2;
        mean_sq += c2.array().square().matrix();
    }
    mean /= trials;
    mean_sq /= trials;
    Eigen::Vector2d expect(std::sqrt(3.0), std::sqrt(5.0));
    for (int i = 0; i < 2; ++i) {
        double se =
            std::sqrt(std::max(mean_sq(i) - mean(i) * mean(i), 0.0) / trials);
        CHECK(std::abs(mean(i) - expect(i)) <= 4.0 * se + 1e-12);
    }
}

TEST_CASE("macro state agrees with explicit inner products") {
    RandomStream rng(41, 0);
    const Eigen::Index n = 9, d = 2, p = 3, q = 2;
    subspace::MicroState st;
    st.u = random_matrix(n, d, rng);
    st.v = random_matrix(n, p, rng);
    st.w = random_matrix(n, q, rng);

    auto m = subspace::macro_state(st);
    REQUIRE(m.p.rows() == d);
    REQUIRE(m.p.cols() == p);
    REQUIRE(m.q.rows() == d);
    REQUIRE(m.q.cols() == q);
    REQUIRE(m.r.rows() == p);
    REQUIRE(m.r.cols() == q);
    REQUIRE(m.s.rows() == p);
    REQUIRE(m.z.rows() == q);

    auto dot_cols = [&](const Eigen::MatrixXd& a, Eigen::Index i,
                        const Eigen::MatrixXd& b, Eigen::Index j) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < a.rows(); ++k) acc += a(k, i) * b(k, j);
        return acc;
    };
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < p; ++j)
            CHECK(m.p(i, j) ==
                  doctest::Approx(dot_cols(st.u, i, st.v, j)).epsilon(1e-12));
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < q; ++j)
            CHECK(m.q(i, j) ==
                  doctest::Approx(dot_cols(st.u, i, st.w, j)).epsilon(1e-12));
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < q; ++j)
            CHECK(m.r(i, j) ==
                  doctest::Approx(dot_cols(st.v, i, st.w, j)).epsilon(1e-12));
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j)
            CHECK(m.s(i, j) ==
                  doctest::Approx(dot_cols(st.v, i, st.v, j)).epsilon(1e-12));
    for (Eigen::Index i = 0; i < q; ++i)
        for (Eigen::Index j = 0; j < q; ++j)
            CHECK(m.z(i, j) ==
                  doctest::Approx(dot_cols(st.w, i, st.w, j)).epsilon(1e-12));
}

TEST_CASE("block Gram matrix of an orthonormal truth basis is PSD") {
    RandomStream rng(42, 0);
    const Eigen::Index n = 20, d = 2, p = 3, q = 3;
    subspace::MicroState st;
    st.u = random_orthonormal(n, d, rng);
    st.v = random_matrix(n, p, rng);
    st.w = random_orthonormal(n, q, rng);

    auto m = subspace::macro_state(st);
    Eigen::MatrixXd g = m.block_matrix();
    REQUIRE(g.rows() == d + p + q);

    CHECK((g.topLeftCorner(d, d) - Eigen::MatrixXd::Identity(d, d)).norm() ==
          0.0);
    CHECK((g - g.transpose()).norm() <= 1e-14 * g.norm());
    CHECK((m.z - Eigen::MatrixXd::Identity(q, q)).norm() <= 1e-10);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("scaled random init concentrates column norms at the scale") {
    RandomStream rng(51, 0);
    const Eigen::Index n = 4000;
    const double scale = 0.3;
    Eigen::MatrixXd m = subspace::scaled_random_init(n, 3, scale, rng);
    for (Eigen::Index j = 0; j < 3; ++j) {
        // column norm^2 ~ scale^2 * chi^2_n / n, relative sd sqrt(2/n)
        CHECK(m.col(j).norm() == doctest::Approx(scale).epsilon(0.1));
    }

    Eigen::MatrixXd o = subspace::scaled_random_init(n, 3, scale, rng, true);
    Eigen::MatrixXd gram = o.transpose() * o;
    CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).norm() <= 1e-12);

    CHECK_THROWS_AS(subspace::scaled_random_init(4, 5, 1.0, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(subspace::scaled_random_init(4, 2, 0.0, rng),
                    std::invalid_argument);
}

TEST_CASE("matched init hits the requested macroscopic targets") {
    RandomStream rng(61, 0);
    const Eigen::Index n = 60, d = 2, p = 2, q = 2;
    Eigen::MatrixXd u = random_orthonormal(n, d, rng);
    Eigen::MatrixXd p0 = 0.1 * Eigen::MatrixXd::Identity(d, p);
    Eigen::MatrixXd q0 = 0.1 * Eigen::MatrixXd::Identity(d, q);
    Eigen::MatrixXd s0 = Eigen::MatrixXd::Identity(p, p);

    auto st = subspace::matched_init(u, p0, q0, s0, rng);
    auto m = subspace::macro_state(st);

    CHECK((m.p - p0).norm() <= 1e-12);
    CHECK((m.q - q0).norm() <= 1e-12);
    CHECK((m.s - s0).norm() <= 1e-12);
    CHECK((m.z - Eigen::MatrixXd::Identity(q, q)).norm() <= 1e-12);
    CHECK((m.r - p0.transpose() * q0).norm() <= 1e-12);
}

TEST_CASE("matched init handles rectangular targets") {
    RandomStream rng(62, 0);
    const Eigen::Index n = 40, d = 2, p = 4, q = 3;
    Eigen::MatrixXd u = random_orthonormal(n, d, rng);
    Eigen::MatrixXd p0 = random_matrix(d, p, rng) * 0.05;
    Eigen::MatrixXd q0 = random_matrix(d, q, rng) * 0.05;
    Eigen::MatrixXd base = random_matrix(p, p, rng);
    Eigen::MatrixXd s0 =
        Eigen::MatrixXd::Identity(p, p) + 0.01 * base * base.transpose();

    auto st = subspace::matched_init(u, p0, q0, s0, rng);
    auto m = subspace::macro_state(st);

    CHECK((m.p - p0).norm() <= 1e-12);
    CHECK((m.q - q0).norm() <= 1e-12);
    CHECK((m.s - s0).norm() <= 1e-12);
    CHECK((m.z - Eigen::MatrixXd::Identity(q, q)).norm() <= 1e-12);
    CHECK((m.r - p0.transpose() * q0).norm() <= 1e-12);
}

TEST_CASE("matched init rejects unrealizable targets") {
    RandomStream rng(63, 0);
    const Eigen::Index n = 30, d = 2;
    Eigen::MatrixXd u = random_orthonormal(n, d, rng);
    Eigen::MatrixXd p0 = 0.9 * Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd q0 = 0.1 * Eigen::MatrixXd::Identity(2, 2);

    // S - P0^T P0 has a negative eigenvalue: no real factor exists
    Eigen::MatrixXd s_small = 0.5 * Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(subspace::matched_init(u, p0, q0, s_small, rng),
                    subspace::NumericError);

    // discriminator overlap larger than 1 is impossible for orthonormal W
    Eigen::MatrixXd q_big = 1.2 * Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd s0 = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(
        subspace::matched_init(u, 0.1 * Eigen::MatrixXd::Identity(2, 2), q_big,
                               s0, rng),
        subspace::NumericError);
}
