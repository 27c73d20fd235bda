#include "subspace/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "subspace/common.hpp"
#include "subspace/geometry.hpp"

namespace subspace {

namespace {

// Symmetric PSD square root with a small negative-eigenvalue allowance for
// roundoff; anything more negative means the requested Gram targets are
// not realizable.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    Eigen::VectorXd ev = es.eigenvalues();
    double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    Eigen::VectorXd root(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -1e-10 * scale) {
            throw NumericError(std::string(what) +
                               ": target Gram block is not positive "
                               "semidefinite (eigenvalue " +
                               std::to_string(ev(i)) + ")");
        }
        root(i) = std::sqrt(std::max(0.0, ev(i)));
    }
    return es.eigenvectors() * root.asDiagonal() *
           es.eigenvectors().transpose();
}

void fill_gaussian(Eigen::MatrixXd& m, RandomStream& rng) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.gaussian();
}

}  // namespace

SpikedModel make_spiked_model(Eigen::MatrixXd basis, Eigen::VectorXd cov_sqrt,
                              double noise_level) {
    if (basis.cols() == 0 || basis.cols() > basis.rows()) {
        throw std::invalid_argument("spiked model: rank must be in [1, n]");
    }
    if (cov_sqrt.size() != basis.cols()) {
        throw std::invalid_argument(
            "spiked model: covariance size does not match basis rank");
    }
    if ((cov_sqrt.array() <= 0.0).any()) {
        throw std::invalid_argument(
            "spiked model: covariance entries must be positive");
    }
    if (noise_level < 0.0) {
        throw std::invalid_argument("spiked model: negative noise level");
    }
    Eigen::MatrixXd gram = basis.transpose() * basis;
    gram.diagonal().array() -= 1.0;
    if (gram.norm() > 1e-10) {
        throw std::invalid_argument("spiked model: basis is not orthonormal");
    }
    return SpikedModel{std::move(basis), std::move(cov_sqrt), noise_level};
}

Sample sample(const SpikedModel& model, RandomStream& rng) {
    const Eigen::Index d = model.rank();
    const Eigen::Index n = model.ambient_dim();
    Sample out;
    out.latent.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        out.latent(i) = model.cov_sqrt(i) * rng.gaussian();
    }
    out.value.noalias() = model.basis * out.latent;
    if (model.noise_level > 0.0) {
        double root_eta = std::sqrt(model.noise_level);
        for (Eigen::Index i = 0; i < n; ++i) {
            out.value(i) += root_eta * rng.gaussian();
        }
    }
    return out;
}

Eigen::MatrixXd MacroState::block_matrix() const {
    const Eigen::Index d = truth_rank(), pp = gen_rank(), qq = disc_rank();
    Eigen::MatrixXd m(d + pp + qq, d + pp + qq);
    m.topLeftCorner(d, d) = Eigen::MatrixXd::Identity(d, d);
    m.block(0, d, d, pp) = p;
    m.block(0, d + pp, d, qq) = q;
    m.block(d, 0, pp, d) = p.transpose();
    m.block(d, d, pp, pp) = s;
    m.block(d, d + pp, pp, qq) = r;
    m.block(d + pp, 0, qq, d) = q.transpose();
    m.block(d + pp, d, qq, pp) = r.transpose();
    m.block(d + pp, d + pp, qq, qq) = z;
    return m;
}

MacroState macro_state(const MicroState& state) {
    if (state.u.rows() != state.v.rows() || state.u.rows() != state.w.rows()) {
        throw std::invalid_argument("macro_state: ambient dimensions differ");
    }
    MacroState m;
    m.p.noalias() = state.u.transpose() * state.v;
    m.q.noalias() = state.u.transpose() * state.w;
    m.r.noalias() = state.v.transpose() * state.w;
    m.s.noalias() = state.v.transpose() * state.v;
    m.z.noalias() = state.w.transpose() * state.w;
    return m;
}

Eigen::MatrixXd scaled_random_init(Eigen::Index n, Eigen::Index cols,
                                   double scale, RandomStream& rng,
                                   bool orthonormal) {
    if (n <= 0 || cols <= 0 || cols > n) {
        throw std::invalid_argument("scaled_random_init: bad dimensions");
    }
    if (scale <= 0.0) {
        throw std::invalid_argument("scaled_random_init: scale must be positive");
    }
    Eigen::MatrixXd m(n, cols);
    fill_gaussian(m, rng);
    m *= scale / std::sqrt(static_cast<double>(n));
    if (orthonormal) {
        m = geometry::orthonormalize(m);
    }
    return m;
}

MicroState matched_init(const Eigen::MatrixXd& u, const Eigen::MatrixXd& p0,
                        const Eigen::MatrixXd& q0, const Eigen::MatrixXd& s0,
                        RandomStream& rng) {
    const Eigen::Index n = u.rows();
    const Eigen::Index d = u.cols();
    const Eigen::Index p = p0.cols();
    const Eigen::Index q = q0.cols();
    if (p0.rows() != d || q0.rows() != d) {
        throw std::invalid_argument("matched_init: target row count must equal rank(U)");
    }
    if (s0.rows() != p || s0.cols() != p) {
        throw std::invalid_argument("matched_init: S target must be p x p");
    }
    if (n < d + p + q) {
        throw std::invalid_argument(
            "matched_init: ambient dimension too small for independent complements");
    }

    // Shared orthonormal frame orthogonal to U. Project twice, then
    // orthonormalize twice, so the frame is orthogonal to U at full
    // precision and the macroscopic targets are hit to roundoff.
    Eigen::MatrixXd frame(n, p + q);
    fill_gaussian(frame, rng);
    for (int round = 0; round < 2; ++round) {
        frame.noalias() -= u * (u.transpose() * frame);
        frame = geometry::orthonormalize(frame);
    }

    Eigen::MatrixXd gen_gram = s0 - p0.transpose() * p0;
    Eigen::MatrixXd disc_gram =
        Eigen::MatrixXd::Identity(q, q) - q0.transpose() * q0;
    Eigen::MatrixXd gen_root = psd_sqrt(gen_gram, "matched_init generator");
    Eigen::MatrixXd disc_root = psd_sqrt(disc_gram, "matched_init discriminator");

    MicroState out;
    out.u = u;
    out.v.noalias() = u * p0;
    out.v.noalias() += frame.leftCols(p) * gen_root;
    out.w.noalias() = u * q0;
    out.w.noalias() += frame.rightCols(q) * disc_root;
    out.w = geometry::orthonormalize(out.w);
    return out;
}

}  // namespace subspace
