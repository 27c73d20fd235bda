#include "subspace/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "subspace/geometry.hpp"

namespace subspace::baselines {

namespace {

void check_state(const BaselineState& state, const Eigen::VectorXd& y) {
    if (state.basis.rows() != y.size()) {
        throw std::invalid_argument("baseline step: sample dimension mismatch");
    }
}

}  // namespace

BaselineState make_baseline_state(Eigen::MatrixXd basis) {
    if (basis.rows() < basis.cols() || basis.cols() < 1) {
        throw std::invalid_argument("baseline state: need n >= d >= 1");
    }
    Eigen::MatrixXd gram = basis.transpose() * basis;
    gram.diagonal().array() -= 1.0;
    if (gram.norm() >= 1e-8) {
        throw std::invalid_argument("baseline state: basis not orthonormal");
    }
    return BaselineState{std::move(basis), 0};
}

BaselineState oja_step(const BaselineState& state, const Eigen::VectorXd& y,
                       double tau) {
    check_state(state, y);
    BaselineState next;
    next.step = state.step + 1;
    next.basis = geometry::orthonormalize(
        state.basis + tau * y * (y.transpose() * state.basis));
    return next;
}

BaselineState grouse_step(const BaselineState& state, const Eigen::VectorXd& y,
                          double tau) {
    check_state(state, y);
    BaselineState next;
    next.step = state.step + 1;

    Eigen::VectorXd w = state.basis.transpose() * y;
    Eigen::VectorXd p = state.basis * w;
    Eigen::VectorXd r = y - p;
    double pn = p.norm();
    double rn = r.norm();
    if (pn < 1e-14 || rn < 1e-14) {
        next.basis = state.basis;  // degenerate geometry: exact identity
        return next;
    }
    // w and p have equal norms for an orthonormal basis, but the update is
    // written with both normalizations so it stays a rotation even when the
    // state carries roundoff.
    double theta = tau * rn * pn;
    Eigen::RowVectorXd wn = w.transpose() / w.norm();
    next.basis = state.basis + ((std::cos(theta) - 1.0) / pn) * p * wn +
                 (std::sin(theta) / rn) * r * wn;
    return next;
}

}  // namespace subspace::baselines
