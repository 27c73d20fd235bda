#include "subspace/geometry.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "subspace/common.hpp"

namespace subspace::geometry {

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    const Eigen::Index k = x.cols();
    if (k > n) {
        throw std::invalid_argument(
            "orthonormalize: more columns than rows (" + std::to_string(k) +
            " > " + std::to_string(n) + ")");
    }
    Eigen::MatrixXd q = x;
    Eigen::VectorXd rdiag(k);
    // Modified Gram-Schmidt with a second sweep per column. For the nearly
    // orthonormal inputs seen in the training loops one sweep would do, but
    // the second keeps general inputs orthogonal to machine precision.
    for (Eigen::Index j = 0; j < k; ++j) {
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (Eigen::Index i = 0; i < j; ++i) {
                double proj = q.col(i).dot(q.col(j));
                q.col(j).noalias() -= proj * q.col(i);
            }
        }
        double norm = q.col(j).norm();
        rdiag(j) = norm;
        if (norm < 1e-300) {
            throw NumericError(
                "orthonormalize: rank-deficient input (column " +
                std::to_string(j) + " vanished)");
        }
        q.col(j) /= norm;
    }
    if (k > 0) {
        double rmax = rdiag.maxCoeff();
        double rmin = rdiag.minCoeff();
        if (rmin < 1e-12 * rmax) {
            throw NumericError(
                "orthonormalize: rank-deficient input (R diagonal ratio " +
                std::to_string(rmin / rmax) + ")");
        }
    }
    return q;
}

Eigen::VectorXd principal_angles(const Eigen::MatrixXd& x,
                                 const Eigen::MatrixXd& y) {
    if (x.rows() != y.rows()) {
        throw std::invalid_argument("principal_angles: ambient dimensions differ");
    }
    if (x.cols() == 0 || y.cols() == 0) {
        throw std::invalid_argument("principal_angles: empty basis");
    }
    Eigen::MatrixXd xb = orthonormalize(x);
    Eigen::MatrixXd yb = orthonormalize(y);
    Eigen::MatrixXd overlap = xb.transpose() * yb;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(overlap);
    Eigen::VectorXd sigma = svd.singularValues();
    Eigen::VectorXd angles(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        double s = std::clamp(sigma(i), 0.0, 1.0);
        angles(i) = std::acos(s);
    }
    // Singular values come out descending, so angles are already ascending.
    return angles;
}

double grassmann_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    return principal_angles(x, y).norm();
}

Eigen::VectorXd cosine_diagonals(const Eigen::MatrixXd& x,
                                 const Eigen::MatrixXd& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw std::invalid_argument("cosine_diagonals: shape mismatch");
    }
    Eigen::VectorXd out(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        double nx = x.col(j).norm();
        double ny = y.col(j).norm();
        if (nx < 1e-300 || ny < 1e-300) {
            throw std::invalid_argument(
                "cosine_diagonals: zero column " + std::to_string(j));
        }
        out(j) = x.col(j).dot(y.col(j)) / (nx * ny);
    }
    return out;
}

double reconstruction_error(const Eigen::MatrixXd& samples,
                            const Eigen::MatrixXd& basis) {
    if (samples.cols() != basis.rows()) {
        throw std::invalid_argument(
            "reconstruction_error: sample dimension does not match basis rows");
    }
    const Eigen::Index k = basis.cols();
    Eigen::MatrixXd gram = basis.transpose() * basis;
    gram.diagonal().array() -= 1.0;
    if (gram.norm() > 1e-6) {
        throw std::invalid_argument(
            "reconstruction_error: basis is not orthonormal");
    }
    if (samples.rows() == 0) {
        throw std::invalid_argument("reconstruction_error: no samples");
    }
    double total = 0.0;
    Eigen::VectorXd coeff(k), residual(samples.cols());
    for (Eigen::Index i = 0; i < samples.rows(); ++i) {
        coeff.noalias() = basis.transpose() * samples.row(i).transpose();
        residual = samples.row(i).transpose();
        residual.noalias() -= basis * coeff;
        total += residual.squaredNorm();
    }
    return total / static_cast<double>(samples.rows());
}

Eigen::MatrixXd uplift(const Eigen::MatrixXd& x, Eigen::Index p) {
    const Eigen::Index n = x.rows();
    const Eigen::Index r = x.cols();
    if (p < r || p > n) {
        throw std::invalid_argument("uplift: need cols(x) <= p <= rows(x)");
    }
    Eigen::MatrixXd gram = x.transpose() * x;
    gram.diagonal().array() -= 1.0;
    if (gram.norm() > 1e-8) {
        throw std::invalid_argument("uplift: input columns not orthonormal");
    }
    Eigen::MatrixXd out(n, p);
    out.leftCols(r) = x;
    Eigen::Index have = r;
    Eigen::VectorXd candidate(n);
    for (Eigen::Index j = n - 1; j >= 0 && have < p; --j) {
        candidate.setZero();
        candidate(j) = 1.0;
        // One Gram-Schmidt pass against everything accepted so far.
        for (Eigen::Index i = 0; i < have; ++i) {
            double proj = out.col(i).dot(candidate);
            candidate.noalias() -= proj * out.col(i);
        }
        double norm = candidate.norm();
        if (norm < 1e-8) continue;  // basis vector already (nearly) in span
        out.col(have) = candidate / norm;
        ++have;
    }
    if (have < p) {
        throw NumericError(
            "uplift: could not find " + std::to_string(p - r) +
            " independent padding vectors (got " + std::to_string(have - r) +
            ")");
    }
    return out;
}

}  // namespace subspace::geometry
