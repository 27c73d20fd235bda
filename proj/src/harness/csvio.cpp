#include <charconv>
#include <string>
#include <vector>

#include "subspace/common.hpp"
#include "subspace/harness.hpp"

namespace subspace::harness {

namespace {

void append_number(std::string& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, static_cast<size_t>(res.ptr - buf));
}

void append_block_header(std::string& out, const char* name, Eigen::Index rows,
                         Eigen::Index cols) {
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            out += ',';
            out += name;
            out += '_';
            out += std::to_string(i + 1);
            out += '_';
            out += std::to_string(j + 1);
        }
    }
}

void append_block_row(std::string& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out += ',';
            append_number(out, m(i, j));
        }
    }
}

}  // namespace

std::string trajectory_csv_header(Eigen::Index d, Eigen::Index p,
                                  Eigen::Index q) {
    std::string out = "t";
    append_block_header(out, "P", d, p);
    append_block_header(out, "Q", d, q);
    append_block_header(out, "R", p, q);
    append_block_header(out, "S", p, p);
    append_block_header(out, "Z", q, q);
    return out;
}

std::string trajectory_csv(const ode::Trajectory& traj) {
    if (traj.empty()) throw std::invalid_argument("trajectory csv: empty trajectory");
    const MacroState& head = traj.front().state;
    std::string out = trajectory_csv_header(head.truth_rank(), head.gen_rank(),
                                            head.disc_rank());
    out += '\n';
    for (const auto& point : traj) {
        append_number(out, point.t);
        append_block_row(out, point.state.p);
        append_block_row(out, point.state.q);
        append_block_row(out, point.state.r);
        append_block_row(out, point.state.s);
        append_block_row(out, point.state.z);
        out += '\n';
    }
    return out;
}

std::string table_csv(const std::vector<std::string>& columns,
                      const Eigen::MatrixXd& rows) {
    if (columns.empty()) throw std::invalid_argument("table csv: no columns");
    if (rows.cols() != static_cast<Eigen::Index>(columns.size())) {
        throw std::invalid_argument("table csv: column count mismatch");
    }
    std::string out;
    for (size_t j = 0; j < columns.size(); ++j) {
        if (j > 0) out += ',';
        out += columns[j];
    }
    out += '\n';
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        for (Eigen::Index j = 0; j < rows.cols(); ++j) {
            if (j > 0) out += ',';
            append_number(out, rows(i, j));
        }
        out += '\n';
    }
    return out;
}

}  // namespace subspace::harness
