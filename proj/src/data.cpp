#include "subspace/data.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "subspace/common.hpp"

namespace subspace::data {

namespace {

std::vector<unsigned char> read_all_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                      std::istreambuf_iterator<char>());
}

std::uint32_t be32(const std::vector<unsigned char>& b, size_t off) {
    return (std::uint32_t(b[off]) << 24) | (std::uint32_t(b[off + 1]) << 16) |
           (std::uint32_t(b[off + 2]) << 8) | std::uint32_t(b[off + 3]);
}

std::string hex32(std::uint32_t v) {
    char buf[11];
    std::snprintf(buf, sizeof buf, "0x%08x", v);
    return buf;
}

bool parse_double(std::string_view cell, double& out) {
    // tolerate surrounding spaces; from_chars does the strict parse
    size_t a = cell.find_first_not_of(" \t");
    if (a == std::string_view::npos) return false;
    size_t b = cell.find_last_not_of(" \t");
    cell = cell.substr(a, b - a + 1);
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return res.ec == std::errc() && res.ptr == cell.data() + cell.size();
}

std::vector<std::string_view> split_commas(std::string_view line,
                                           std::vector<std::string_view>& out) {
    out.clear();
    size_t start = 0;
    while (true) {
        size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

DatasetMatrix load_idx_images(const std::string& path) {
    constexpr std::uint32_t kImageMagic = 0x00000803;
    std::vector<unsigned char> bytes = read_all_bytes(path);
    if (bytes.size() < 16) {
        throw DataError(path + ": truncated IDX header, file has " +
                        std::to_string(bytes.size()) +
                        " bytes but the header needs 16");
    }
    std::uint32_t magic = be32(bytes, 0);
    if (magic != kImageMagic) {
        throw DataError(path + ": wrong IDX magic at byte offset 0, expected " +
                        hex32(kImageMagic) + ", found " + hex32(magic));
    }
    std::uint64_t count = be32(bytes, 4);
    std::uint64_t rows = be32(bytes, 8);
    std::uint64_t cols = be32(bytes, 12);
    if (rows == 0 || cols == 0 || count == 0) {
        throw DataError(path + ": IDX declares an empty geometry (" +
                        std::to_string(count) + " x " + std::to_string(rows) +
                        " x " + std::to_string(cols) + ")");
    }
    std::uint64_t payload = count * rows * cols;
    if (rows * cols > (1u << 24) || payload / (rows * cols) != count ||
        payload > (std::uint64_t(1) << 40)) {
        throw DataError(path + ": IDX counts overflow a sane payload (" +
                        std::to_string(count) + " x " + std::to_string(rows) +
                        " x " + std::to_string(cols) + ")");
    }
    if (bytes.size() != 16 + payload) {
        throw DataError(
            path + ": IDX payload length mismatch at byte offset 16, declared " +
            std::to_string(payload) + " bytes, file carries " +
            std::to_string(bytes.size() - 16));
    }

    DatasetMatrix ds;
    const Eigen::Index n = static_cast<Eigen::Index>(rows * cols);
    ds.samples.resize(static_cast<Eigen::Index>(count), n);
    for (Eigen::Index i = 0; i < ds.samples.rows(); ++i) {
        size_t base = 16 + static_cast<size_t>(i) * static_cast<size_t>(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            ds.samples(i, j) = bytes[base + static_cast<size_t>(j)] / 255.0;
        }
    }
    ds.mean = Eigen::VectorXd::Zero(n);
    ds.centered = false;
    ds.img_rows = static_cast<Eigen::Index>(rows);
    ds.img_cols = static_cast<Eigen::Index>(cols);
    return ds;
}

DatasetMatrix load_csv_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);

    std::vector<std::vector<double>> rows;
    std::vector<std::string_view> cells;
    std::string line;
    long line_no = 0;
    Eigen::Index width = -1;
    bool header_allowed = true;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            // blank line: legal only as the trailing newline artifact
            std::string rest;
            if (std::getline(in, rest)) {
                throw DataError(path + ": line " + std::to_string(line_no) +
                                ": blank line inside the table");
            }
            break;
        }
        split_commas(line, cells);
        std::vector<double> row(cells.size());
        bool numeric = true;
        for (size_t j = 0; j < cells.size(); ++j) {
            if (!parse_double(cells[j], row[j])) {
                numeric = false;
                if (!header_allowed) {
                    throw DataError(path + ": line " + std::to_string(line_no) +
                                    ": cannot parse cell '" +
                                    std::string(cells[j]) + "' as a number");
                }
                break;
            }
        }
        if (!numeric) {  // the single optional header row
            header_allowed = false;
            continue;
        }
        header_allowed = false;
        if (width < 0) {
            width = static_cast<Eigen::Index>(row.size());
        } else if (static_cast<Eigen::Index>(row.size()) != width) {
            throw DataError(path + ": line " + std::to_string(line_no) +
                            ": expected " + std::to_string(width) +
                            " columns, found " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw DataError(path + ": no data rows");
    }

    DatasetMatrix ds;
    ds.samples.resize(static_cast<Eigen::Index>(rows.size()), width);
    for (Eigen::Index i = 0; i < ds.samples.rows(); ++i) {
        for (Eigen::Index j = 0; j < width; ++j) {
            ds.samples(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
    }
    ds.mean = Eigen::VectorXd::Zero(width);
    ds.centered = false;
    return ds;
}

void save_csv_matrix(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path);
    char buf[64];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            auto res = std::to_chars(buf, buf + sizeof buf, m(i, j));
            if (j + 1 < m.cols()) *res.ptr++ = ',';
            out.write(buf, res.ptr - buf);
        }
        out.put('\n');
    }
    if (!out) throw DataError("write failed: " + path);
}

DatasetMatrix center(const DatasetMatrix& ds) {
    if (ds.centered) return ds;
    DatasetMatrix out;
    out.mean = ds.samples.colwise().mean();
    out.samples = ds.samples.rowwise() - out.mean.transpose();
    out.centered = true;
    out.img_rows = ds.img_rows;
    out.img_cols = ds.img_cols;
    return out;
}

Eigen::MatrixXd pca_surrogate(const DatasetMatrix& ds, Eigen::Index k) {
    if (!ds.centered) {
        throw std::invalid_argument("pca_surrogate: dataset must be centered");
    }
    const Eigen::Index big_n = ds.samples.rows();
    const Eigen::Index n = ds.samples.cols();
    if (k < 1 || k > std::min(big_n, n)) {
        throw std::invalid_argument("pca_surrogate: k out of range");
    }

    Eigen::MatrixXd cov =
        (ds.samples.transpose() * ds.samples) / static_cast<double>(big_n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) {
        throw NumericError("pca_surrogate: eigendecomposition failed");
    }
    // ascending order from the solver; walk from the top
    const Eigen::VectorXd& vals = eig.eigenvalues();
    double top = vals(n - 1);
    Eigen::Index effective = 0;
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        if (vals(i) > 1e-12 * top) ++effective;
    }
    if (k > effective) {
        throw NumericError("pca_surrogate: k = " + std::to_string(k) +
                           " exceeds effective rank " +
                           std::to_string(effective));
    }

    Eigen::MatrixXd basis(n, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        Eigen::VectorXd v = eig.eigenvectors().col(n - 1 - j);
        Eigen::Index at = 0;
        v.cwiseAbs().maxCoeff(&at);
        if (v(at) < 0.0) v = -v;
        basis.col(j) = v;
    }
    return basis;
}

SpikedStream::SpikedStream(SpikedModel model, long count, RandomStream rng)
    : model_(std::move(model)), remaining_(count), rng_(rng) {
    if (count < 0) throw std::invalid_argument("spiked stream: count < 0");
}

std::optional<Sample> SpikedStream::next() {
    if (remaining_ <= 0) return std::nullopt;
    --remaining_;
    return sample(model_, rng_);
}

}  // namespace subspace::data
