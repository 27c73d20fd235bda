#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "subspace/model.hpp"
#include "subspace/rng.hpp"

namespace subspace::data {

// Sample-per-row dataset. `mean` holds the column means removed by center();
// until then it is a zero vector of matching width. Image containers carry
// their pixel geometry (img_rows * img_cols = n); other sources leave it 0.
struct DatasetMatrix {
    Eigen::MatrixXd samples;  // N x n
    Eigen::VectorXd mean;     // n
    bool centered = false;
    Eigen::Index img_rows = 0, img_cols = 0;
};

// Big-endian IDX image container (magic 0x00000803). Pixels are scaled to
// [0, 1]; rows are flattened row-major so n = rows * cols. The declared
// payload must match the file size exactly; all failures raise DataError
// with the offending byte offset or the expected/found values.
DatasetMatrix load_idx_images(const std::string& path);

// Rectangular numeric CSV (comma-separated, LF or CRLF, an optional single
// header row which is detected by failing to parse as numbers). Ragged rows
// and non-numeric cells raise DataError with the 1-based line number.
DatasetMatrix load_csv_matrix(const std::string& path);

// Writes one row per line with shortest-round-trip decimal formatting, so a
// load_csv_matrix round trip is value-exact.
void save_csv_matrix(const std::string& path, const Eigen::MatrixXd& m);

// Removes column means and flags the result; centering an already-centered
// dataset is the identity.
DatasetMatrix center(const DatasetMatrix& ds);

// Top-k eigenvectors of the sample covariance (1/N) X^T X of a centered
// dataset, columns ordered by descending eigenvalue, each column's
// largest-magnitude entry made positive. Throws NumericError (listing the
// effective rank) when k reaches eigenvalues below 1e-12 of the largest.
Eigen::MatrixXd pca_surrogate(const DatasetMatrix& ds, Eigen::Index k);

// Lazy, replayable stream of draws from a spiked model.
class SpikedStream {
  public:
    SpikedStream(SpikedModel model, long count, RandomStream rng);

    std::optional<Sample> next();  // nullopt once exhausted
    long remaining() const { return remaining_; }

  private:
    SpikedModel model_;
    long remaining_;
    RandomStream rng_;
};

}  // namespace subspace::data
