#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subspace/data.hpp"
#include "subspace/model.hpp"
#include "subspace/ode.hpp"

namespace subspace::harness {

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

enum class Kind { ode, gan, oja, grouse, compare, offdiag, real_data, uplift };

const char* kind_name(Kind k);
// Accepts exactly the CLI subcommand spellings (e.g. "real-data", "uplift").
// Throws ConfigError on anything else.
Kind parse_kind(const std::string& name);

// Flat experiment description. Every field corresponds to one `key = value`
// line in a config file and to one `--key value` CLI flag. Which fields are
// required depends on the kind; validation reports the offending field by
// name. Covariance fields hold the diagonals of Lambda / Lambda-tilde (the
// variances; the model layer takes their square roots). Single-entry
// covariance lists broadcast to the required length.
struct ExperimentConfig {
    Kind kind = Kind::ode;
    long n = 0;                      // ambient dimension (empirical kinds)
    Eigen::Index d = 0;              // truth rank
    Eigen::Index p = 0;              // generator rank
    Eigen::Index q = 0;              // discriminator / tracker rank
    double tau = 0.0;                // discriminator (or baseline) rate
    double tau_tilde = 0.0;          // generator rate
    double lambda = std::numeric_limits<double>::infinity();
    double eta_t = 0.0;              // true-side noise level
    double eta_g = 0.0;              // generator-side noise level
    Eigen::VectorXd signal_cov;      // Lambda diagonal, length d
    Eigen::VectorXd gen_cov;         // Lambda-tilde diagonal, length p
    std::optional<double> init_scale;          // diagonal initialization
    Eigen::MatrixXd init_p, init_q, init_s, init_r;  // or explicit blocks
    long steps = 0;                  // SGD steps (empirical kinds)
    double t_end = 0.0;              // ODE horizon
    double dt = 0.0;                 // ODE step
    int record_every = 1;
    std::vector<std::uint64_t> seeds{1};
    std::vector<long> n_list;        // compare: ambient dimensions to sweep
    std::vector<double> init_list;   // offdiag: initialization sweep
    double t_max = 1200.0;           // offdiag: plateau-detection horizon
    std::string dataset;             // real-data: IDX or CSV path
    Eigen::Index pca_k = 0;          // real-data: surrogate rank
    long epochs_multi = 1;           // real-data: multi-feature epochs
    long epochs_single = 5;          // real-data: single-feature epochs
    double baseline_tau = -1.0;      // real-data: Oja/GROUSE rate (-1 = tau)
    std::string out;                 // output directory
};

// Parses and validates a flat `key = value` config text. Later assignments
// override earlier ones (that is the whole override mechanism). Lines that
// are blank or start with '#' are skipped. Unknown keys, malformed values,
// and kind-inconsistent settings all raise ConfigError naming the field.
ExperimentConfig parse_config(const std::string& text);

// Reads `path` (empty = start from nothing) and appends the override
// assignments in order before parsing.
ExperimentConfig load_config(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides);

// Canonical echo of an already-validated config: fixed key order, bracketed
// lists, `inf` for the projected-mode penalty. Reparses to an equivalent
// config; embedded verbatim in run manifests.
std::string serialize_config(const ExperimentConfig& cfg);

// Initial macroscopic state per the config's initialization spec: either
// P0 = Q0 = init_scale * I (rectangular), S0 = Z0 = I, or the explicit
// blocks; R0 defaults to P0^T Q0 (the value realized by matched micro
// initializations) when init_r is not given.
MacroState initial_macro_state(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Persistence helpers
// ---------------------------------------------------------------------------

// Header `t,P_1_1,...,P_d_p,Q_1_1,...,R_1_1,...,S_1_1,...,Z_1_1,...` with
// row-major flattening of each block.
std::string trajectory_csv_header(Eigen::Index d, Eigen::Index p,
                                  Eigen::Index q);

// Full CSV document for a trajectory (header plus one row per point).
// Numbers are shortest-round-trip, so the byte stream is a pure function of
// the values and the file reloads exactly via load_csv_matrix.
std::string trajectory_csv(const ode::Trajectory& traj);

// Small labelled table (reports); same numeric formatting.
std::string table_csv(const std::vector<std::string>& columns,
                      const Eigen::MatrixXd& rows);

// FNV-1a 64-bit checksum; file variant returns "fnv1a64:<16 hex digits>".
std::uint64_t fnv1a64(std::string_view bytes);
std::string file_checksum(const std::string& path);

// Write-temp-then-rename so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string build_string();

// Writes `<cfg.out>/manifest.txt`: the config echo, seed list, RNG
// identifier, build string, wall-clock duration, and one checksum line per
// output file. Atomic.
void write_manifest(const ExperimentConfig& cfg,
                    const std::vector<std::string>& files,
                    double duration_seconds);

// ---------------------------------------------------------------------------
// Plots
// ---------------------------------------------------------------------------

struct Series {
    std::string name;
    std::vector<double> x, y;  // equal lengths; non-finite points break the line
};

struct PlotStyle {
    std::string title, x_label, y_label;
    int width = 800;
    int height = 480;
};

// Deterministic standalone SVG: fixed canvas, linear axes with tick labels,
// one polyline per series, legend on the right. Byte-stable for identical
// inputs. Throws on an empty series set.
std::string render_svg(const std::vector<Series>& series,
                       const PlotStyle& style);

// Grid of per-column grayscale tiles for image-shaped data; each column of
// `basis` is reshaped to img_rows x img_cols (row-major) and normalized to
// its own [min, max] range.
std::string feature_grid_svg(const Eigen::MatrixXd& basis,
                             Eigen::Index img_rows, Eigen::Index img_cols);

// ---------------------------------------------------------------------------
// Studies (pure computation; `run` adds persistence around them)
// ---------------------------------------------------------------------------

// Empirical-vs-ODE deviation sweep over cfg.n_list: for each ambient
// dimension, trains the projected two-player system from a matched
// initialization for every seed and reports the sup-over-grid Frobenius
// deviation of the empirical block Gram matrix from the ODE's, averaged over
// seeds, plus the fitted slope of log mean deviation against log n.
struct CompareReport {
    std::vector<long> ns;
    std::vector<double> mean_dev, std_dev;
    double slope = 0.0;
    // diagnostic curves at the largest n: grid times, ODE P diagonals, and
    // the seed-averaged empirical P diagonals (column-major per feature)
    std::vector<double> grid;
    Eigen::MatrixXd ode_diag, emp_diag;
};
CompareReport run_compare(const ExperimentConfig& cfg);

// Initialization sweep comparing the multi-feature (q = d) and
// single-feature (q = 1) macroscopic dynamics at an equal sample budget.
// The budget T*(c) is the first time the multi-feature min-diagonal
// similarity reaches 99% of its own plateau (trajectory value at t_max);
// steady states are read off both trajectories at that same grid point.
// t_half entries are NaN when the 0.5 level is never reached.
struct OffdiagRow {
    double init = 0.0;
    double budget = 0.0;
    double multi_steady = 0.0, single_steady = 0.0, gap = 0.0;
    double multi_t_half = 0.0, single_t_half = 0.0;
};
struct OffdiagReport {
    std::vector<OffdiagRow> rows;
    // min-diagonal similarity curves of the multi-feature runs, one column
    // per initialization, on the shared grid
    std::vector<double> grid;
    Eigen::MatrixXd multi_curves;
};
OffdiagReport run_offdiagonal_study(const ExperimentConfig& cfg);

// Square-system embedding check: pads the truth and discriminator ranks of a
// d = p = q system up to rank cfg.p (zero signal variance and zero overlap in
// the new directions) and integrates both the plain and the padded ODE.
struct UpliftReport {
    ode::Trajectory plain, uplifted;
    double max_first_block_dev = 0.0;   // sup over grid and blocks, d x d corner
    double min_block_eigenvalue = 0.0;  // PSD sanity of the padded states
};
UpliftReport run_uplift_demo(const ExperimentConfig& cfg);

// Streaming comparison on a real (or synthetic) dataset: PCA surrogate of
// rank pca_k as the reference subspace, then multi-feature GAN,
// single-feature GAN (sequential feature schedule), Oja, and GROUSE on the
// same shuffled sample stream. Curves are Grassmann distances to the
// reference, sampled every record_every steps.
struct AlgorithmCurve {
    std::string name;
    std::vector<double> step, distance;
    double final_distance = 0.0;
    Eigen::MatrixXd basis;  // n x pca_k, orthonormal
};
struct RealDataReport {
    Eigen::MatrixXd reference;  // PCA surrogate basis
    std::vector<AlgorithmCurve> curves;  // multi, single, oja, grouse
    Eigen::Index img_rows = 0, img_cols = 0;  // nonzero when dataset is IDX
};
RealDataReport real_data_study(const ExperimentConfig& cfg,
                               const DatasetMatrix& raw);

// ---------------------------------------------------------------------------
// Orchestration
// ---------------------------------------------------------------------------

struct RunReport {
    std::string summary;             // human-readable result digest
    std::vector<std::string> files;  // names written inside cfg.out
};

// Dispatches on cfg.kind, writes every artifact into cfg.out (created if
// missing), finishes with the manifest. Identical config + seeds give
// byte-identical CSV and SVG outputs. Seeds of one experiment may run on
// parallel threads (SUBSPACE_LAB_THREADS caps; reductions are ordered by
// seed position, so the thread count never changes any output byte).
RunReport run(const ExperimentConfig& cfg);

}  // namespace subspace::harness
