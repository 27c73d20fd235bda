#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "subspace/baselines.hpp"
#include "subspace/common.hpp"
#include "subspace/gan.hpp"
#include "subspace/geometry.hpp"
#include "subspace/harness.hpp"

namespace subspace::harness {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// seed-level parallelism
// ---------------------------------------------------------------------------

size_t thread_budget(size_t jobs) {
    size_t cap = 0;
    if (const char* env = std::getenv("SUBSPACE_LAB_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v > 0) cap = v;
    }
    if (cap == 0) {
        cap = std::max(1u, std::thread::hardware_concurrency());
    }
    return std::min(cap, jobs);
}

// Runs fn(0..jobs-1), possibly on worker threads. Every job writes only its
// own output slot, so scheduling can never reorder results.
void parallel_for(size_t jobs, const std::function<void(size_t)>& fn) {
    size_t workers = thread_budget(jobs);
    if (workers <= 1) {
        for (size_t i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= jobs) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// shared pieces
// ---------------------------------------------------------------------------

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

SpikedModel truth_model(const ExperimentConfig& cfg, long n) {
    return make_spiked_model(Eigen::MatrixXd::Identity(n, cfg.d),
                             cfg.signal_cov.array().sqrt().matrix(),
                             cfg.eta_t);
}

gan::GanConfig gan_config(const ExperimentConfig& cfg, long n) {
    return gan::make_gan_config(n, cfg.d, cfg.p, cfg.q, cfg.tau,
                                cfg.tau_tilde, cfg.lambda, cfg.eta_g,
                                cfg.gen_cov.array().sqrt().matrix());
}

ode::OdeSystem ode_system(const ExperimentConfig& cfg) {
    return ode::make_ode_system(cfg.signal_cov, cfg.gen_cov, cfg.tau,
                                cfg.tau_tilde, cfg.eta_t, cfg.eta_g);
}

// Smallest per-feature cosine similarity |P_ii| / sqrt(S_ii).
double min_diag_similarity(const MacroState& m) {
    Eigen::Index k = std::min(m.p.rows(), m.p.cols());
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < k; ++i) {
        double s = m.s(i, i);
        best = std::min(best, s > 0.0 ? std::abs(m.p(i, i)) / std::sqrt(s)
                                      : 0.0);
    }
    return best;
}

double max_z_defect(const ode::Trajectory& traj) {
    double worst = 0.0;
    for (const auto& pt : traj) {
        Eigen::Index q = pt.state.z.rows();
        worst = std::max(
            worst,
            (pt.state.z - Eigen::MatrixXd::Identity(q, q)).norm());
    }
    return worst;
}

// Sign pattern of the Sylvester/Walsh construction: every component has the
// same magnitude (the paper's "initialization of c for each component") but
// no two columns are interchangeable, which would freeze the deterministic
// dynamics into permanent feature-sharing.
double walsh_sign(Eigen::Index i, Eigen::Index j) {
    return std::popcount(static_cast<unsigned long long>(i & j)) % 2 == 0
               ? 1.0
               : -1.0;
}

MacroState component_init(Eigen::Index d, Eigen::Index p, Eigen::Index q,
                          double c) {
    MacroState m;
    m.p.resize(d, p);
    m.q.resize(d, q);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) m.p(i, j) = c * walsh_sign(i, j);
        for (Eigen::Index j = 0; j < q; ++j) m.q(i, j) = c * walsh_sign(i, j);
    }
    m.s = Eigen::MatrixXd::Identity(p, p);
    m.r = m.p.transpose() * m.q;
    m.z = Eigen::MatrixXd::Identity(q, q);
    return m;
}

// One empirical projected-GAN run from the matched initialization; the
// stream id separates runs of the same seed at different ambient dimensions.
ode::Trajectory train_run(const ExperimentConfig& cfg, long n,
                          std::uint64_t seed, std::uint64_t stream, long steps,
                          int record_stride) {
    RandomStream rng(seed, stream);
    SpikedModel model = truth_model(cfg, n);
    MacroState m0 = initial_macro_state(cfg);
    MicroState micro = matched_init(model.basis, m0.p, m0.q, m0.s, rng);
    gan::GanState state{micro.v, micro.w, 0};
    gan::TrajectoryRecorder recorder{record_stride, {}};
    gan::train(state, model, gan_config(cfg, n), steps, recorder, rng);
    return std::move(recorder.points);
}

Eigen::MatrixXd left_singular_basis(const Eigen::MatrixXd& v, Eigen::Index k) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeThinU);
    return svd.matrixU().leftCols(k);
}

std::vector<Eigen::Index> shuffled_order(Eigen::Index count,
                                         RandomStream rng) {
    std::vector<Eigen::Index> order(static_cast<size_t>(count));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    for (Eigen::Index i = count - 1; i > 0; --i) {
        auto j = static_cast<Eigen::Index>(
            rng.next_u64() % static_cast<std::uint64_t>(i + 1));
        std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
    }
    return order;
}

}  // namespace

// ---------------------------------------------------------------------------
// compare: empirical SGD against the macroscopic ODE
// ---------------------------------------------------------------------------

CompareReport run_compare(const ExperimentConfig& cfg) {
    CompareReport report;
    report.ns = cfg.n_list;

    const MacroState m0 = initial_macro_state(cfg);
    const ode::Trajectory ode_traj =
        ode::integrate(m0, ode_system(cfg), cfg.t_end, cfg.dt,
                       cfg.record_every);

    const size_t num_n = cfg.n_list.size();
    const size_t num_seeds = cfg.seeds.size();
    std::vector<std::vector<double>> devs(num_n,
                                          std::vector<double>(num_seeds, 0.0));
    std::vector<ode::Trajectory> last_n_runs(num_seeds);

    parallel_for(num_n * num_seeds, [&](size_t job) {
        const size_t ni = job / num_seeds;
        const size_t si = job % num_seeds;
        const long n = cfg.n_list[ni];
        const long steps = std::lround(cfg.t_end * static_cast<double>(n));
        const int stride = static_cast<int>(std::lround(
            cfg.dt * cfg.record_every * static_cast<double>(n)));
        ode::Trajectory emp =
            train_run(cfg, n, cfg.seeds[si],
                      static_cast<std::uint64_t>(n), steps, stride);
        if (emp.size() != ode_traj.size()) {
            throw NumericError("compare: trajectory grids differ in length");
        }
        double sup = 0.0;
        for (size_t j = 0; j < emp.size(); ++j) {
            if (std::abs(emp[j].t - ode_traj[j].t) > 1e-9) {
                throw NumericError("compare: trajectory grids misaligned");
            }
            sup = std::max(sup, (emp[j].state.block_matrix() -
                                 ode_traj[j].state.block_matrix())
                                    .norm());
        }
        devs[ni][si] = sup;
        if (ni + 1 == num_n) last_n_runs[si] = std::move(emp);
    });

    for (size_t ni = 0; ni < num_n; ++ni) {
        double mean = 0.0;
        for (double v : devs[ni]) mean += v;
        mean /= static_cast<double>(num_seeds);
        double var = 0.0;
        for (double v : devs[ni]) var += (v - mean) * (v - mean);
        double sd = num_seeds > 1
                        ? std::sqrt(var / static_cast<double>(num_seeds - 1))
                        : 0.0;
        report.mean_dev.push_back(mean);
        report.std_dev.push_back(sd);
    }

    // least-squares slope of log deviation against log n
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < num_n; ++i) {
        double x = std::log(static_cast<double>(cfg.n_list[i]));
        double y = std::log(report.mean_dev[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = static_cast<double>(num_n);
    report.slope = num_n > 1 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;

    // diagnostic overlay at the largest n
    const Eigen::Index feat = std::min(cfg.d, cfg.p);
    report.ode_diag.resize(static_cast<Eigen::Index>(ode_traj.size()), feat);
    report.emp_diag.resize(static_cast<Eigen::Index>(ode_traj.size()), feat);
    for (size_t j = 0; j < ode_traj.size(); ++j) {
        report.grid.push_back(ode_traj[j].t);
        for (Eigen::Index i = 0; i < feat; ++i) {
            report.ode_diag(static_cast<Eigen::Index>(j), i) =
                ode_traj[j].state.p(i, i);
            double acc = 0.0;
            for (size_t si = 0; si < num_seeds; ++si) {
                acc += last_n_runs[si][j].state.p(i, i);
            }
            report.emp_diag(static_cast<Eigen::Index>(j), i) =
                acc / static_cast<double>(num_seeds);
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// offdiag: multi-feature vs single-feature discriminator at equal budget
// ---------------------------------------------------------------------------

OffdiagReport run_offdiagonal_study(const ExperimentConfig& cfg) {
    OffdiagReport report;
    const ode::OdeSystem sys = ode_system(cfg);
    const size_t count = cfg.init_list.size();
    std::vector<std::vector<double>> multi(count), single(count);
    std::vector<std::vector<double>> ts(count);

    parallel_for(count, [&](size_t ci) {
        const double c = cfg.init_list[ci];
        ode::Trajectory tm = ode::integrate(
            component_init(cfg.d, cfg.p, cfg.d, c), sys, cfg.t_max, cfg.dt,
            cfg.record_every);
        ode::Trajectory tsg = ode::integrate(
            component_init(cfg.d, cfg.p, 1, c), sys, cfg.t_max, cfg.dt,
            cfg.record_every);
        for (size_t j = 0; j < tm.size(); ++j) {
            ts[ci].push_back(tm[j].t);
            multi[ci].push_back(min_diag_similarity(tm[j].state));
            single[ci].push_back(min_diag_similarity(tsg[j].state));
        }
    });

    auto first_crossing = [](const std::vector<double>& t,
                             const std::vector<double>& g, double level) {
        for (size_t j = 0; j < g.size(); ++j) {
            if (g[j] >= level - 1e-12) return t[j];
        }
        return kNan;
    };

    for (size_t ci = 0; ci < count; ++ci) {
        OffdiagRow row;
        row.init = cfg.init_list[ci];
        const double plateau = multi[ci].back();
        size_t at = 0;
        while (at + 1 < multi[ci].size() &&
               multi[ci][at] < 0.99 * plateau - 1e-12) {
            ++at;
        }
        row.budget = ts[ci][at];
        row.multi_steady = multi[ci][at];
        row.single_steady = single[ci][at];
        row.gap = row.multi_steady - row.single_steady;
        row.multi_t_half = first_crossing(ts[ci], multi[ci], 0.5);
        row.single_t_half = first_crossing(ts[ci], single[ci], 0.5);
        report.rows.push_back(row);
    }

    report.grid = ts[0];
    report.multi_curves.resize(static_cast<Eigen::Index>(report.grid.size()),
                               static_cast<Eigen::Index>(count));
    for (size_t ci = 0; ci < count; ++ci) {
        for (size_t j = 0; j < report.grid.size(); ++j) {
            report.multi_curves(static_cast<Eigen::Index>(j),
                                static_cast<Eigen::Index>(ci)) = multi[ci][j];
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// uplift: square embedding of a rectangular system
// ---------------------------------------------------------------------------

UpliftReport run_uplift_demo(const ExperimentConfig& cfg) {
    UpliftReport report;
    const Eigen::Index d = cfg.d, p = cfg.p;
    const double c = *cfg.init_scale;

    auto square_init = [](Eigen::Index rank, Eigen::Index filled, double v) {
        MacroState m;
        m.p = Eigen::MatrixXd::Zero(rank, rank);
        for (Eigen::Index i = 0; i < filled; ++i) m.p(i, i) = v;
        m.q = m.p;
        m.r = m.p.transpose() * m.q;
        m.s = Eigen::MatrixXd::Identity(rank, rank);
        m.z = m.s;
        return m;
    };

    const ode::OdeSystem plain_sys =
        ode::make_ode_system(cfg.signal_cov, cfg.gen_cov, cfg.tau,
                             cfg.tau_tilde, cfg.eta_t, cfg.eta_g);
    report.plain = ode::integrate(square_init(d, d, c), plain_sys, cfg.t_end,
                                  cfg.dt, cfg.record_every);

    Eigen::VectorXd lam_up = Eigen::VectorXd::Zero(p);
    lam_up.head(d) = cfg.signal_cov;
    Eigen::VectorXd gen_up = Eigen::VectorXd::Zero(p);
    gen_up.head(d) = cfg.gen_cov;
    const ode::OdeSystem up_sys = ode::make_ode_system(
        lam_up, gen_up, cfg.tau, cfg.tau_tilde, cfg.eta_t, cfg.eta_g);
    report.uplifted = ode::integrate(square_init(p, d, c), up_sys, cfg.t_end,
                                     cfg.dt, cfg.record_every);

    double dev = 0.0;
    double min_eig = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < report.plain.size(); ++j) {
        const MacroState& a = report.plain[j].state;
        const MacroState& b = report.uplifted[j].state;
        auto block_dev = [&](const Eigen::MatrixXd& x,
                             const Eigen::MatrixXd& y) {
            return (x - y.topLeftCorner(d, d)).cwiseAbs().maxCoeff();
        };
        dev = std::max({dev, block_dev(a.p, b.p), block_dev(a.q, b.q),
                        block_dev(a.r, b.r), block_dev(a.s, b.s),
                        block_dev(a.z, b.z)});
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b.block_matrix());
        min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
    }
    report.max_first_block_dev = dev;
    report.min_block_eigenvalue = min_eig;
    return report;
}

// ---------------------------------------------------------------------------
// real-data: streaming comparison against a PCA surrogate
// ---------------------------------------------------------------------------

namespace {

// Sequential single-feature schedule: train one generator column at a time
// and move on when the column's relative update magnitude stops shrinking
// (mean over a 500-step window no longer at least 5% below the previous
// window), with a dwell of at least 1000 and at most 10000 steps per visit.
// The statistic is observable by the learner; no reference to the truth.
struct FeatureSchedule {
    static constexpr long kWindow = 500;
    static constexpr long kMinDwell = 1000;
    static constexpr long kMaxDwell = 10000;
    static constexpr double kPlateauRatio = 0.95;

    Eigen::Index active = 0;
    long dwell = 0;
    double window_sum = 0.0;
    long window_count = 0;
    double prev_window = -1.0;

    bool observe(double rel_update) {
        ++dwell;
        window_sum += rel_update;
        ++window_count;
        if (window_count < kWindow) return false;
        const double cur = window_sum / static_cast<double>(window_count);
        window_sum = 0.0;
        window_count = 0;
        if (dwell >= kMaxDwell) return true;
        bool plateaued = dwell >= kMinDwell && prev_window >= 0.0 &&
                         cur >= kPlateauRatio * prev_window;
        prev_window = cur;
        return plateaued;
    }

    void advance(Eigen::Index p) {
        active = (active + 1) % p;
        dwell = 0;
        window_sum = 0.0;
        window_count = 0;
        prev_window = -1.0;
    }
};

struct StreamPlan {
    const Eigen::MatrixXd* samples = nullptr;
    std::vector<std::vector<Eigen::Index>> epochs;  // shared shuffled orders
    long total(long epoch_count) const {
        return epoch_count * static_cast<long>(samples->rows());
    }
};

AlgorithmCurve train_gan_on_stream(const std::string& name,
                                   const StreamPlan& plan,
                                   const Eigen::MatrixXd& reference,
                                   const ExperimentConfig& cfg,
                                   Eigen::Index q, long epoch_count,
                                   bool sequential, RandomStream rng) {
    const auto n = plan.samples->cols();
    const Eigen::Index k = cfg.pca_k;
    gan::GanConfig gcfg = gan::make_gan_config(
        n, k, cfg.p, q, cfg.tau, cfg.tau_tilde, cfg.lambda, cfg.eta_g,
        cfg.gen_cov.array().sqrt().matrix());

    RandomStream init_rng = rng.substream(0);
    RandomStream fake_rng = rng.substream(1);
    RandomStream reset_rng = rng.substream(2);
    gan::GanState state{
        scaled_random_init(n, cfg.p, *cfg.init_scale, init_rng),
        scaled_random_init(n, q, 1.0, init_rng, true), 0};

    AlgorithmCurve curve;
    curve.name = name;
    const long total = plan.total(epoch_count);
    auto record = [&](long step) {
        curve.step.push_back(static_cast<double>(step));
        curve.distance.push_back(geometry::grassmann_distance(
            left_singular_basis(state.generator, k), reference));
    };
    record(0);

    FeatureSchedule schedule;
    long step = 0;
    for (long e = 0; e < epoch_count; ++e) {
        for (Eigen::Index row : plan.epochs[static_cast<size_t>(e)]) {
            const Eigen::VectorXd y = plan.samples->row(row).transpose();
            Sample fake = gan::sample_generator(state.generator, gcfg,
                                                fake_rng);
            gan::GanState next =
                gan::sgd_step(state, y, fake.value, fake.latent, gcfg);
            if (sequential) {
                const Eigen::Index a = schedule.active;
                const double base =
                    std::max(state.generator.col(a).norm(), 1e-12);
                const double rel =
                    (next.generator.col(a) - state.generator.col(a)).norm() /
                    base;
                for (Eigen::Index j = 0; j < cfg.p; ++j) {
                    if (j != a) next.generator.col(j) = state.generator.col(j);
                }
                if (schedule.observe(rel)) {
                    schedule.advance(cfg.p);
                    next.discriminator =
                        scaled_random_init(n, q, 1.0, reset_rng, true);
                }
            }
            state = std::move(next);
            ++step;
            if (step % cfg.record_every == 0 || step == total) record(step);
        }
    }
    curve.basis = left_singular_basis(state.generator, k);
    curve.final_distance = curve.distance.back();
    return curve;
}

AlgorithmCurve train_baseline_on_stream(const std::string& name,
                                        const StreamPlan& plan,
                                        const Eigen::MatrixXd& reference,
                                        const ExperimentConfig& cfg,
                                        long epoch_count, bool grouse,
                                        RandomStream rng) {
    const auto n = plan.samples->cols();
    const double tau = cfg.baseline_tau > 0.0 ? cfg.baseline_tau : cfg.tau;
    RandomStream init_rng = rng.substream(0);
    baselines::BaselineState state = baselines::make_baseline_state(
        scaled_random_init(n, cfg.pca_k, 1.0, init_rng, true));

    AlgorithmCurve curve;
    curve.name = name;
    const long total = plan.total(epoch_count);
    auto record = [&](long step) {
        curve.step.push_back(static_cast<double>(step));
        curve.distance.push_back(
            geometry::grassmann_distance(state.basis, reference));
    };
    record(0);

    long step = 0;
    for (long e = 0; e < epoch_count; ++e) {
        for (Eigen::Index row : plan.epochs[static_cast<size_t>(e)]) {
            const Eigen::VectorXd y = plan.samples->row(row).transpose();
            state = grouse ? baselines::grouse_step(state, y, tau)
                           : baselines::oja_step(state, y, tau);
            ++step;
            if (step % cfg.record_every == 0 || step == total) record(step);
        }
    }
    curve.basis = state.basis;
    curve.final_distance = curve.distance.back();
    return curve;
}

}  // namespace

RealDataReport real_data_study(const ExperimentConfig& cfg,
                               const DatasetMatrix& raw) {
    RealDataReport report;
    const DatasetMatrix centered = data::center(raw);
    report.reference = data::pca_surrogate(centered, cfg.pca_k);
    report.img_rows = centered.img_rows;
    report.img_cols = centered.img_cols;

    RandomStream base(cfg.seeds.front(), 0);
    StreamPlan plan;
    plan.samples = &centered.samples;
    const long max_epochs = std::max(cfg.epochs_multi, cfg.epochs_single);
    for (long e = 0; e < max_epochs; ++e) {
        plan.epochs.push_back(shuffled_order(
            centered.samples.rows(),
            base.substream(1000 + static_cast<std::uint64_t>(e))));
    }

    report.curves.resize(4);
    std::vector<std::function<AlgorithmCurve()>> tasks = {
        [&] {
            return train_gan_on_stream("multi-feature", plan, report.reference,
                                       cfg, cfg.pca_k, cfg.epochs_multi,
                                       false, base.substream(1));
        },
        [&] {
            return train_gan_on_stream("single-feature", plan,
                                       report.reference, cfg, 1,
                                       cfg.epochs_single, true,
                                       base.substream(2));
        },
        [&] {
            return train_baseline_on_stream("oja", plan, report.reference,
                                            cfg, cfg.epochs_multi, false,
                                            base.substream(3));
        },
        [&] {
            return train_baseline_on_stream("grouse", plan, report.reference,
                                            cfg, cfg.epochs_multi, true,
                                            base.substream(4));
        },
    };
    parallel_for(tasks.size(),
                 [&](size_t i) { report.curves[i] = tasks[i](); });
    return report;
}

// ---------------------------------------------------------------------------
// orchestration
// ---------------------------------------------------------------------------

namespace {

struct Outputs {
    std::string summary;
    std::vector<std::pair<std::string, std::string>> files;  // name, bytes
};

std::string diag_header(Eigen::Index count, const char* prefix) {
    std::string h = "step";
    for (Eigen::Index i = 0; i < count; ++i) {
        h += ',';
        h += prefix + std::to_string(i + 1);
    }
    return h;
}
(void)diag_header;  // reserved for richer exports

std::vector<Series> diagonal_series(const ode::Trajectory& traj,
                                    const std::string& prefix) {
    const Eigen::Index feat =
        std::min(traj.front().state.p.rows(), traj.front().state.p.cols());
    std::vector<Series> series(static_cast<size_t>(feat));
    for (Eigen::Index i = 0; i < feat; ++i) {
        auto& s = series[static_cast<size_t>(i)];
        s.name = prefix + "P_" + std::to_string(i + 1) + "_" +
                 std::to_string(i + 1);
        for (const auto& pt : traj) {
            s.x.push_back(pt.t);
            s.y.push_back(pt.state.p(i, i));
        }
    }
    return series;
}

Outputs run_ode_kind(const ExperimentConfig& cfg) {
    ode::Trajectory traj =
        ode::integrate(initial_macro_state(cfg), ode_system(cfg), cfg.t_end,
                       cfg.dt, cfg.record_every);
    Outputs out;
    out.files.emplace_back("trajectory.csv", trajectory_csv(traj));
    PlotStyle style{"macroscopic diagonal overlaps", "t", "P_ii",
                    800, 480};
    out.files.emplace_back("diagonals.svg",
                           render_svg(diagonal_series(traj, ""), style));
    out.summary = "points = " + std::to_string(traj.size()) + "\n";
    if (traj.size() >= 100) {
        out.summary += std::string("regime = ") +
                       ode::regime_name(ode::classify_regime(traj)) + "\n";
    } else {
        out.summary += "regime = n/a (needs at least 100 recorded points)\n";
    }
    out.summary += "final min diagonal similarity = " +
                   fmt(min_diag_similarity(traj.back().state)) + "\n";
    return out;
}

Outputs run_gan_kind(const ExperimentConfig& cfg) {
    const long steps = cfg.steps;
    std::vector<ode::Trajectory> runs(cfg.seeds.size());
    parallel_for(cfg.seeds.size(), [&](size_t si) {
        runs[si] = train_run(cfg, cfg.n, cfg.seeds[si], 0, steps,
                             cfg.record_every);
    });
    Outputs out;
    for (size_t si = 0; si < cfg.seeds.size(); ++si) {
        out.files.emplace_back(
            "trajectory_seed" + std::to_string(cfg.seeds[si]) + ".csv",
            trajectory_csv(runs[si]));
        out.summary += "seed " + std::to_string(cfg.seeds[si]) +
                       ": final min diagonal similarity = " +
                       fmt(min_diag_similarity(runs[si].back().state)) +
                       ", max |Z - I| = " + fmt(max_z_defect(runs[si])) + "\n";
    }
    PlotStyle style{"empirical diagonal overlaps (seed " +
                        std::to_string(cfg.seeds.front()) + ")",
                    "t = k/n", "P_ii", 800, 480};
    out.files.emplace_back("diagonals.svg",
                           render_svg(diagonal_series(runs[0], ""), style));
    return out;
}

Outputs run_baseline_kind(const ExperimentConfig& cfg) {
    const bool grouse = cfg.kind == Kind::grouse;
    std::vector<Eigen::MatrixXd> tables(cfg.seeds.size());
    parallel_for(cfg.seeds.size(), [&](size_t si) {
        RandomStream rng(cfg.seeds[si], 0);
        SpikedModel model = truth_model(cfg, cfg.n);
        RandomStream init_rng = rng.substream(0);
        baselines::BaselineState state = baselines::make_baseline_state(
            scaled_random_init(cfg.n, cfg.q, 1.0, init_rng, true));
        data::SpikedStream stream(model, cfg.steps, rng.substream(1));
        std::vector<double> steps_axis{0.0};
        std::vector<double> dists{
            geometry::grassmann_distance(state.basis, model.basis)};
        long k = 0;
        while (auto sample = stream.next()) {
            state = grouse
                        ? baselines::grouse_step(state, sample->value, cfg.tau)
                        : baselines::oja_step(state, sample->value, cfg.tau);
            ++k;
            if (k % cfg.record_every == 0 || k == cfg.steps) {
                steps_axis.push_back(static_cast<double>(k));
                dists.push_back(geometry::grassmann_distance(state.basis,
                                                             model.basis));
            }
        }
        Eigen::MatrixXd table(static_cast<Eigen::Index>(dists.size()), 3);
        for (size_t j = 0; j < dists.size(); ++j) {
            table(static_cast<Eigen::Index>(j), 0) = steps_axis[j];
            table(static_cast<Eigen::Index>(j), 1) =
                steps_axis[j] / static_cast<double>(cfg.n);
            table(static_cast<Eigen::Index>(j), 2) = dists[j];
        }
        tables[si] = std::move(table);
    });

    Outputs out;
    std::vector<Series> series;
    for (size_t si = 0; si < cfg.seeds.size(); ++si) {
        out.files.emplace_back(
            "distance_seed" + std::to_string(cfg.seeds[si]) + ".csv",
            table_csv({"step", "t", "distance"}, tables[si]));
        Series s;
        s.name = "seed " + std::to_string(cfg.seeds[si]);
        for (Eigen::Index j = 0; j < tables[si].rows(); ++j) {
            s.x.push_back(tables[si](j, 1));
            s.y.push_back(tables[si](j, 2));
        }
        series.push_back(std::move(s));
        out.summary += "seed " + std::to_string(cfg.seeds[si]) +
                       ": final distance = " +
                       fmt(tables[si](tables[si].rows() - 1, 2)) + "\n";
    }
    PlotStyle style{std::string(grouse ? "grouse" : "oja") +
                        " subspace distance",
                    "t = k/n", "Grassmann distance", 800, 480};
    out.files.emplace_back("distance.svg", render_svg(series, style));
    return out;
}

Outputs run_compare_kind(const ExperimentConfig& cfg) {
    CompareReport report = run_compare(cfg);
    Outputs out;
    Eigen::MatrixXd table(static_cast<Eigen::Index>(report.ns.size()), 3);
    for (size_t i = 0; i < report.ns.size(); ++i) {
        auto r = static_cast<Eigen::Index>(i);
        table(r, 0) = static_cast<double>(report.ns[i]);
        table(r, 1) = report.mean_dev[i];
        table(r, 2) = report.std_dev[i];
        out.summary += "n = " + std::to_string(report.ns[i]) +
                       ": sup deviation = " + fmt(report.mean_dev[i]) +
                       " +- " + fmt(report.std_dev[i]) + "\n";
    }
    out.summary += "log-log slope = " + fmt(report.slope) + "\n";
    out.files.emplace_back(
        "deviation.csv",
        table_csv({"n", "mean_deviation", "std_deviation"}, table));

    std::vector<Series> series;
    for (Eigen::Index i = 0; i < report.ode_diag.cols(); ++i) {
        Series sode, semp;
        sode.name = "ode P_" + std::to_string(i + 1) + "_" +
                    std::to_string(i + 1);
        semp.name = "empirical (mean)";
        for (size_t j = 0; j < report.grid.size(); ++j) {
            sode.x.push_back(report.grid[j]);
            sode.y.push_back(report.ode_diag(static_cast<Eigen::Index>(j), i));
            semp.x.push_back(report.grid[j]);
            semp.y.push_back(report.emp_diag(static_cast<Eigen::Index>(j), i));
        }
        series.push_back(std::move(sode));
        series.push_back(std::move(semp));
    }
    PlotStyle style{"ODE vs empirical diagonals (n = " +
                        std::to_string(report.ns.back()) + ")",
                    "t", "P_ii", 800, 480};
    out.files.emplace_back("overlay.svg", render_svg(series, style));
    return out;
}

Outputs run_offdiag_kind(const ExperimentConfig& cfg) {
    OffdiagReport report = run_offdiagonal_study(cfg);
    Outputs out;
    Eigen::MatrixXd table(static_cast<Eigen::Index>(report.rows.size()), 7);
    for (size_t i = 0; i < report.rows.size(); ++i) {
        const OffdiagRow& row = report.rows[i];
        auto r = static_cast<Eigen::Index>(i);
        table(r, 0) = row.init;
        table(r, 1) = row.budget;
        table(r, 2) = row.multi_steady;
        table(r, 3) = row.single_steady;
        table(r, 4) = row.gap;
        table(r, 5) = row.multi_t_half;
        table(r, 6) = row.single_t_half;
        out.summary += "init " + fmt(row.init) + ": budget t = " +
                       fmt(row.budget) + ", multi = " + fmt(row.multi_steady) +
                       ", single = " + fmt(row.single_steady) + ", gap = " +
                       fmt(row.gap) + "\n";
    }
    out.files.emplace_back(
        "study.csv",
        table_csv({"init", "budget_t", "multi_steady", "single_steady", "gap",
                   "multi_t_half", "single_t_half"},
                  table));
    std::vector<Series> series;
    for (size_t ci = 0; ci < report.rows.size(); ++ci) {
        Series s;
        s.name = "init " + fmt(report.rows[ci].init);
        for (size_t j = 0; j < report.grid.size(); ++j) {
            s.x.push_back(report.grid[j]);
            s.y.push_back(report.multi_curves(static_cast<Eigen::Index>(j),
                                              static_cast<Eigen::Index>(ci)));
        }
        series.push_back(std::move(s));
    }
    PlotStyle style{"multi-feature min diagonal similarity", "t",
                    "min |P_ii| / sqrt(S_ii)", 800, 480};
    out.files.emplace_back("curves.svg", render_svg(series, style));
    return out;
}

Outputs run_uplift_kind(const ExperimentConfig& cfg) {
    UpliftReport report = run_uplift_demo(cfg);
    Outputs out;
    out.files.emplace_back("plain.csv", trajectory_csv(report.plain));
    out.files.emplace_back("uplifted.csv", trajectory_csv(report.uplifted));
    std::vector<Series> series = diagonal_series(report.plain, "plain ");
    std::vector<Series> upl = diagonal_series(report.uplifted, "padded ");
    series.insert(series.end(), upl.begin(), upl.end());
    PlotStyle style{"plain vs rank-padded diagonals", "t", "P_ii", 800, 480};
    out.files.emplace_back("overlay.svg", render_svg(series, style));
    out.summary =
        "max first-block deviation = " + fmt(report.max_first_block_dev) +
        "\nmin padded-state eigenvalue = " + fmt(report.min_block_eigenvalue) +
        "\n";
    return out;
}

DatasetMatrix load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open dataset: " + path);
    unsigned char head[4] = {1, 1, 1, 1};
    in.read(reinterpret_cast<char*>(head), 4);
    in.close();
    if (head[0] == 0 && head[1] == 0 && head[2] == 8 && head[3] == 3) {
        return data::load_idx_images(path);
    }
    return data::load_csv_matrix(path);
}

Outputs run_real_data_kind(const ExperimentConfig& cfg) {
    RealDataReport report = real_data_study(cfg, load_dataset(cfg.dataset));
    Outputs out;

    auto basis_table = [&](const Eigen::MatrixXd& basis) {
        std::vector<std::string> cols;
        for (Eigen::Index j = 0; j < basis.cols(); ++j) {
            cols.push_back("b_" + std::to_string(j + 1));
        }
        return table_csv(cols, basis);
    };
    out.files.emplace_back("basis_pca.csv", basis_table(report.reference));

    std::vector<Series> series;
    for (const AlgorithmCurve& curve : report.curves) {
        Eigen::MatrixXd table(static_cast<Eigen::Index>(curve.step.size()), 2);
        for (size_t j = 0; j < curve.step.size(); ++j) {
            table(static_cast<Eigen::Index>(j), 0) = curve.step[j];
            table(static_cast<Eigen::Index>(j), 1) = curve.distance[j];
        }
        out.files.emplace_back("distances_" + curve.name + ".csv",
                               table_csv({"step", "distance"}, table));
        out.files.emplace_back("basis_" + curve.name + ".csv",
                               basis_table(curve.basis));
        Series s;
        s.name = curve.name;
        s.x = curve.step;
        s.y = curve.distance;
        series.push_back(std::move(s));
        out.summary += curve.name + ": final distance = " +
                       fmt(curve.final_distance) + "\n";
    }
    PlotStyle style{"subspace distance to the PCA surrogate", "step",
                    "Grassmann distance", 800, 480};
    out.files.emplace_back("distances.svg", render_svg(series, style));

    if (report.img_rows > 0 && report.img_cols > 0) {
        out.files.emplace_back(
            "features_pca.svg",
            feature_grid_svg(report.reference, report.img_rows,
                             report.img_cols));
        for (const AlgorithmCurve& curve : report.curves) {
            out.files.emplace_back(
                "features_" + curve.name + ".svg",
                feature_grid_svg(curve.basis, report.img_rows,
                                 report.img_cols));
        }
    }
    return out;
}

}  // namespace

RunReport run(const ExperimentConfig& cfg) {
    if (cfg.out.empty()) {
        throw ConfigError("config field 'out': required to run an experiment");
    }
    const auto start = std::chrono::steady_clock::now();

    Outputs outputs;
    switch (cfg.kind) {
        case Kind::ode: outputs = run_ode_kind(cfg); break;
        case Kind::gan: outputs = run_gan_kind(cfg); break;
        case Kind::oja:
        case Kind::grouse: outputs = run_baseline_kind(cfg); break;
        case Kind::compare: outputs = run_compare_kind(cfg); break;
        case Kind::offdiag: outputs = run_offdiag_kind(cfg); break;
        case Kind::real_data: outputs = run_real_data_kind(cfg); break;
        case Kind::uplift: outputs = run_uplift_kind(cfg); break;
    }

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out);
    RunReport report;
    for (const auto& [name, bytes] : outputs.files) {
        write_file_atomic((fs::path(cfg.out) / name).string(), bytes);
        report.files.push_back(name);
    }
    const double duration =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    write_manifest(cfg, report.files, duration);
    report.files.push_back("manifest.txt");
    report.summary = outputs.summary;
    return report;
}

}  // namespace subspace::harness
