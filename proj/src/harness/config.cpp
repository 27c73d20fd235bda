#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "subspace/common.hpp"
#include "subspace/harness.hpp"

namespace subspace::harness {

namespace {

const std::set<std::string> kKnownKeys = {
    "kind",       "n",          "d",             "p",
    "q",          "tau",        "tau_tilde",     "lambda",
    "eta_t",      "eta_g",      "signal_cov",    "gen_cov",
    "init_scale", "init_p",     "init_q",        "init_s",
    "init_r",     "steps",      "t_end",         "dt",
    "record_every", "seeds",    "n_list",        "init_list",
    "t_max",      "dataset",    "pca_k",         "epochs_multi",
    "epochs_single", "baseline_tau", "out",
};

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw ConfigError("config field '" + key + "': " + what);
}

std::string trim(std::string_view s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string_view::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return std::string(s.substr(a, b - a + 1));
}

double to_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        fail(key, "expected a number, got '" + text + "'");
    }
    if (std::isnan(v)) fail(key, "NaN is not a valid value");
    return v;
}

long to_long(const std::string& key, const std::string& text) {
    long v = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        fail(key, "expected an integer, got '" + text + "'");
    }
    return v;
}

std::vector<std::string> split_list(const std::string& key,
                                    const std::string& text) {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
        fail(key, "expected a bracketed list, got '" + text + "'");
    }
    std::string inner = trim(std::string_view(text).substr(1, text.size() - 2));
    std::vector<std::string> items;
    if (inner.empty()) return items;
    size_t start = 0;
    while (true) {
        size_t pos = inner.find(',', start);
        std::string item = trim(pos == std::string::npos
                                    ? std::string_view(inner).substr(start)
                                    : std::string_view(inner).substr(
                                          start, pos - start));
        if (item.empty()) fail(key, "empty list element");
        items.push_back(item);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return items;
}

// Raw `key = value` assignments, later ones overriding earlier ones.
class Raw {
  public:
    explicit Raw(const std::string& text) {
        size_t start = 0;
        long line_no = 0;
        while (start <= text.size()) {
            size_t end = text.find('\n', start);
            std::string line = trim(std::string_view(text).substr(
                start, end == std::string::npos ? std::string::npos
                                                : end - start));
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty() && line[0] != '#') {
                size_t eq = line.find('=');
                if (eq == std::string::npos) {
                    throw ConfigError("config line " + std::to_string(line_no) +
                                      ": expected 'key = value', got '" + line +
                                      "'");
                }
                std::string key = trim(std::string_view(line).substr(0, eq));
                std::string value = trim(std::string_view(line).substr(eq + 1));
                if (!kKnownKeys.count(key)) {
                    throw ConfigError("config line " + std::to_string(line_no) +
                                      ": unknown key '" + key + "'");
                }
                kv_[key] = value;
            }
            if (end == std::string::npos) break;
            start = end + 1;
        }
    }

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    const std::string& raw(const std::string& key) const {
        return kv_.at(key);
    }

    void require(const std::string& key, const char* kind) const {
        if (!has(key)) fail(key, std::string("required for kind '") + kind + "'");
    }

    double number(const std::string& key) const {
        return to_double(key, kv_.at(key));
    }

    long integer(const std::string& key) const {
        return to_long(key, kv_.at(key));
    }

    std::vector<double> numbers(const std::string& key) const {
        std::vector<double> out;
        for (const auto& item : split_list(key, kv_.at(key))) {
            out.push_back(to_double(key, item));
        }
        return out;
    }

    std::vector<long> integers(const std::string& key) const {
        std::vector<long> out;
        for (const auto& item : split_list(key, kv_.at(key))) {
            out.push_back(to_long(key, item));
        }
        return out;
    }

    std::vector<std::uint64_t> u64s(const std::string& key) const {
        std::vector<std::uint64_t> out;
        for (const auto& item : split_list(key, kv_.at(key))) {
            unsigned long long v = 0;
            auto res = std::from_chars(item.data(), item.data() + item.size(), v);
            if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
                fail(key, "expected an unsigned integer, got '" + item + "'");
            }
            out.push_back(v);
        }
        return out;
    }

    Eigen::VectorXd vector(const std::string& key, Eigen::Index len) const {
        std::vector<double> vals = numbers(key);
        if (vals.size() == 1 && len > 1) {  // broadcast a scalar list
            vals.assign(static_cast<size_t>(len), vals[0]);
        }
        if (static_cast<Eigen::Index>(vals.size()) != len) {
            fail(key, "expected " + std::to_string(len) + " entries, got " +
                          std::to_string(vals.size()));
        }
        Eigen::VectorXd v(len);
        for (Eigen::Index i = 0; i < len; ++i)
            v(i) = vals[static_cast<size_t>(i)];
        return v;
    }

    Eigen::MatrixXd matrix(const std::string& key, Eigen::Index rows,
                           Eigen::Index cols) const {
        std::vector<double> vals = numbers(key);
        if (static_cast<Eigen::Index>(vals.size()) != rows * cols) {
            fail(key, "expected " + std::to_string(rows * cols) +
                          " entries (" + std::to_string(rows) + " x " +
                          std::to_string(cols) + ", row-major), got " +
                          std::to_string(vals.size()));
        }
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j)
                m(i, j) = vals[static_cast<size_t>(i * cols + j)];
        return m;
    }

  private:
    std::map<std::string, std::string> kv_;
};

void check_positive(const std::string& key, double v) {
    if (!(v > 0.0)) fail(key, "must be positive, got " + std::to_string(v));
}

void check_nonnegative(const std::string& key, double v) {
    if (!(v >= 0.0)) fail(key, "must be nonnegative, got " + std::to_string(v));
}

void check_cov_entries(const std::string& key, const Eigen::VectorXd& v,
                       bool strictly_positive) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (strictly_positive ? !(v(i) > 0.0) : !(v(i) >= 0.0)) {
            fail(key, "entry " + std::to_string(i + 1) + " must be " +
                          (strictly_positive ? "positive" : "nonnegative"));
        }
    }
}

// Ranks, rates, noise levels, covariances, and the initialization spec shared
// by the dynamical kinds. `gen_len` is the expected gen_cov length and
// `positive_cov` demands strictly positive variances (empirical kinds sample
// with Lambda^{1/2}).
void read_dynamics(const Raw& raw, const char* kind, ExperimentConfig& cfg,
                   bool positive_cov, bool allow_init_r) {
    for (const char* key : {"d", "p", "q", "tau", "tau_tilde", "eta_t", "eta_g",
                            "signal_cov", "gen_cov"}) {
        raw.require(key, kind);
    }
    cfg.d = raw.integer("d");
    cfg.p = raw.integer("p");
    cfg.q = raw.integer("q");
    if (cfg.d < 1) fail("d", "must be at least 1");
    if (cfg.p < 1) fail("p", "must be at least 1");
    if (cfg.q < 1) fail("q", "must be at least 1");
    cfg.tau = raw.number("tau");
    cfg.tau_tilde = raw.number("tau_tilde");
    check_positive("tau", cfg.tau);
    check_positive("tau_tilde", cfg.tau_tilde);
    cfg.eta_t = raw.number("eta_t");
    cfg.eta_g = raw.number("eta_g");
    check_nonnegative("eta_t", cfg.eta_t);
    check_nonnegative("eta_g", cfg.eta_g);
    cfg.signal_cov = raw.vector("signal_cov", cfg.d);
    check_cov_entries("signal_cov", cfg.signal_cov, positive_cov);
    Eigen::Index gen_len = cfg.kind == Kind::uplift ? cfg.d : cfg.p;
    cfg.gen_cov = raw.vector("gen_cov", gen_len);
    check_cov_entries("gen_cov", cfg.gen_cov, positive_cov);

    bool blocks = raw.has("init_p") || raw.has("init_q") || raw.has("init_s");
    if (blocks && raw.has("init_scale")) {
        fail("init_scale", "give either init_scale or the init_p/q/s blocks, "
                           "not both");
    }
    if (blocks) {
        for (const char* key : {"init_p", "init_q", "init_s"}) {
            raw.require(key, kind);
        }
        cfg.init_p = raw.matrix("init_p", cfg.d, cfg.p);
        cfg.init_q = raw.matrix("init_q", cfg.d, cfg.q);
        cfg.init_s = raw.matrix("init_s", cfg.p, cfg.p);
        if (raw.has("init_r")) {
            if (!allow_init_r) {
                fail("init_r", "only the ode kind accepts an explicit R block; "
                               "matched micro initializations pin R = P0^T Q0");
            }
            cfg.init_r = raw.matrix("init_r", cfg.p, cfg.q);
        }
    } else {
        raw.require("init_scale", kind);
        cfg.init_scale = raw.number("init_scale");
        check_nonnegative("init_scale", *cfg.init_scale);
    }
}

void read_ode_grid(const Raw& raw, const char* kind, ExperimentConfig& cfg) {
    raw.require("t_end", kind);
    raw.require("dt", kind);
    cfg.t_end = raw.number("t_end");
    cfg.dt = raw.number("dt");
    check_positive("t_end", cfg.t_end);
    check_positive("dt", cfg.dt);
    if (cfg.dt > cfg.t_end) fail("dt", "must not exceed t_end");
    double steps = cfg.t_end / cfg.dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps) {
        fail("dt", "t_end must be an integer number of dt steps");
    }
}

void read_empirical_size(const Raw& raw, const char* kind,
                         ExperimentConfig& cfg) {
    raw.require("n", kind);
    raw.require("steps", kind);
    cfg.n = raw.integer("n");
    cfg.steps = raw.integer("steps");
    if (cfg.n < 1) fail("n", "must be at least 1");
    if (cfg.steps < 1) fail("steps", "must be at least 1");
}

void check_player_ranks(const ExperimentConfig& cfg) {
    if (cfg.q > cfg.p) fail("q", "must not exceed p");
    if (cfg.p > cfg.n && cfg.n > 0) fail("p", "must not exceed n");
    if (cfg.d > cfg.n && cfg.n > 0) fail("d", "must not exceed n");
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_list(const Eigen::VectorXd& v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_number(v(i));
    }
    return out + "]";
}

std::string format_matrix(const Eigen::MatrixXd& m) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i + j > 0) out += ", ";
            out += format_number(m(i, j));
        }
    }
    return out + "]";
}

}  // namespace

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::ode: return "ode";
        case Kind::gan: return "gan";
        case Kind::oja: return "oja";
        case Kind::grouse: return "grouse";
        case Kind::compare: return "compare";
        case Kind::offdiag: return "offdiag";
        case Kind::real_data: return "real-data";
        case Kind::uplift: return "uplift";
    }
    return "?";
}

Kind parse_kind(const std::string& name) {
    for (Kind k : {Kind::ode, Kind::gan, Kind::oja, Kind::grouse, Kind::compare,
                   Kind::offdiag, Kind::real_data, Kind::uplift}) {
        if (name == kind_name(k)) return k;
    }
    throw ConfigError("config field 'kind': unknown experiment kind '" + name +
                      "'");
}

ExperimentConfig parse_config(const std::string& text) {
    Raw raw(text);
    ExperimentConfig cfg;
    raw.require("kind", "any");
    cfg.kind = parse_kind(raw.raw("kind"));
    const char* kind = kind_name(cfg.kind);

    if (raw.has("record_every")) {
        long re = raw.integer("record_every");
        if (re < 1) fail("record_every", "must be at least 1");
        cfg.record_every = static_cast<int>(re);
    }
    if (raw.has("seeds")) {
        cfg.seeds = raw.u64s("seeds");
        if (cfg.seeds.empty()) fail("seeds", "must list at least one seed");
        std::set<std::uint64_t> unique(cfg.seeds.begin(), cfg.seeds.end());
        if (unique.size() != cfg.seeds.size()) fail("seeds", "duplicate seed");
    }
    if (raw.has("lambda")) {
        cfg.lambda = raw.number("lambda");
        if (!(cfg.lambda > 0.0)) {
            fail("lambda", "must be positive or inf");
        }
    }
    if (raw.has("out")) cfg.out = raw.raw("out");

    switch (cfg.kind) {
        case Kind::ode: {
            read_dynamics(raw, kind, cfg, false, true);
            read_ode_grid(raw, kind, cfg);
            break;
        }
        case Kind::gan: {
            read_dynamics(raw, kind, cfg, true, false);
            read_empirical_size(raw, kind, cfg);
            check_player_ranks(cfg);
            break;
        }
        case Kind::oja:
        case Kind::grouse: {
            for (const char* key : {"d", "q", "tau", "eta_t", "signal_cov"}) {
                raw.require(key, kind);
            }
            cfg.d = raw.integer("d");
            cfg.q = raw.integer("q");
            if (cfg.d < 1) fail("d", "must be at least 1");
            if (cfg.q < 1) fail("q", "must be at least 1");
            cfg.tau = raw.number("tau");
            check_positive("tau", cfg.tau);
            cfg.eta_t = raw.number("eta_t");
            check_nonnegative("eta_t", cfg.eta_t);
            cfg.signal_cov = raw.vector("signal_cov", cfg.d);
            check_cov_entries("signal_cov", cfg.signal_cov, true);
            read_empirical_size(raw, kind, cfg);
            if (cfg.d > cfg.n) fail("d", "must not exceed n");
            if (cfg.q > cfg.n) fail("q", "must not exceed n");
            break;
        }
        case Kind::compare: {
            read_dynamics(raw, kind, cfg, true, false);
            read_ode_grid(raw, kind, cfg);
            raw.require("n_list", kind);
            cfg.n_list = raw.integers("n_list");
            if (cfg.n_list.empty()) fail("n_list", "must not be empty");
            for (size_t i = 0; i < cfg.n_list.size(); ++i) {
                if (cfg.n_list[i] < std::max<long>(cfg.p, cfg.d)) {
                    fail("n_list", "entry " + std::to_string(i + 1) +
                                       " is smaller than the player ranks");
                }
                if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1]) {
                    fail("n_list", "must be strictly increasing");
                }
            }
            double grid = cfg.dt * cfg.record_every;
            for (long n : cfg.n_list) {
                double stride = grid * static_cast<double>(n);
                if (std::abs(stride - std::round(stride)) > 1e-9 ||
                    std::round(stride) < 1.0) {
                    fail("record_every",
                         "dt * record_every * n must be a whole number of SGD "
                         "steps (n = " + std::to_string(n) + ")");
                }
            }
            break;
        }
        case Kind::offdiag: {
            for (const char* key : {"d", "p", "tau", "tau_tilde", "eta_t",
                                    "eta_g", "signal_cov", "gen_cov", "dt",
                                    "init_list"}) {
                raw.require(key, kind);
            }
            cfg.d = raw.integer("d");
            cfg.p = raw.integer("p");
            if (cfg.d < 1) fail("d", "must be at least 1");
            if (cfg.p < cfg.d) fail("p", "must be at least d");
            cfg.q = cfg.d;  // multi-feature width; the study adds q = 1 itself
            cfg.tau = raw.number("tau");
            cfg.tau_tilde = raw.number("tau_tilde");
            check_positive("tau", cfg.tau);
            check_positive("tau_tilde", cfg.tau_tilde);
            cfg.eta_t = raw.number("eta_t");
            cfg.eta_g = raw.number("eta_g");
            check_nonnegative("eta_t", cfg.eta_t);
            check_nonnegative("eta_g", cfg.eta_g);
            cfg.signal_cov = raw.vector("signal_cov", cfg.d);
            cfg.gen_cov = raw.vector("gen_cov", cfg.p);
            check_cov_entries("signal_cov", cfg.signal_cov, false);
            check_cov_entries("gen_cov", cfg.gen_cov, false);
            cfg.dt = raw.number("dt");
            check_positive("dt", cfg.dt);
            if (raw.has("t_max")) cfg.t_max = raw.number("t_max");
            check_positive("t_max", cfg.t_max);
            if (cfg.dt > cfg.t_max) fail("dt", "must not exceed t_max");
            cfg.init_list = raw.numbers("init_list");
            if (cfg.init_list.empty()) fail("init_list", "must not be empty");
            for (double c : cfg.init_list) check_nonnegative("init_list", c);
            break;
        }
        case Kind::real_data: {
            raw.require("dataset", kind);
            raw.require("pca_k", kind);
            cfg.dataset = raw.raw("dataset");
            if (cfg.dataset.empty()) fail("dataset", "must not be empty");
            cfg.pca_k = raw.integer("pca_k");
            if (cfg.pca_k < 1) fail("pca_k", "must be at least 1");
            cfg.p = raw.has("p") ? raw.integer("p") : cfg.pca_k;
            if (cfg.p < cfg.pca_k) fail("p", "must be at least pca_k");
            for (const char* key : {"tau", "tau_tilde", "eta_g", "gen_cov",
                                    "init_scale"}) {
                raw.require(key, kind);
            }
            cfg.tau = raw.number("tau");
            cfg.tau_tilde = raw.number("tau_tilde");
            check_positive("tau", cfg.tau);
            check_positive("tau_tilde", cfg.tau_tilde);
            cfg.eta_g = raw.number("eta_g");
            check_nonnegative("eta_g", cfg.eta_g);
            cfg.gen_cov = raw.vector("gen_cov", cfg.p);
            check_cov_entries("gen_cov", cfg.gen_cov, true);
            cfg.init_scale = raw.number("init_scale");
            check_positive("init_scale", *cfg.init_scale);
            if (raw.has("epochs_multi")) {
                cfg.epochs_multi = raw.integer("epochs_multi");
            }
            if (raw.has("epochs_single")) {
                cfg.epochs_single = raw.integer("epochs_single");
            }
            if (cfg.epochs_multi < 1) fail("epochs_multi", "must be at least 1");
            if (cfg.epochs_single < 1) {
                fail("epochs_single", "must be at least 1");
            }
            if (raw.has("baseline_tau")) {
                cfg.baseline_tau = raw.number("baseline_tau");
                check_positive("baseline_tau", cfg.baseline_tau);
            }
            break;
        }
        case Kind::uplift: {
            read_dynamics(raw, kind, cfg, false, false);
            if (!cfg.init_scale.has_value()) {
                fail("init_scale", "the uplift demo takes a diagonal "
                                   "initialization only");
            }
            if (cfg.q < cfg.d) fail("q", "must be at least d");
            if (cfg.q > cfg.p) fail("q", "must not exceed p");
            read_ode_grid(raw, kind, cfg);
            break;
        }
    }
    return cfg;
}

ExperimentConfig load_config(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::string text;
    if (!path.empty()) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot open config file: " + path);
        text.assign(std::istreambuf_iterator<char>(in),
                    std::istreambuf_iterator<char>{});
        if (!text.empty() && text.back() != '\n') text += '\n';
    }
    for (const auto& [key, value] : overrides) {
        text += key + " = " + value + "\n";
    }
    return parse_config(text);
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    auto put = [&](const char* key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    put("kind", kind_name(cfg.kind));
    if (cfg.n > 0) put("n", std::to_string(cfg.n));
    if (cfg.d > 0) put("d", std::to_string(cfg.d));
    if (cfg.p > 0) put("p", std::to_string(cfg.p));
    if (cfg.q > 0) put("q", std::to_string(cfg.q));
    if (cfg.tau > 0.0) put("tau", format_number(cfg.tau));
    if (cfg.tau_tilde > 0.0) put("tau_tilde", format_number(cfg.tau_tilde));
    put("lambda", format_number(cfg.lambda));
    if (cfg.signal_cov.size() > 0) {
        put("eta_t", format_number(cfg.eta_t));
    }
    if (cfg.gen_cov.size() > 0) {
        put("eta_g", format_number(cfg.eta_g));
    }
    if (cfg.signal_cov.size() > 0) {
        put("signal_cov", format_list(cfg.signal_cov));
    }
    if (cfg.gen_cov.size() > 0) put("gen_cov", format_list(cfg.gen_cov));
    if (cfg.init_scale.has_value()) {
        put("init_scale", format_number(*cfg.init_scale));
    }
    if (cfg.init_p.size() > 0) put("init_p", format_matrix(cfg.init_p));
    if (cfg.init_q.size() > 0) put("init_q", format_matrix(cfg.init_q));
    if (cfg.init_s.size() > 0) put("init_s", format_matrix(cfg.init_s));
    if (cfg.init_r.size() > 0) put("init_r", format_matrix(cfg.init_r));
    if (cfg.steps > 0) put("steps", std::to_string(cfg.steps));
    if (cfg.t_end > 0.0) put("t_end", format_number(cfg.t_end));
    if (cfg.dt > 0.0) put("dt", format_number(cfg.dt));
    put("record_every", std::to_string(cfg.record_every));
    {
        std::string seeds = "[";
        for (size_t i = 0; i < cfg.seeds.size(); ++i) {
            if (i > 0) seeds += ", ";
            seeds += std::to_string(cfg.seeds[i]);
        }
        put("seeds", seeds + "]");
    }
    if (!cfg.n_list.empty()) {
        std::string ns = "[";
        for (size_t i = 0; i < cfg.n_list.size(); ++i) {
            if (i > 0) ns += ", ";
            ns += std::to_string(cfg.n_list[i]);
        }
        put("n_list", ns + "]");
    }
    if (!cfg.init_list.empty()) {
        std::string cs = "[";
        for (size_t i = 0; i < cfg.init_list.size(); ++i) {
            if (i > 0) cs += ", ";
            cs += format_number(cfg.init_list[i]);
        }
        put("init_list", cs + "]");
        put("t_max", format_number(cfg.t_max));
    }
    if (!cfg.dataset.empty()) {
        put("dataset", cfg.dataset);
        put("pca_k", std::to_string(cfg.pca_k));
        put("epochs_multi", std::to_string(cfg.epochs_multi));
        put("epochs_single", std::to_string(cfg.epochs_single));
        if (cfg.baseline_tau > 0.0) {
            put("baseline_tau", format_number(cfg.baseline_tau));
        }
    }
    if (!cfg.out.empty()) put("out", cfg.out);
    return out;
}

MacroState initial_macro_state(const ExperimentConfig& cfg) {
    MacroState m;
    if (cfg.init_p.size() > 0) {
        m.p = cfg.init_p;
        m.q = cfg.init_q;
        m.s = cfg.init_s;
        m.r = cfg.init_r.size() > 0 ? cfg.init_r
                                    : Eigen::MatrixXd(m.p.transpose() * m.q);
    } else {
        if (!cfg.init_scale.has_value()) {
            throw ConfigError("config field 'init_scale': required");
        }
        double c = *cfg.init_scale;
        m.p = Eigen::MatrixXd::Zero(cfg.d, cfg.p);
        m.q = Eigen::MatrixXd::Zero(cfg.d, cfg.q);
        for (Eigen::Index i = 0; i < std::min(cfg.d, cfg.p); ++i) m.p(i, i) = c;
        for (Eigen::Index i = 0; i < std::min(cfg.d, cfg.q); ++i) m.q(i, i) = c;
        m.s = Eigen::MatrixXd::Identity(cfg.p, cfg.p);
        m.r = m.p.transpose() * m.q;
    }
    m.z = Eigen::MatrixXd::Identity(cfg.q, cfg.q);
    return m;
}

}  // namespace subspace::harness
