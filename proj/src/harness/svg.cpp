#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "subspace/harness.hpp"

namespace subspace::harness {

namespace {

constexpr int kMarginLeft = 62;
constexpr int kMarginRight = 150;
constexpr int kMarginTop = 34;
constexpr int kMarginBottom = 48;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    if (std::abs(v) < 1e-12) v = 0.0;  // avoid "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Tick spacing of the form {1, 2, 5} * 10^k giving at most `target` + 1 ticks.
double nice_step(double range, int target) {
    double raw = range / target;
    double base = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * base >= raw * (1.0 - 1e-12)) return m * base;
    }
    return 10.0 * base;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    std::vector<double> ticks;
};

Axis make_axis(double lo, double hi, bool pad) {
    Axis ax;
    if (!(hi > lo)) {
        double c = lo;
        lo = c - 1.0;
        hi = c + 1.0;
    } else if (pad) {
        double m = 0.05 * (hi - lo);
        lo -= m;
        hi += m;
    }
    ax.lo = lo;
    ax.hi = hi;
    double step = nice_step(hi - lo, 5);
    for (long i = static_cast<long>(std::ceil(lo / step - 1e-9));
         i * step <= hi + 1e-9 * step; ++i) {
        ax.ticks.push_back(i * step);
    }
    return ax;
}

}  // namespace

std::string render_svg(const std::vector<Series>& series,
                       const PlotStyle& style) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    size_t finite_points = 0;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) {
            throw std::invalid_argument("render_svg: series '" + s.name +
                                        "' has mismatched x/y lengths");
        }
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
            ++finite_points;
        }
    }
    if (series.empty() || finite_points == 0) {
        throw std::invalid_argument("render_svg: empty trajectory set");
    }

    const Axis xaxis = make_axis(xlo, xhi, false);
    const Axis yaxis = make_axis(ylo, yhi, true);
    const double plot_w = style.width - kMarginLeft - kMarginRight;
    const double plot_h = style.height - kMarginTop - kMarginBottom;
    const double x0 = kMarginLeft, y0 = kMarginTop;
    auto px = [&](double x) {
        return x0 + (x - xaxis.lo) / (xaxis.hi - xaxis.lo) * plot_w;
    };
    auto py = [&](double y) {
        return y0 + (yaxis.hi - y) / (yaxis.hi - yaxis.lo) * plot_h;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(style.width) + "\" height=\"" +
           std::to_string(style.height) + "\" viewBox=\"0 0 " +
           std::to_string(style.width) + " " + std::to_string(style.height) +
           "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + coord(x0 + plot_w / 2) + "\" y=\"20\" " +
           "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
           xml_escape(style.title) + "</text>\n";

    // gridlines and tick labels
    for (double t : xaxis.ticks) {
        double x = px(t);
        svg += "<line x1=\"" + coord(x) + "\" y1=\"" + coord(y0) + "\" x2=\"" +
               coord(x) + "\" y2=\"" + coord(y0 + plot_h) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + coord(x) + "\" y=\"" + coord(y0 + plot_h + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"11\">" +
               tick_label(t) + "</text>\n";
    }
    for (double t : yaxis.ticks) {
        double y = py(t);
        svg += "<line x1=\"" + coord(x0) + "\" y1=\"" + coord(y) + "\" x2=\"" +
               coord(x0 + plot_w) + "\" y2=\"" + coord(y) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + coord(x0 - 7) + "\" y=\"" + coord(y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"11\">" +
               tick_label(t) + "</text>\n";
    }

    // frame and axis titles
    svg += "<rect x=\"" + coord(x0) + "\" y=\"" + coord(y0) + "\" width=\"" +
           coord(plot_w) + "\" height=\"" + coord(plot_h) +
           "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + coord(x0 + plot_w / 2) + "\" y=\"" +
           coord(style.height - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">" +
           xml_escape(style.x_label) + "</text>\n";
    svg += "<text x=\"16\" y=\"" + coord(y0 + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\" transform=\"rotate(-90 16 " +
           coord(y0 + plot_h / 2) + ")\">" +
           xml_escape(style.y_label) + "</text>\n";

    // one polyline per maximal finite run of each series
    for (size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % kPaletteSize];
        std::string points;
        auto flush = [&]() {
            if (points.empty()) return;
            svg += "<polyline fill=\"none\" stroke=\"";
            svg += color;
            svg += "\" stroke-width=\"1.6\" points=\"" + points + "\"/>\n";
            points.clear();
        };
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                flush();
                continue;
            }
            if (!points.empty()) points += ' ';
            points += coord(px(s.x[i])) + "," + coord(py(s.y[i]));
        }
        flush();
    }

    // legend
    double lx = style.width - kMarginRight + 14;
    double ly = y0 + 8;
    for (size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % kPaletteSize];
        svg += "<line x1=\"" + coord(lx) + "\" y1=\"" + coord(ly) +
               "\" x2=\"" + coord(lx + 22) + "\" y2=\"" + coord(ly) +
               "\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + coord(lx + 28) + "\" y=\"" + coord(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" +
               xml_escape(series[si].name) + "</text>\n";
        ly += 18;
    }

    svg += "</svg>\n";
    return svg;
}

std::string feature_grid_svg(const Eigen::MatrixXd& basis,
                             Eigen::Index img_rows, Eigen::Index img_cols) {
    if (img_rows < 1 || img_cols < 1 ||
        basis.rows() != img_rows * img_cols || basis.cols() < 1) {
        throw std::invalid_argument(
            "feature_grid_svg: basis rows must equal img_rows * img_cols");
    }
    const Eigen::Index k = basis.cols();
    const int scale = 4, gap = 6;
    const auto grid_cols =
        static_cast<Eigen::Index>(std::ceil(std::sqrt(static_cast<double>(k))));
    const Eigen::Index grid_rows = (k + grid_cols - 1) / grid_cols;
    const long tile_w = img_cols * scale, tile_h = img_rows * scale;
    const long width = grid_cols * (tile_w + gap) + gap;
    const long height = grid_rows * (tile_h + gap) + gap;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(width) + "\" height=\"" + std::to_string(height) +
           "\" viewBox=\"0 0 " + std::to_string(width) + " " +
           std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"#202020\"/>\n";
    for (Eigen::Index f = 0; f < k; ++f) {
        const long ox = gap + (f % grid_cols) * (tile_w + gap);
        const long oy = gap + (f / grid_cols) * (tile_h + gap);
        const double lo = basis.col(f).minCoeff();
        const double hi = basis.col(f).maxCoeff();
        const double span = (hi > lo) ? hi - lo : 1.0;
        for (Eigen::Index r = 0; r < img_rows; ++r) {
            for (Eigen::Index c = 0; c < img_cols; ++c) {
                double v = (basis(r * img_cols + c, f) - lo) / span;
                int g = static_cast<int>(std::lround(255.0 * v));
                std::string col = std::to_string(g);
                svg += "<rect x=\"" + std::to_string(ox + c * scale) +
                       "\" y=\"" + std::to_string(oy + r * scale) +
                       "\" width=\"" + std::to_string(scale) + "\" height=\"" +
                       std::to_string(scale) + "\" fill=\"rgb(" + col + "," +
                       col + "," + col + ")\"/>\n";
            }
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace subspace::harness
