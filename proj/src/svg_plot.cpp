#include "replaylab/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include "replaylab/errors.hpp"

namespace replaylab {

std::vector<PlotSeries> build_series(const std::vector<MetricsRow>& rows) {
    if (rows.empty()) {
        throw ConfigError("no metrics rows to plot");
    }

    // variant label -> episode (1-based) -> values across seeds
    std::map<std::string, std::map<std::size_t, std::vector<double>>> grouped;
    for (const auto& r : rows) {
        grouped[VariantKey{r.strategy, r.beta}.label()][r.episode].push_back(r.mean_reward_100);
    }

    std::size_t episodes = 0;
    for (const auto& [label, per_episode] : grouped) {
        if (episodes == 0) {
            episodes = per_episode.size();
        } else if (per_episode.size() != episodes) {
            throw AlignmentError("variant " + label + " has " +
                                 std::to_string(per_episode.size()) + " episodes, expected " +
                                 std::to_string(episodes));
        }
    }

    std::vector<PlotSeries> series;
    for (const auto& [label, per_episode] : grouped) {
        PlotSeries s;
        s.label = label;
        std::size_t expect = 1;
        for (const auto& [episode, values] : per_episode) {
            if (episode != expect++) {
                throw AlignmentError("variant " + label + " is missing episode " +
                                     std::to_string(expect - 1));
            }
            double sum = 0.0;
            double lo = values.front();
            double hi = values.front();
            for (const double v : values) {
                sum += v;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            s.mean.push_back(sum / static_cast<double>(values.size()));
            s.lo.push_back(lo);
            s.hi.push_back(hi);
        }
        series.push_back(std::move(s));
    }
    return series;
}

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;
constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 44.0;
constexpr double kMarginBottom = 52.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

/// Round tic labels: trims trailing zeros so axes stay readable.
std::string tic_label(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

struct Scale {
    double lo, hi, plot_lo, plot_hi;

    double operator()(double v) const {
        return plot_lo + (v - lo) / (hi - lo) * (plot_hi - plot_lo);
    }
};

/// Picks a "nice" tic spacing (1/2/5 x power of ten) for roughly `target` tics.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (const double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw) {
            return mag * m;
        }
    }
    return mag * 10.0;
}

} // namespace

void write_reward_curve_svg(const std::filesystem::path& path,
                            const std::vector<PlotSeries>& series, const std::string& title) {
    if (series.empty()) {
        throw ConfigError("no series to plot");
    }

    std::size_t episodes = 0;
    double y_lo = std::numeric_limits<double>::infinity();
    double y_hi = -std::numeric_limits<double>::infinity();
    for (const auto& s : series) {
        episodes = std::max(episodes, s.mean.size());
        for (std::size_t i = 0; i < s.mean.size(); ++i) {
            y_lo = std::min(y_lo, s.lo[i]);
            y_hi = std::max(y_hi, s.hi[i]);
        }
    }
    if (episodes == 0 || !std::isfinite(y_lo) || !std::isfinite(y_hi)) {
        throw ConfigError("series contain no plottable points");
    }
    if (y_hi == y_lo) {
        y_hi = y_lo + 1.0; // flat series still need a nonzero range
    }
    const double pad = 0.04 * (y_hi - y_lo);
    const Scale sx{1.0, static_cast<double>(std::max<std::size_t>(episodes, 2)), kMarginLeft,
                   kWidth - kMarginRight};
    const Scale sy{y_lo - pad, y_hi + pad, kHeight - kMarginBottom, kMarginTop};

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write plot file: " + path.string());
    }

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // Axes frame
    out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
        << kWidth - kMarginLeft - kMarginRight << "\" height=\""
        << kHeight - kMarginTop - kMarginBottom
        << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

    // Y tics and grid lines
    const double ystep = nice_step(sy.lo != sy.hi ? (y_hi + pad) - (y_lo - pad) : 1.0, 6);
    for (double v = std::ceil((y_lo - pad) / ystep) * ystep; v <= y_hi + pad; v += ystep) {
        const double y = sy(v);
        out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << fmt(y) << "\" x2=\""
            << kWidth - kMarginRight << "\" y2=\"" << fmt(y)
            << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n"
            << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << fmt(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
            << tic_label(v) << "</text>\n";
    }

    // X tics
    const double xstep = nice_step(static_cast<double>(episodes), 8);
    for (double v = xstep; v <= static_cast<double>(episodes); v += xstep) {
        const double x = sx(v);
        out << "<line x1=\"" << fmt(x) << "\" y1=\"" << kHeight - kMarginBottom << "\" x2=\""
            << fmt(x) << "\" y2=\"" << kHeight - kMarginBottom + 5
            << "\" stroke=\"#333\" stroke-width=\"1\"/>\n"
            << "<text x=\"" << fmt(x) << "\" y=\"" << kHeight - kMarginBottom + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << tic_label(v) << "</text>\n";
    }

    out << "<text x=\"" << (kMarginLeft + kWidth - kMarginRight) / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">episode"
        << "</text>\n"
        << "<text x=\"18\" y=\"" << (kMarginTop + kHeight - kMarginBottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << (kMarginTop + kHeight - kMarginBottom) / 2
        << ")\">mean reward (100-episode window)</text>\n";

    // Bands first so lines draw on top.
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        bool has_band = false;
        for (std::size_t i = 0; i < s.mean.size(); ++i) {
            if (s.lo[i] != s.hi[i]) {
                has_band = true;
                break;
            }
        }
        if (!has_band || s.mean.empty()) {
            continue;
        }
        out << "<path fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" d=\"M";
        for (std::size_t i = 0; i < s.mean.size(); ++i) {
            out << fmt(sx(static_cast<double>(i + 1))) << " " << fmt(sy(s.hi[i]))
                << (i + 1 < s.mean.size() ? " L" : " ");
        }
        for (std::size_t i = s.mean.size(); i-- > 0;) {
            out << "L" << fmt(sx(static_cast<double>(i + 1))) << " " << fmt(sy(s.lo[i])) << " ";
        }
        out << "Z\"/>\n";
    }

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        if (s.mean.empty()) {
            continue;
        }
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < s.mean.size(); ++i) {
            out << fmt(sx(static_cast<double>(i + 1))) << "," << fmt(sy(s.mean[i])) << " ";
        }
        out << "\"/>\n";
    }

    // Legend, top-right inside the frame.
    const double lx = kWidth - kMarginRight - 250;
    double ly = kMarginTop + 14;
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 26 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << lx + 32 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[si].label
            << "</text>\n";
        ly += 18;
    }

    out << "</svg>\n";
    if (!out) {
        throw std::runtime_error("failed writing plot file: " + path.string());
    }
}

} // namespace replaylab
