#include "lffrl/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lffrl {

namespace {

constexpr int kWidth = 640, kHeight = 420, kMargin = 50;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Scale {
    double lo, hi;
    double to_px(double v, double px_lo, double px_hi) const {
        double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
        return px_lo + t * (px_hi - px_lo);
    }
};

void axes(std::ostringstream& ss, const Scale& xs, const Scale& ys) {
    ss << "<rect width='" << kWidth << "' height='" << kHeight << "' fill='white'/>\n";
    ss << "<line x1='" << kMargin << "' y1='" << kHeight - kMargin << "' x2='"
       << kWidth - kMargin << "' y2='" << kHeight - kMargin
       << "' stroke='black' stroke-width='1'/>\n";
    ss << "<line x1='" << kMargin << "' y1='" << kMargin << "' x2='" << kMargin << "' y2='"
       << kHeight - kMargin << "' stroke='black' stroke-width='1'/>\n";
    for (int i = 0; i <= 4; ++i) {
        double fx = xs.lo + (xs.hi - xs.lo) * i / 4.0;
        double fy = ys.lo + (ys.hi - ys.lo) * i / 4.0;
        double px = kMargin + (kWidth - 2.0 * kMargin) * i / 4.0;
        double py = kHeight - kMargin - (kHeight - 2.0 * kMargin) * i / 4.0;
        ss << "<text x='" << px << "' y='" << kHeight - kMargin + 16
           << "' font-size='10' text-anchor='middle'>" << fx << "</text>\n";
        ss << "<text x='" << kMargin - 6 << "' y='" << py + 3
           << "' font-size='10' text-anchor='end'>" << fy << "</text>\n";
    }
}

}  // namespace

std::string render_line_svg(
    const std::vector<std::string>& series_names,
    const std::vector<std::vector<std::pair<double, double>>>& series) {
    Scale xs{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    Scale ys = xs;
    for (const auto& pts : series)
        for (auto [x, y] : pts) {
            xs.lo = std::min(xs.lo, x);
            xs.hi = std::max(xs.hi, x);
            ys.lo = std::min(ys.lo, y);
            ys.hi = std::max(ys.hi, y);
        }
    if (!(xs.lo < xs.hi)) xs.hi = xs.lo + 1.0;
    if (!(ys.lo < ys.hi)) ys.hi = ys.lo + 1.0;

    std::ostringstream ss;
    ss << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
       << kHeight << "'>\n";
    axes(ss, xs, ys);
    for (std::size_t s = 0; s < series.size(); ++s) {
        ss << "<polyline fill='none' stroke='" << kPalette[s % 8]
           << "' stroke-width='1.5' points='";
        for (auto [x, y] : series[s])
            ss << xs.to_px(x, kMargin, kWidth - kMargin) << ","
               << ys.to_px(y, kHeight - kMargin, kMargin) << " ";
        ss << "'/>\n";
        ss << "<text x='" << kWidth - kMargin + 4 << "' y='" << kMargin + 14 * s
           << "' font-size='10' fill='" << kPalette[s % 8] << "'>" << series_names[s]
           << "</text>\n";
    }
    ss << "</svg>\n";
    return ss.str();
}

std::string render_hist_svg(const std::vector<double>& values, int bins) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (values.empty() || !(lo < hi)) {
        lo = 0.0;
        hi = 1.0;
    }
    std::vector<int> counts(bins, 0);
    for (double v : values) {
        int b = std::min(static_cast<int>((v - lo) / (hi - lo) * bins), bins - 1);
        counts[std::max(b, 0)] += 1;
    }
    int cmax = *std::max_element(counts.begin(), counts.end());
    if (cmax == 0) cmax = 1;

    Scale xs{lo, hi};
    Scale ys{0.0, static_cast<double>(cmax)};
    std::ostringstream ss;
    ss << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
       << kHeight << "'>\n";
    axes(ss, xs, ys);
    double bar_w = (kWidth - 2.0 * kMargin) / bins;
    for (int b = 0; b < bins; ++b) {
        double h = (kHeight - 2.0 * kMargin) * counts[b] / static_cast<double>(cmax);
        ss << "<rect x='" << kMargin + b * bar_w << "' y='" << kHeight - kMargin - h
           << "' width='" << bar_w * 0.92 << "' height='" << h
           << "' fill='#1f77b4' opacity='0.8'/>\n";
    }
    ss << "</svg>\n";
    return ss.str();
}

}  // namespace lffrl
