#include "meissner/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace meissner {

namespace {

constexpr double kWidth = 800, kHeight = 560;
constexpr double kLeft = 72, kRight = 24, kTop = 36, kBottom = 52;

const char* kPalette[6] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    double map(double v, double out_lo, double out_hi) const {
        double t = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo))
                       : (v - lo) / (hi - lo);
        return out_lo + t * (out_hi - out_lo);
    }

    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            int e0 = static_cast<int>(std::floor(std::log10(lo)));
            int e1 = static_cast<int>(std::ceil(std::log10(hi)));
            for (int e = e0; e <= e1; ++e) {
                double v = std::pow(10.0, e);
                if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) out.push_back(v);
            }
            if (out.size() < 2) {
                out = {lo, hi};
            }
            return out;
        }
        double span = hi - lo;
        double raw = span / 5.0;
        double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double norm = raw / mag;
        double step = (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0) * mag;
        double first = std::ceil(lo / step) * step;
        for (double v = first; v <= hi + 1e-12 * span; v += step) out.push_back(v);
        return out;
    }
};

}  // namespace

std::string emit_plot(const ResultsTable& table, const PlotSpec& spec) {
    require(!spec.y_columns.empty(), ErrorKind::MissingColumn, "plot needs at least one series");
    std::vector<double> x;
    std::vector<std::vector<double>> ys;
    bool empty = table.rows().empty();
    if (!empty) {
        x = table.column(spec.x_column);
        for (const auto& name : spec.y_columns) ys.push_back(table.column(name));
    } else {
        require(table.column_index(spec.x_column) >= 0 || table.columns().empty(),
                ErrorKind::MissingColumn, "no column named " + spec.x_column);
    }

    Axis ax, ay;
    ax.log = spec.log_x;
    ay.log = spec.log_y;
    if (!empty) {
        double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
        for (double v : x) {
            xlo = std::min(xlo, v);
            xhi = std::max(xhi, v);
        }
        for (const auto& s : ys)
            for (double v : s) {
                ylo = std::min(ylo, v);
                yhi = std::max(yhi, v);
            }
        if (spec.marker_x) {
            xlo = std::min(xlo, *spec.marker_x);
            xhi = std::max(xhi, *spec.marker_x);
        }
        if (spec.log_x)
            require(xlo > 0.0, ErrorKind::NonPositiveLogData, "log x-axis needs positive data");
        if (spec.log_y)
            require(ylo > 0.0, ErrorKind::NonPositiveLogData, "log y-axis needs positive data");
        if (xlo == xhi) {
            xlo -= 0.5;
            xhi += 0.5;
        }
        if (ylo == yhi) {
            ylo -= 0.5;
            yhi += 0.5;
        }
        if (!spec.log_x) {
            double pad = 0.04 * (xhi - xlo);
            xlo -= pad;
            xhi += pad;
        }
        if (!spec.log_y) {
            double pad = 0.06 * (yhi - ylo);
            ylo -= pad;
            yhi += pad;
        }
        ax.lo = xlo;
        ax.hi = xhi;
        ay.lo = ylo;
        ay.hi = yhi;
    }

    double px0 = kLeft, px1 = kWidth - kRight;
    double py0 = kHeight - kBottom, py1 = kTop;  // y grows upward

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    if (!spec.title.empty())
        svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
            << "font-family=\"monospace\" font-size=\"14\">" << spec.title << "</text>\n";
    // frame
    svg << "<rect x=\"" << px0 << "\" y=\"" << py1 << "\" width=\"" << px1 - px0
        << "\" height=\"" << py0 - py1 << "\" fill=\"none\" stroke=\"black\"/>\n";

    if (!empty) {
        for (double t : ax.ticks()) {
            double px = ax.map(t, px0, px1);
            svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << py0 << "\" x2=\"" << fmt(px)
                << "\" y2=\"" << py0 + 5 << "\" stroke=\"black\"/>\n";
            svg << "<text x=\"" << fmt(px) << "\" y=\"" << py0 + 18
                << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">"
                << fmt(t) << "</text>\n";
        }
        for (double t : ay.ticks()) {
            double py = ay.map(t, py0, py1);
            svg << "<line x1=\"" << px0 - 5 << "\" y1=\"" << fmt(py) << "\" x2=\"" << px0
                << "\" y2=\"" << fmt(py) << "\" stroke=\"black\"/>\n";
            svg << "<text x=\"" << px0 - 8 << "\" y=\"" << fmt(py + 4)
                << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">" << fmt(t)
                << "</text>\n";
        }
        for (std::size_t s = 0; s < ys.size(); ++s) {
            svg << "<polyline fill=\"none\" stroke=\"" << kPalette[s % 6]
                << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < x.size(); ++i)
                svg << fmt(ax.map(x[i], px0, px1)) << ',' << fmt(ay.map(ys[s][i], py0, py1))
                    << ' ';
            svg << "\"/>\n";
            svg << "<text x=\"" << px1 - 6 << "\" y=\"" << py1 + 16 + 14 * s
                << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\" fill=\""
                << kPalette[s % 6] << "\">" << spec.y_columns[s] << "</text>\n";
        }
        if (spec.guide_slope && spec.log_x && spec.log_y && x.size() >= 2) {
            // reference slope through the first series' midpoint
            std::size_t mid = x.size() / 2;
            double lx0 = std::log10(x.front()), lx1 = std::log10(x.back());
            double lym = std::log10(ys[0][mid]);
            double lxm = std::log10(x[mid]);
            double s = *spec.guide_slope;
            double ya = lym + s * (lx0 - lxm), yb = lym + s * (lx1 - lxm);
            svg << "<line x1=\"" << fmt(ax.map(x.front(), px0, px1)) << "\" y1=\""
                << fmt(ay.map(std::pow(10, ya), py0, py1)) << "\" x2=\""
                << fmt(ax.map(x.back(), px0, px1)) << "\" y2=\""
                << fmt(ay.map(std::pow(10, yb), py0, py1))
                << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
            svg << "<text x=\"" << px0 + 8 << "\" y=\"" << py1 + 16
                << "\" font-family=\"monospace\" font-size=\"11\" fill=\"gray\">slope " << fmt(s)
                << "</text>\n";
        }
        if (spec.marker_x) {
            double px = ax.map(*spec.marker_x, px0, px1);
            svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << py1 << "\" x2=\"" << fmt(px)
                << "\" y2=\"" << py0 << "\" stroke=\"#d62728\" stroke-dasharray=\"4,3\"/>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace meissner
