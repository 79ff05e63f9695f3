#include "qsurf/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qsurf/errors.hpp"

namespace qsurf::svg {

namespace {

constexpr int kMarginLeft = 72;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 56;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(5);
    os << v;
    return os.str();
}

// round range outward to friendly ticks
std::vector<double> ticks(double lo, double hi, int target) {
    std::vector<double> out;
    if (!(hi > lo)) {
        out.push_back(lo);
        return out;
    }
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    const double start = std::ceil(lo / step) * step;
    for (double t = start; t <= hi + step * 1e-9; t += step) out.push_back(t);
    return out;
}

}  // namespace

std::string Chart::render() const {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.y) {
            if (log_y && v <= 0.0) continue;
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (!(xmax > xmin)) {
        xmax = xmin + 1.0;
        xmin -= 1.0;
    }
    if (!(ymax > ymin)) {
        ymax = ymin * 1.1 + 1.0;
        ymin = ymin * 0.9 - 1.0;
    }
    if (identity_line) {
        const double lo = std::min(xmin, ymin);
        const double hi = std::max(xmax, ymax);
        xmin = ymin = lo;
        xmax = ymax = hi;
    }
    const double pad_x = 0.04 * (xmax - xmin);
    xmin -= pad_x;
    xmax += pad_x;
    double tymin = log_y ? std::log10(ymin) : ymin;
    double tymax = log_y ? std::log10(ymax) : ymax;
    const double pad_y = 0.06 * (tymax - tymin > 0 ? tymax - tymin : 1.0);
    tymin -= pad_y;
    tymax += pad_y;

    const double pw = width - kMarginLeft - kMarginRight;
    const double ph = height - kMarginTop - kMarginBottom;
    auto sx = [&](double v) { return kMarginLeft + (v - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double v) {
        const double t = log_y ? std::log10(std::max(v, 1e-300)) : v;
        return kMarginTop + ph - (t - tymin) / (tymax - tymin) * ph;
    };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
      << "font-family=\"sans-serif\">" << title << "</text>\n";

    // axes frame
    o << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";

    for (double t : ticks(xmin, xmax, 6)) {
        const double px = sx(t);
        o << "<line x1=\"" << px << "\" y1=\"" << kMarginTop + ph << "\" x2=\"" << px << "\" y2=\""
          << kMarginTop + ph + 5 << "\" stroke=\"#444\"/>\n";
        o << "<text x=\"" << px << "\" y=\"" << kMarginTop + ph + 20
          << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(t)
          << "</text>\n";
    }
    if (log_y) {
        for (int e = static_cast<int>(std::floor(tymin)); e <= static_cast<int>(std::ceil(tymax)); ++e) {
            const double v = std::pow(10.0, e);
            const double py = sy(v);
            if (py < kMarginTop || py > kMarginTop + ph) continue;
            o << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << py << "\" x2=\"" << kMarginLeft
              << "\" y2=\"" << py << "\" stroke=\"#444\"/>\n";
            o << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py + 4
              << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">1e" << e
              << "</text>\n";
        }
    } else {
        for (double t : ticks(tymin, tymax, 6)) {
            const double py = sy(t);
            o << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << py << "\" x2=\"" << kMarginLeft
              << "\" y2=\"" << py << "\" stroke=\"#444\"/>\n";
            o << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py + 4
              << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(t)
              << "</text>\n";
        }
    }
    o << "<text x=\"" << kMarginLeft + pw / 2 << "\" y=\"" << height - 14
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label
      << "</text>\n";
    o << "<text x=\"18\" y=\"" << kMarginTop + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" transform=\"rotate(-90 18 "
      << kMarginTop + ph / 2 << ")\">" << y_label << "</text>\n";

    if (identity_line) {
        o << "<line x1=\"" << sx(xmin) << "\" y1=\"" << sy(log_y ? std::pow(10.0, tymin) : xmin)
          << "\" x2=\"" << sx(xmax) << "\" y2=\"" << sy(xmax)
          << "\" stroke=\"#3366cc\" stroke-dasharray=\"6 3\"/>\n";
    }

    int legend_y = kMarginTop + 14;
    for (const auto& s : series) {
        if (s.line && s.x.size() > 1) {
            o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (log_y && s.y[i] <= 0.0) continue;
                o << sx(s.x[i]) << "," << sy(s.y[i]) << " ";
            }
            o << "\"/>\n";
        }
        if (s.markers) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (log_y && s.y[i] <= 0.0) continue;
                o << "<circle cx=\"" << sx(s.x[i]) << "\" cy=\"" << sy(s.y[i])
                  << "\" r=\"2.6\" fill=\"" << s.color << "\"/>\n";
            }
        }
        if (!s.label.empty()) {
            o << "<rect x=\"" << kMarginLeft + pw - 150 << "\" y=\"" << legend_y - 9
              << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n";
            o << "<text x=\"" << kMarginLeft + pw - 135 << "\" y=\"" << legend_y
              << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.label << "</text>\n";
            legend_y += 16;
        }
    }
    o << "</svg>\n";
    return o.str();
}

void Chart::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write SVG file: " + path);
    out << render();
}

Chart histogram(const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                int bins, const std::string& x_label) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& [label, values] : groups) {
        for (double v : values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!(hi > lo)) hi = lo + 1.0;
    const double step = (hi - lo) / bins;

    Chart c;
    c.x_label = x_label;
    c.y_label = "count";
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};
    int k = 0;
    for (const auto& [label, values] : groups) {
        Series s;
        s.label = label;
        s.color = palette[k++ % 5];
        s.line = true;
        s.markers = false;
        for (int b = 0; b < bins; ++b) {
            const double a = lo + b * step;
            const double bnd = a + step;
            int count = 0;
            for (double v : values) {
                if (v >= a && (v < bnd || (b == bins - 1 && v <= bnd))) ++count;
            }
            // step outline
            s.x.push_back(a);
            s.y.push_back(count);
            s.x.push_back(bnd);
            s.y.push_back(count);
        }
        c.series.push_back(std::move(s));
    }
    return c;
}

}  // namespace qsurf::svg
