#pragma once

#include <string>
#include <vector>

namespace qsurf::svg {

struct Series {
    std::string label;
    std::string color = "#1f77b4";
    std::vector<double> x, y;
    bool line = true;
    bool markers = true;
};

/// Minimal SVG chart writer: scatter/line plots and histograms with linear
/// or log10 y axes, enough to mirror the sweep, spectrum and comparison
/// figures.
struct Chart {
    std::string title;
    std::string x_label, y_label;
    bool log_y = false;
    bool identity_line = false;  // y = x guide
    std::vector<Series> series;
    int width = 720, height = 480;

    std::string render() const;
    void write(const std::string& path) const;
};

/// Histogram of values rendered as an SVG bar chart.
Chart histogram(const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                int bins, const std::string& x_label);

}  // namespace qsurf::svg
