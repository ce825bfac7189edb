#pragma once

// Deterministic SVG line plots of a finished result directory.

#include <filesystem>
#include <string>
#include <vector>

namespace arborwalk::cli {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> error;  // optional symmetric error bars
    bool markers = true;
    bool line = true;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

/// Fixed size, fonts and number formatting; identical input gives identical
/// bytes.
std::string render_svg(const PlotSpec& spec);

struct PlotReport {
    std::vector<std::filesystem::path> written;
    std::vector<std::string> notices;
};

/// Reads manifest.json, data.csv and summary.json from dir and writes one
/// SVG per diagnostic. Missing or empty series are skipped with a notice.
PlotReport emit_plots(const std::filesystem::path& dir);

}  // namespace arborwalk::cli
