#include "arborwalk/cli/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "arborwalk/cli/csv.hpp"

namespace arborwalk::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 50;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

double to_double(const std::string& s) {
    if (s.empty()) return std::nan("");
    return std::stod(s);
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const Series& s : spec.series) {
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
            const double e = k < s.error.size() && std::isfinite(s.error[k]) ? s.error[k] : 0.0;
            x0 = std::min(x0, s.x[k]);
            x1 = std::max(x1, s.x[k]);
            y0 = std::min(y0, s.y[k] - e);
            y1 = std::max(y1, s.y[k] + e);
        }
    }
    if (!(x0 <= x1)) x0 = 0, x1 = 1;
    if (!(y0 <= y1)) y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    const auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth) + "\" height=\"" +
           fixed(kHeight) + "\" font-family=\"DejaVu Sans, sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + fixed(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
           escape(spec.title) + "</text>\n";
    out += "<rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop) + "\" width=\"" + fixed(pw) +
           "\" height=\"" + fixed(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0;
        const double yv = y0 + (y1 - y0) * k / 4.0;
        out += "<text x=\"" + fixed(px(xv)) + "\" y=\"" + fixed(kHeight - kBottom + 16) +
               "\" text-anchor=\"middle\">" + tick(xv) + "</text>\n";
        out += "<text x=\"" + fixed(kLeft - 6) + "\" y=\"" + fixed(py(yv) + 4) +
               "\" text-anchor=\"end\">" + tick(yv) + "</text>\n";
    }
    out += "<text x=\"" + fixed(kLeft + pw / 2) + "\" y=\"" + fixed(kHeight - 10) +
           "\" text-anchor=\"middle\">" + escape(spec.x_label) + "</text>\n";
    out += "<text transform=\"translate(16," + fixed(kTop + ph / 2) +
           ") rotate(-90)\" text-anchor=\"middle\">" + escape(spec.y_label) + "</text>\n";

    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const Series& s = spec.series[si];
        const std::string color = kColors[si % std::size(kColors)];
        if (s.line) {
            std::string points;
            for (std::size_t k = 0; k < s.x.size(); ++k) {
                if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
                points += (points.empty() ? "" : " ") + fixed(px(s.x[k])) + "," + fixed(py(s.y[k]));
            }
            out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" +
                   points + "\"/>\n";
        }
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
            if (k < s.error.size() && std::isfinite(s.error[k]) && s.error[k] > 0.0) {
                out += "<line x1=\"" + fixed(px(s.x[k])) + "\" y1=\"" + fixed(py(s.y[k] - s.error[k])) +
                       "\" x2=\"" + fixed(px(s.x[k])) + "\" y2=\"" + fixed(py(s.y[k] + s.error[k])) +
                       "\" stroke=\"" + color + "\"/>\n";
            }
            if (s.markers) {
                out += "<circle cx=\"" + fixed(px(s.x[k])) + "\" cy=\"" + fixed(py(s.y[k])) +
                       "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
            }
        }
        out += "<text x=\"" + fixed(kLeft + 8) + "\" y=\"" + fixed(kTop + 16 + 14 * static_cast<double>(si)) +
               "\" fill=\"" + color + "\">" + escape(s.label) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

PlotReport emit_plots(const fs::path& dir) {
    PlotReport report;
    if (!fs::exists(dir / "data.csv") || !fs::exists(dir / "manifest.json")) {
        report.notices.push_back("no finished result in " + dir.string() + "; nothing plotted");
        return report;
    }
    const json manifest = json::parse(read_file(dir / "manifest.json"));
    const std::string kind = manifest.value("kind", "");
    const ParsedCsv csv = parse_csv(read_file(dir / "data.csv"));
    if (csv.rows.empty()) {
        report.notices.push_back("empty result; no plots written");
        return report;
    }
    const auto col = [&](const std::string& name) { return csv.column(name); };
    const auto write = [&](const std::string& name, const PlotSpec& spec) {
        bool any = false;
        for (const Series& s : spec.series) any = any || !s.x.empty();
        if (!any) {
            report.notices.push_back("series for " + name + " is empty; skipped");
            return;
        }
        write_atomic(dir / name, render_svg(spec));
        report.written.push_back(dir / name);
    };
    // Series keyed by every column before "seed" (the grid point).
    const auto grid_label = [&](const std::vector<std::string>& r) {
        std::string label;
        const int seed_col = col("seed");
        for (int k = 0; k < seed_col; ++k) {
            label += (label.empty() ? "" : ", ") + csv.header[static_cast<std::size_t>(k)] + "=" +
                     r[static_cast<std::size_t>(k)];
        }
        return label.empty() ? std::string("series") : label;
    };

    if (kind == "lyapunov" || kind == "diagram_q3") {
        if (col("r") < 0 || col("gamma") < 0) {
            report.notices.push_back("no r or gamma column; Lyapunov plot skipped");
            return report;
        }
        Series s{"gamma_L", {}, {}, {}};
        for (const auto& r : csv.rows) {
            const double g = to_double(r[static_cast<std::size_t>(col("gamma"))]);
            if (std::isnan(g)) continue;
            s.x.push_back(to_double(r[static_cast<std::size_t>(col("r"))]));
            s.y.push_back(g);
            s.error.push_back(to_double(r[static_cast<std::size_t>(col("stderr"))]));
        }
        write("lyapunov.svg", {"Lyapunov exponent", "r", "gamma_L", {s}});
    } else if (kind == "green_moments") {
        const json summary = json::parse(read_file(dir / "summary.json"));
        PlotSpec spec{"fractional moments", "d(x, y)", "log E|G|^s", {}};
        for (const json& g : summary["grid"]) {
            Series pts{"data", {}, {}, {}, true, false};
            for (const json& p : g["pairs"]) {
                const double mean = p["mean"].get<double>();
                if (mean <= 0.0) continue;
                pts.x.push_back(p["distance"].get<double>());
                pts.y.push_back(std::log(mean));
                pts.error.push_back(p["standard_error"].get<double>() / mean);
            }
            if (pts.x.empty()) continue;
            Series fit{"fit slope " + tick(g["slope"].get<double>()), {}, {}, {}, false, true};
            const double a = g["intercept"].get<double>(), b = g["slope"].get<double>();
            for (double x : {pts.x.front(), pts.x.back()}) {
                fit.x.push_back(x);
                fit.y.push_back(a + b * x);
            }
            spec.series.push_back(pts);
            spec.series.push_back(fit);
        }
        write("green_moments.svg", spec);
    } else if (kind == "return_prob" || kind == "wiener") {
        const std::string ycol = kind == "wiener" ? "cesaro" : "probability";
        std::map<std::string, Series> by_label;
        std::vector<std::string> order;
        for (const auto& r : csv.rows) {
            if (r[static_cast<std::size_t>(col("realization"))] != "0") continue;
            const std::string label = grid_label(r);
            if (!by_label.contains(label)) {
                order.push_back(label);
                by_label[label] = Series{label, {}, {}, {}, false, true};
            }
            by_label[label].x.push_back(to_double(r[static_cast<std::size_t>(col("n"))]));
            by_label[label].y.push_back(to_double(r[static_cast<std::size_t>(col(ycol))]));
        }
        PlotSpec spec{kind == "wiener" ? "Cesaro mean of the return probability" : "return probability",
                      "n", ycol, {}};
        for (const std::string& label : order) spec.series.push_back(by_label[label]);
        write(kind + ".svg", spec);
    } else {
        report.notices.push_back("no plot is defined for kind '" + kind + "'");
    }
    return report;
}

}  // namespace arborwalk::cli
