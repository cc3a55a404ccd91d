#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "refl/io.hpp"

namespace refl {

/// Minimal standalone-SVG line/scatter plot. Enough for reflectivity
/// curves (log-y), fit overlays, trace plots, histograms and pair
/// scatters; not a general plotting library.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string xlabel, std::string ylabel, bool log_y = false)
        : title_(std::move(title)),
          xlabel_(std::move(xlabel)),
          ylabel_(std::move(ylabel)),
          log_y_(log_y) {}

    void add_line(const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& color, double width = 1.5) {
        series_.push_back({Series::Line, x, y, {}, color, width});
        extend_range(x, y);
    }

    void add_points(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<double>& yerr, const std::string& color) {
        series_.push_back({Series::Points, x, y, yerr, color, 1.0});
        extend_range(x, y);
        if (!yerr.empty())
            for (std::size_t i = 0; i < y.size(); ++i) {
                include_y(y[i] + yerr[i]);
                if (!log_y_ || y[i] - yerr[i] > 0.0) include_y(y[i] - yerr[i]);
            }
    }

    void add_hline(double y, const std::string& color) { hlines_.push_back({y, color}); }

    void add_histogram(const std::vector<double>& values, std::size_t n_bins,
                       const std::string& color) {
        if (values.empty() || n_bins == 0) return;
        const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
        double lo = *lo_it, hi = *hi_it;
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double bin_width = (hi - lo) / static_cast<double>(n_bins);
        std::vector<double> counts(n_bins, 0.0);
        for (double v : values) {
            auto bin = static_cast<std::size_t>((v - lo) / bin_width);
            counts[std::min(bin, n_bins - 1)] += 1.0;
        }
        // render as a step line
        std::vector<double> x, y;
        for (std::size_t b = 0; b < n_bins; ++b) {
            x.push_back(lo + bin_width * static_cast<double>(b));
            y.push_back(counts[b]);
            x.push_back(lo + bin_width * static_cast<double>(b + 1));
            y.push_back(counts[b]);
        }
        add_line(x, y, color);
        include_y(0.0);
    }

    std::string render() const {
        const double width = 640, height = 480;
        const double ml = 70, mr = 20, mt = 40, mb = 50;
        const double pw = width - ml - mr, ph = height - mt - mb;

        double x0 = xmin_, x1 = xmax_, y0 = ymin_, y1 = ymax_;
        if (!(x1 > x0)) x1 = x0 + 1.0;
        if (log_y_) {
            y0 = std::log10(std::max(y0, 1e-300));
            y1 = std::log10(std::max(y1, 1e-299));
        }
        if (!(y1 > y0)) y1 = y0 + 1.0;
        const double ypad = 0.05 * (y1 - y0);
        y0 -= ypad;
        y1 += ypad;

        auto px = [&](double x) { return ml + pw * (x - x0) / (x1 - x0); };
        auto py = [&](double y) {
            const double v = log_y_ ? std::log10(std::max(y, 1e-300)) : y;
            return mt + ph * (1.0 - (v - y0) / (y1 - y0));
        };

        std::ostringstream svg;
        svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
            << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
            << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
            << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
            << "\" fill=\"none\" stroke=\"black\"/>\n"
            << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
            << escape(title_) << "</text>\n"
            << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
            << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(xlabel_) << "</text>\n"
            << "<text x=\"16\" y=\"" << height / 2 << "\" text-anchor=\"middle\" font-size=\"13\""
            << " transform=\"rotate(-90 16 " << height / 2 << ")\">" << escape(ylabel_)
            << "</text>\n";

        for (int t = 0; t <= 4; ++t) {
            const double fx = x0 + (x1 - x0) * t / 4.0;
            const double fy = y0 + (y1 - y0) * t / 4.0;
            svg << "<text x=\"" << px(fx) << "\" y=\"" << mt + ph + 16
                << "\" text-anchor=\"middle\" font-size=\"11\">" << format_number(round3(fx))
                << "</text>\n";
            const double label = log_y_ ? std::pow(10.0, fy) : fy;
            svg << "<text x=\"" << ml - 6 << "\" y=\"" << mt + ph * (1.0 - t / 4.0) + 4
                << "\" text-anchor=\"end\" font-size=\"11\">"
                << (log_y_ ? format_log_label(label) : format_number(round3(label)))
                << "</text>\n";
        }

        for (const auto& [y, color] : hlines_)
            svg << "<line x1=\"" << ml << "\" y1=\"" << py(y) << "\" x2=\"" << ml + pw
                << "\" y2=\"" << py(y) << "\" stroke=\"" << color
                << "\" stroke-dasharray=\"6 3\"/>\n";

        for (const auto& s : series_) {
            if (s.kind == Series::Line) {
                svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\""
                    << s.width << "\" points=\"";
                for (std::size_t i = 0; i < s.x.size(); ++i)
                    svg << px(s.x[i]) << "," << py(s.y[i]) << " ";
                svg << "\"/>\n";
            } else {
                for (std::size_t i = 0; i < s.x.size(); ++i) {
                    if (!s.yerr.empty()) {
                        const double top = s.y[i] + s.yerr[i];
                        double bottom = s.y[i] - s.yerr[i];
                        if (log_y_ && bottom <= 0.0) bottom = s.y[i] * 0.1;
                        svg << "<line x1=\"" << px(s.x[i]) << "\" y1=\"" << py(bottom)
                            << "\" x2=\"" << px(s.x[i]) << "\" y2=\"" << py(top) << "\" stroke=\""
                            << s.color << "\"/>\n";
                    }
                    svg << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i])
                        << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
                }
            }
        }
        svg << "</svg>\n";
        return svg.str();
    }

    void save(const std::string& path) const { write_file_atomic(path, render()); }

private:
    struct Series {
        enum Kind { Line, Points } kind;
        std::vector<double> x, y, yerr;
        std::string color;
        double width;
    };

    static std::string escape(const std::string& text) {
        std::string out;
        for (char c : text) {
            if (c == '&')
                out += "&amp;";
            else if (c == '<')
                out += "&lt;";
            else if (c == '>')
                out += "&gt;";
            else
                out += c;
        }
        return out;
    }

    static double round3(double v) {
        if (v == 0.0 || !std::isfinite(v)) return v;
        const double scale = std::pow(10.0, 3 - std::ceil(std::log10(std::abs(v))));
        return std::round(v * scale) / scale;
    }

    static std::string format_log_label(double v) {
        std::ostringstream out;
        out.precision(1);
        out << std::scientific << v;
        return out.str();
    }

    void include_y(double y) {
        if (!std::isfinite(y)) return;
        if (log_y_ && y <= 0.0) return;
        ymin_ = std::min(ymin_, y);
        ymax_ = std::max(ymax_, y);
    }

    void extend_range(const std::vector<double>& x, const std::vector<double>& y) {
        for (double v : x)
            if (std::isfinite(v)) {
                xmin_ = std::min(xmin_, v);
                xmax_ = std::max(xmax_, v);
            }
        for (double v : y) include_y(v);
    }

    std::string title_, xlabel_, ylabel_;
    bool log_y_;
    std::vector<Series> series_;
    std::vector<std::pair<double, std::string>> hlines_;
    double xmin_ = std::numeric_limits<double>::infinity();
    double xmax_ = -std::numeric_limits<double>::infinity();
    double ymin_ = std::numeric_limits<double>::infinity();
    double ymax_ = -std::numeric_limits<double>::infinity();
};

}  // namespace refl
