#include "concord/figure.hpp"

#include "concord/spec_parse.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <string>

namespace concord {

namespace {

constexpr double kPanelW = 320.0;
constexpr double kPanelH = 240.0;
constexpr double kMargin = 40.0;
constexpr int kColumns = 3;

std::string fixed(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

const char* family_color(const std::string& family) {
    if (family == "gauss") return "#1f77b4";
    if (family == "t") return "#d62728";
    return "#2ca02c";
}

double reference_v(const std::string& dist) {
    if (dist == "kendall") return 0.0;
    return parse_distribution(dist).g.var_x_squared();
}

struct Panel {
    std::string dist;
    std::map<std::pair<std::string, bool>, std::vector<std::pair<double, double>>> curves;
};

} // namespace

void write_figure_svg(std::ostream& out, const std::vector<SimulationRecord>& records) {
    std::vector<Panel> panels;
    for (const auto& r : records) {
        if (r.estimator == "skip") continue;
        auto it = std::find_if(panels.begin(), panels.end(),
                               [&](const Panel& p) { return p.dist == r.dist; });
        if (it == panels.end()) {
            panels.push_back({r.dist, {}});
            it = panels.end() - 1;
        }
        it->curves[{r.family, r.shifted}].emplace_back(r.rho, r.sigma2_hat);
    }
    // tau panel last, as in the figure
    std::stable_partition(panels.begin(), panels.end(),
                          [](const Panel& p) { return p.dist != "kendall"; });

    const int rows = static_cast<int>((panels.size() + kColumns - 1) / kColumns);
    const double width = kColumns * (kPanelW + kMargin) + kMargin;
    const double height = rows * (kPanelH + kMargin) + kMargin;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width) << "\" height=\""
        << fixed(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t idx = 0; idx < panels.size(); ++idx) {
        const Panel& p = panels[idx];
        const double x0 = kMargin + static_cast<double>(idx % kColumns) * (kPanelW + kMargin);
        const double y0 = kMargin + static_cast<double>(idx / kColumns) * (kPanelH + kMargin);
        const double v = reference_v(p.dist);
        double y_max = 1.0 + v;
        for (const auto& [key, pts] : p.curves) {
            for (const auto& pt : pts) y_max = std::max(y_max, pt.second);
        }
        y_max *= 1.05;
        const auto sx = [&](double rho) { return x0 + (rho + 1.0) / 2.0 * kPanelW; };
        const auto sy = [&](double s) { return y0 + kPanelH - s / y_max * kPanelH; };

        out << "<g>\n";
        out << "<rect x=\"" << fixed(x0) << "\" y=\"" << fixed(y0) << "\" width=\"" << fixed(kPanelW)
            << "\" height=\"" << fixed(kPanelH) << "\" fill=\"none\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fixed(x0 + kPanelW / 2) << "\" y=\"" << fixed(y0 - 6)
            << "\" text-anchor=\"middle\">" << p.dist << " (V = " << fixed(v) << ")</text>\n";
        out << "<text x=\"" << fixed(x0) << "\" y=\"" << fixed(y0 + kPanelH + 14)
            << "\">-1</text><text x=\"" << fixed(x0 + kPanelW) << "\" y=\"" << fixed(y0 + kPanelH + 14)
            << "\" text-anchor=\"end\">1</text>\n";
        out << "<text x=\"" << fixed(x0 - 4) << "\" y=\"" << fixed(y0 + 10)
            << "\" text-anchor=\"end\">" << fixed(y_max) << "</text>\n";
        for (double guide : {1.0, v, 1.0 + v}) {
            out << "<line x1=\"" << fixed(x0) << "\" x2=\"" << fixed(x0 + kPanelW) << "\" y1=\""
                << fixed(sy(guide)) << "\" y2=\"" << fixed(sy(guide))
                << "\" stroke=\"gray\" stroke-dasharray=\"1,3\"/>\n";
        }
        for (const auto& [key, pts] : p.curves) {
            out << "<polyline fill=\"none\" stroke=\"" << family_color(key.first) << "\"";
            if (key.second) out << " stroke-dasharray=\"6,3\"";
            out << " points=\"";
            for (std::size_t i = 0; i < pts.size(); ++i) {
                out << (i ? " " : "") << fixed(sx(pts[i].first)) << ',' << fixed(sy(pts[i].second));
            }
            out << "\"/>\n";
        }
        out << "</g>\n";
    }

    double ly = height - 12;
    double lx = kMargin;
    for (const char* family : {"gauss", "t", "clayton"}) {
        out << "<line x1=\"" << fixed(lx) << "\" x2=\"" << fixed(lx + 20) << "\" y1=\"" << fixed(ly - 4)
            << "\" y2=\"" << fixed(ly - 4) << "\" stroke=\"" << family_color(family) << "\"/>";
        out << "<text x=\"" << fixed(lx + 24) << "\" y=\"" << fixed(ly) << "\">" << family << "</text>\n";
        lx += 90;
    }
    out << "</svg>\n";
}

} // namespace concord
