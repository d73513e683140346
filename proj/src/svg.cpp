#include "mbp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace mbp {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

void write_overlay_svg(const std::filesystem::path& path,
                       const std::vector<ThermoCurve>& curves, bool log_temperature,
                       const std::string& title) {
    constexpr double width = 900, height = 600;
    constexpr double ml = 70, mr = 170, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double t_lo = 1e300, t_hi = -1e300, y_lo = 0.0, y_hi = -1e300;
    for (const auto& c : curves)
        for (const auto& s : c.samples) {
            t_lo = std::min(t_lo, s.temperature);
            t_hi = std::max(t_hi, s.temperature);
            y_hi = std::max(y_hi, s.specific_heat);
        }
    if (!(t_hi > t_lo)) return;
    y_hi *= 1.05;
    if (!(y_hi > 0.0)) y_hi = 1.0;

    const auto xpos = [&](double t) {
        const double f = log_temperature ? (std::log(t) - std::log(t_lo)) /
                                               (std::log(t_hi) - std::log(t_lo))
                                         : (t - t_lo) / (t_hi - t_lo);
        return ml + f * pw;
    };
    const auto ypos = [&](double y) { return mt + ph - (y - y_lo) / (y_hi - y_lo) * ph; };

    std::ofstream out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
        << title << "</text>\n";
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    // Axis ticks: 5 per axis, log or linear in T.
    for (int i = 0; i <= 5; ++i) {
        const double f = double(i) / 5.0;
        const double t = log_temperature ? t_lo * std::pow(t_hi / t_lo, f)
                                         : t_lo + f * (t_hi - t_lo);
        const double x = xpos(t);
        out << "<line x1=\"" << x << "\" y1=\"" << mt + ph << "\" x2=\"" << x << "\" y2=\""
            << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << mt + ph + 20
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << fmt(t)
            << "</text>\n";
        const double y = y_lo + f * (y_hi - y_lo);
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << ypos(y) << "\" x2=\"" << ml << "\" y2=\""
            << ypos(y) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << ypos(y) + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << fmt(y)
            << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">temperature"
        << (log_temperature ? " (log)" : "") << "</text>\n";
    out << "<text x=\"18\" y=\"" << mt + ph / 2
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 18 "
        << mt + ph / 2 << ")\">specific heat</text>\n";

    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const int hue = int(360.0 * double(ci) / double(std::max<std::size_t>(1, curves.size())));
        out << "<polyline fill=\"none\" stroke=\"hsl(" << hue
            << ",65%,45%)\" stroke-width=\"1\" points=\"";
        for (const auto& s : curves[ci].samples)
            out << fmt(xpos(s.temperature)) << "," << fmt(ypos(s.specific_heat)) << " ";
        out << "\"/>\n";
        // Legend: cap the listing when the family is large.
        if (curves.size() <= 40) {
            const double ly = mt + 14.0 * double(ci + 1);
            out << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\""
                << ml + pw + 30 << "\" y2=\"" << ly - 4 << "\" stroke=\"hsl(" << hue
                << ",65%,45%)\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << ml + pw + 34 << "\" y=\"" << ly
                << "\" font-family=\"sans-serif\" font-size=\"10\">" << curves[ci].label
                << "</text>\n";
        }
    }
    out << "</svg>\n";
}

} // namespace mbp
