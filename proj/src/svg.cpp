#include "deq/svg.hpp"

#include "deq/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace deq {

namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

std::string ramp_color(double value, double spread)
{
    double t = 0.0;
    if (value > 0.0 && spread > 0.0) t = std::clamp(std::log(value) / spread, -1.0, 1.0);
    const double fade = 1.0 - std::abs(t);
    int r = 255, g = 255, b = 255;
    if (t > 0) {
        g = b = static_cast<int>(std::lround(255 * fade));
    } else if (t < 0) {
        r = g = static_cast<int>(std::lround(255 * fade));
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

void write_svg(std::ostream& out, const PlanarMap& map, std::span<const double> face_values, const SvgOptions& opts)
{
    std::vector<int> land;
    for (int f = 0; f < map.face_count(); ++f)
        if (map.is_land(f)) land.push_back(f);
    if (land.empty()) throw GeometryError("cannot render a map without land faces");
    if (face_values.size() != land.size())
        throw GeometryError("expected " + std::to_string(land.size()) + " face values, got " +
                            std::to_string(face_values.size()));

    Vec2 lo = map.coords()[map.faces()[land[0]][0]], hi = lo;
    for (int f : land)
        for (int v : map.faces()[f]) {
            lo = lo.cwiseMin(map.coords()[v]);
            hi = hi.cwiseMax(map.coords()[v]);
        }
    const double w = std::max(hi.x() - lo.x(), 1e-12), h = std::max(hi.y() - lo.y(), 1e-12);
    const double vmin = *std::min_element(face_values.begin(), face_values.end());
    const double vmax = *std::max_element(face_values.begin(), face_values.end());
    double spread = 0.0;
    for (double v : face_values)
        if (v > 0.0) spread = std::max(spread, std::abs(std::log(v)));

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << num(lo.x()) << ' ' << num(-hi.y())
        << ' ' << num(w) << ' ' << num(h) << "\">\n";
    out << "<g id=\"land\" stroke-width=\"" << num(1e-3 * std::max(w, h)) << "\" stroke-linejoin=\"round\">\n";
    for (std::size_t k = 0; k < land.size(); ++k) {
        const auto& t = map.faces()[land[k]];
        out << "<polygon points=\"";
        for (int j = 0; j < 3; ++j) {
            const Vec2& p = map.coords()[t[j]];
            out << (j ? " " : "") << num(p.x()) << ',' << num(-p.y());
        }
        out << "\" fill=\"" << ramp_color(face_values[k], spread) << "\" stroke=\"" << (opts.stroke ? "#333333" : "none")
            << "\"/>\n";
    }
    out << "</g>\n";
    const double fs = 0.03 * std::max(w, h);
    out << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"" << num(fs) << "\">\n";
    out << "<rect x=\"" << num(lo.x()) << "\" y=\"" << num(-hi.y()) << "\" width=\"" << num(fs) << "\" height=\""
        << num(fs) << "\" fill=\"" << ramp_color(vmin, spread) << "\"/>\n";
    out << "<text x=\"" << num(lo.x() + 1.3 * fs) << "\" y=\"" << num(-hi.y() + 0.9 * fs) << "\">" << opts.label
        << " min " << num(vmin) << "</text>\n";
    out << "<rect x=\"" << num(lo.x()) << "\" y=\"" << num(-hi.y() + 1.2 * fs) << "\" width=\"" << num(fs)
        << "\" height=\"" << num(fs) << "\" fill=\"" << ramp_color(vmax, spread) << "\"/>\n";
    out << "<text x=\"" << num(lo.x() + 1.3 * fs) << "\" y=\"" << num(-hi.y() + 2.1 * fs) << "\">" << opts.label
        << " max " << num(vmax) << "</text>\n";
    out << "</g>\n</svg>\n";
}

void write_svg(const std::filesystem::path& path, const PlanarMap& map, std::span<const double> face_values,
               const SvgOptions& opts)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_svg(out, map, face_values, opts);
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

} // namespace deq
