#include "deq/mesh_io.hpp"

#include "deq/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace deq {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_ws(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

double parse_double(std::string_view tok, std::size_t line)
{
    // from_chars for double is available in libstdc++ 11.
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError("invalid number '" + std::string(tok) + "'", line);
    return v;
}

long parse_int(std::string_view tok, std::size_t line)
{
    long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError("invalid integer '" + std::string(tok) + "'", line);
    return v;
}

// Removes '#' comments.
std::string_view strip_comment(std::string_view s)
{
    const auto hash = s.find('#');
    return trim(hash == std::string_view::npos ? s : s.substr(0, hash));
}

TriMesh read_off(std::istream& in)
{
    std::string raw;
    std::size_t line_no = 0;

    auto next_content_line = [&]() -> bool {
        while (std::getline(in, raw)) {
            ++line_no;
            if (!strip_comment(raw).empty()) return true;
        }
        return false;
    };

    if (!next_content_line()) throw ParseError("empty OFF file", 0);
    auto header = split_ws(strip_comment(raw));
    if (header.empty() || header[0] != "OFF") throw ParseError("missing OFF header", line_no);
    header.erase(header.begin());
    if (header.empty()) {
        if (!next_content_line()) throw ParseError("missing OFF counts line", line_no);
        header = split_ws(strip_comment(raw));
    }
    if (header.size() < 2) throw ParseError("OFF counts line needs vertex and face counts", line_no);
    const long nv = parse_int(header[0], line_no);
    const long nf = parse_int(header[1], line_no);
    if (nv < 0 || nf < 0) throw ParseError("negative OFF counts", line_no);

    std::vector<Vec3> vertices;
    vertices.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        if (!next_content_line()) throw ParseError("unexpected end of file in vertex list", line_no);
        const auto tok = split_ws(strip_comment(raw));
        if (tok.size() < 3) throw ParseError("vertex line needs 3 coordinates", line_no);
        vertices.emplace_back(parse_double(tok[0], line_no), parse_double(tok[1], line_no),
                              parse_double(tok[2], line_no));
    }
    std::vector<Face> faces;
    faces.reserve(nf);
    for (long i = 0; i < nf; ++i) {
        if (!next_content_line()) throw ParseError("unexpected end of file in face list", line_no);
        const auto tok = split_ws(strip_comment(raw));
        if (tok.empty()) throw ParseError("empty face line", line_no);
        const long n = parse_int(tok[0], line_no);
        if (n != 3) throw ParseError("only triangular faces are supported", line_no);
        if (tok.size() < 4) throw ParseError("face line needs 3 indices", line_no);
        Face f{};
        for (int k = 0; k < 3; ++k) {
            const long idx = parse_int(tok[k + 1], line_no);
            if (idx < 0 || idx >= nv) throw ParseError("face index out of range", line_no);
            f[k] = static_cast<int>(idx);
        }
        faces.push_back(f);
    }
    return TriMesh(std::move(vertices), std::move(faces));
}

TriMesh read_obj(std::istream& in)
{
    std::string raw;
    std::size_t line_no = 0;
    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto tok = split_ws(strip_comment(raw));
        if (tok.empty()) continue;
        if (tok[0] == "v") {
            if (tok.size() < 4) throw ParseError("vertex line needs 3 coordinates", line_no);
            vertices.emplace_back(parse_double(tok[1], line_no), parse_double(tok[2], line_no),
                                  parse_double(tok[3], line_no));
        } else if (tok[0] == "f") {
            if (tok.size() != 4) throw ParseError("only triangular faces are supported", line_no);
            Face f{};
            for (int k = 0; k < 3; ++k) {
                auto t = tok[k + 1];
                t = t.substr(0, t.find('/'));
                long idx = parse_int(t, line_no);
                const long nv = static_cast<long>(vertices.size());
                if (idx < 0) idx = nv + idx + 1;
                if (idx < 1 || idx > nv) throw ParseError("face index out of range", line_no);
                f[k] = static_cast<int>(idx - 1);
            }
            faces.push_back(f);
        }
        // vn, vt, g, o, s, usemtl, mtllib: ignored.
    }
    return TriMesh(std::move(vertices), std::move(faces));
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

} // namespace

MeshFormat format_from_path(const std::filesystem::path& path)
{
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".off") return MeshFormat::off;
    if (ext == ".obj") return MeshFormat::obj;
    throw IoError("unrecognized mesh extension '" + ext + "' (expected .off or .obj)");
}

TriMesh read_mesh(std::istream& in, MeshFormat format)
{
    return format == MeshFormat::off ? read_off(in) : read_obj(in);
}

TriMesh load_mesh(const std::filesystem::path& path, MeshFormat format)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return read_mesh(in, format);
}

TriMesh load_mesh(const std::filesystem::path& path) { return load_mesh(path, format_from_path(path)); }

void write_mesh(std::ostream& out, std::span<const Vec3> vertices, std::span<const Face> faces, MeshFormat format)
{
    if (format == MeshFormat::off) {
        out << "OFF\n" << vertices.size() << ' ' << faces.size() << " 0\n";
        for (const auto& p : vertices)
            out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
        for (const auto& f : faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    } else {
        for (const auto& p : vertices)
            out << "v " << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z())
                << '\n';
        for (const auto& f : faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    }
    if (!out) throw IoError("write failed");
}

void save_mesh(const TriMesh& mesh, const std::filesystem::path& path, MeshFormat format)
{
    auto out = open_for_write(path);
    write_mesh(out, mesh.vertices(), mesh.faces(), format);
}

void save_mesh(const PlanarMap& map, const std::filesystem::path& path, MeshFormat format)
{
    std::vector<Vec3> lifted;
    lifted.reserve(map.vertex_count());
    for (const auto& p : map.coords()) lifted.emplace_back(p.x(), p.y(), 0.0);
    auto out = open_for_write(path);
    write_mesh(out, lifted, map.faces(), format);
}

} // namespace deq
