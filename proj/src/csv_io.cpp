#include "deq/csv_io.hpp"

#include "deq/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>

namespace deq {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <class T>
std::optional<T> parse_number(std::string_view tok)
{
    tok = trim(tok);
    T v{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) return std::nullopt;
    return v;
}

struct Row {
    std::size_t line;
    std::string_view key;
    std::string_view value;
};

// Calls `fn` for every data row. A first non-blank line whose key is not an
// integer is taken as the header.
template <class Fn>
void for_each_row(std::istream& in, Fn&& fn)
{
    std::string raw;
    std::size_t line = 0;
    bool first = true;
    while (std::getline(in, raw)) {
        ++line;
        const std::string_view s = trim(raw);
        if (s.empty()) continue;
        const auto comma = s.find(',');
        if (comma == std::string_view::npos) {
            if (first) {
                first = false;
                continue;
            }
            throw ParseError("expected two comma-separated fields", line);
        }
        const Row row{line, trim(s.substr(0, comma)), trim(s.substr(comma + 1))};
        if (first) {
            first = false;
            if (!parse_number<long>(row.key)) continue;
        }
        if (row.value.find(',') != std::string_view::npos) throw ParseError("expected two comma-separated fields", line);
        fn(row);
    }
}

template <class T, class Check>
std::vector<T> read_per_face(std::istream& in, int face_count, const char* what, Check&& check)
{
    std::vector<std::optional<T>> seen(face_count);
    for_each_row(in, [&](const Row& row) {
        const auto idx = parse_number<long>(row.key);
        if (!idx) throw ParseError("invalid face index '" + std::string(row.key) + "'", row.line);
        if (*idx < 0 || *idx >= face_count)
            throw ParseError("face index " + std::to_string(*idx) + " out of range [0, " +
                                 std::to_string(face_count) + ")",
                             row.line);
        if (seen[*idx]) throw ParseError("face " + std::to_string(*idx) + " listed twice", row.line);
        const auto v = parse_number<T>(row.value);
        if (!v) throw ParseError(std::string("invalid ") + what + " '" + std::string(row.value) + "'", row.line);
        check(*v, row.line);
        seen[*idx] = *v;
    });
    std::vector<T> out(face_count);
    int missing = 0, first_missing = -1;
    for (int f = 0; f < face_count; ++f) {
        if (seen[f]) {
            out[f] = *seen[f];
        } else {
            if (first_missing < 0) first_missing = f;
            ++missing;
        }
    }
    if (missing > 0)
        throw ParseError(std::string(what) + " file covers " + std::to_string(face_count - missing) + " of " +
                             std::to_string(face_count) + " faces (first missing: " + std::to_string(first_missing) +
                             ")",
                         0);
    return out;
}

std::ifstream open(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return in;
}

void check_positive(double v, std::size_t line)
{
    if (!(v > 0.0) || !std::isfinite(v)) throw ParseError("non-positive value " + std::to_string(v), line);
}

} // namespace

std::vector<double> parse_population_csv(std::istream& in, int face_count)
{
    return read_per_face<double>(in, face_count, "population", check_positive);
}

std::vector<double> read_population_csv(const std::filesystem::path& path, int face_count)
{
    auto in = open(path);
    return parse_population_csv(in, face_count);
}

std::vector<int> parse_region_labels(std::istream& in, int face_count)
{
    return read_per_face<int>(in, face_count, "region", [](int, std::size_t) {});
}

std::vector<int> read_region_labels(const std::filesystem::path& path, int face_count)
{
    auto in = open(path);
    return parse_region_labels(in, face_count);
}

std::map<int, double> parse_region_rules(std::istream& in)
{
    std::map<int, double> rules;
    for_each_row(in, [&](const Row& row) {
        const auto id = parse_number<int>(row.key);
        if (!id) throw ParseError("invalid region id '" + std::string(row.key) + "'", row.line);
        const auto m = parse_number<double>(row.value);
        if (!m) throw ParseError("invalid multiplier '" + std::string(row.value) + "'", row.line);
        check_positive(*m, row.line);
        if (!rules.emplace(*id, *m).second)
            throw ParseError("region " + std::to_string(*id) + " listed twice", row.line);
    });
    return rules;
}

std::map<int, double> read_region_rules(const std::filesystem::path& path)
{
    auto in = open(path);
    return parse_region_rules(in);
}

void write_density_csv(const std::filesystem::path& path, std::span<const double> density)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << "face_index,density\n";
    char buf[40];
    for (std::size_t f = 0; f < density.size(); ++f) {
        std::snprintf(buf, sizeof buf, "%.17g", density[f]);
        out << f << ',' << buf << '\n';
    }
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

} // namespace deq
