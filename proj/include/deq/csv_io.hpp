#pragma once

// Per-face CSV inputs and the density dump.
//
// Every reader expects lines "face_index,value" with 0-based face indices,
// an optional header line, and exactly one line per face.

#include <filesystem>
#include <istream>
#include <map>
#include <span>
#include <vector>

namespace deq {

/// Throws IoError naming the path when it cannot be opened, ParseError (with
/// line number) for malformed lines, out-of-range or repeated indices and
/// non-positive values, and ParseError (line 0) when faces are missing.
std::vector<double> read_population_csv(const std::filesystem::path& path, int face_count);
std::vector<double> parse_population_csv(std::istream& in, int face_count);

/// Lines "face_index,region_id".
std::vector<int> read_region_labels(const std::filesystem::path& path, int face_count);
std::vector<int> parse_region_labels(std::istream& in, int face_count);

/// Lines "region_id,multiplier"; multipliers must be positive.
std::map<int, double> read_region_rules(const std::filesystem::path& path);
std::map<int, double> parse_region_rules(std::istream& in);

/// Writes "face_index,density" for every value, with a header line.
void write_density_csv(const std::filesystem::path& path, std::span<const double> density);

} // namespace deq
