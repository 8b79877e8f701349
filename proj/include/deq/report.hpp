#pragma once

// JSON run reports.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace deq {

inline constexpr int kReportSchemaVersion = 1;

struct RunReport {
    std::string command;
    std::string input;
    int vertex_count = 0;
    int face_count = 0;
    int augmented_vertex_count = 0;
    int augmented_face_count = 0;
    std::string init;
    bool planar_input = false;
    int iterations = 0;
    double dt = 0.0;
    double wall_time_s = 0.0;
    bool converged = false;
    double initial_functional = 0.0;
    std::vector<double> trace;
    double land_median = 0.0;
    double land_iqr = 0.0;
    double land_sd_over_mean = 0.0;
    int flipped_land_faces = 0;
    /// Area mode only: initial 3D area / final planar area per land face.
    std::optional<double> area_ratio_median;
    std::optional<double> area_ratio_sd_over_mean;
    /// Remesh only.
    std::optional<int> remesh_vertex_count;
    std::optional<int> remesh_face_count;
    /// Echo of the effective command-line settings.
    std::map<std::string, std::string> flags;
};

/// Pretty-printed JSON with sorted keys. Throws Error for non-finite numbers.
std::string report_to_json(const RunReport& r);
void write_report(const std::filesystem::path& path, const RunReport& r);

} // namespace deq
