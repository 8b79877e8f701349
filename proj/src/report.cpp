#include "deq/report.hpp"

#include "deq/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace deq {

namespace {

double finite(double v, const char* name)
{
    if (!std::isfinite(v)) throw Error(std::string("report field '") + name + "' is not finite");
    return v;
}

} // namespace

std::string report_to_json(const RunReport& r)
{
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["command"] = r.command;
    j["input"] = r.input;
    j["counts"] = {{"vertices", r.vertex_count},
                   {"faces", r.face_count},
                   {"augmented_vertices", r.augmented_vertex_count},
                   {"augmented_faces", r.augmented_face_count}};
    j["init"] = r.init;
    j["planar_input"] = r.planar_input;
    j["iterations"] = r.iterations;
    j["dt"] = finite(r.dt, "dt");
    j["wall_time_s"] = finite(r.wall_time_s, "wall_time_s");
    j["converged"] = r.converged;
    j["initial_functional"] = finite(r.initial_functional, "initial_functional");
    nlohmann::json trace = nlohmann::json::array();
    for (double t : r.trace) trace.push_back(finite(t, "trace"));
    j["trace"] = trace;
    j["land_density"] = {{"median", finite(r.land_median, "median")},
                         {"iqr", finite(r.land_iqr, "iqr")},
                         {"sd_over_mean", finite(r.land_sd_over_mean, "sd_over_mean")}};
    j["flipped_land_faces"] = r.flipped_land_faces;
    if (r.area_ratio_median)
        j["area_ratio"] = {{"median", finite(*r.area_ratio_median, "area_ratio.median")},
                           {"sd_over_mean", finite(r.area_ratio_sd_over_mean.value_or(0.0), "area_ratio.sd")}};
    if (r.remesh_vertex_count)
        j["remesh"] = {{"vertices", *r.remesh_vertex_count}, {"faces", r.remesh_face_count.value_or(0)}};
    j["flags"] = r.flags;
    return j.dump(2) + "\n";
}

void write_report(const std::filesystem::path& path, const RunReport& r)
{
    const std::string text = report_to_json(r);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

} // namespace deq
