#include "deq/cli.hpp"

#include "deq/applications.hpp"
#include "deq/csv_io.hpp"
#include "deq/error.hpp"
#include "deq/log.hpp"
#include "deq/mesh_io.hpp"
#include "deq/report.hpp"
#include "deq/svg.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>

namespace deq {

namespace {

struct Args {
    std::string input;
    std::string population;
    std::string region_labels;
    std::string region_rules;
    std::string init = "tutte";
    bool strict_init = false;
    std::string out;
    std::string map_out;
    std::string svg;
    std::string report;
    std::string dump_density;
    double eps = 1e-3;
    int max_iter = 200;
    std::string velocity = "fick";
    double shrink = 0.7;
    double truncate_radius = 5.0;
    std::string gap_spacing = "auto";
    bool sea_weighted = false;
    bool no_stroke = false;
    std::uint64_t seed = 0;
    double spacing = 0.0;
};

std::string fmt(double v)
{
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void add_pipeline_options(CLI::App* cmd, Args& a, bool population)
{
    cmd->add_option("--input", a.input, "Input mesh (.off or .obj)")->required();
    if (population) {
        cmd->add_option("--population", a.population, "Per-face population CSV (face_index,population)");
        cmd->add_option("--region-labels", a.region_labels, "Per-face region CSV (face_index,region_id)");
        cmd->add_option("--region-rules", a.region_rules, "Region multipliers CSV (region_id,multiplier)");
    }
    cmd->add_option("--init", a.init, "Initial flattening: tutte or authalic")->capture_default_str();
    cmd->add_flag("--strict-init", a.strict_init, "Fall back to Tutte if the authalic map has flipped faces");
    cmd->add_option("--svg", a.svg, "Write an SVG rendering of the final land map");
    cmd->add_option("--report", a.report, "Write a JSON run report");
    cmd->add_option("--dump-density", a.dump_density, "Write the final per-face land density as CSV");
    cmd->add_option("--eps", a.eps, "Stopping threshold on sd/mean of the density")->capture_default_str();
    cmd->add_option("--max-iter", a.max_iter, "Iteration cap")->capture_default_str();
    cmd->add_option("--velocity", a.velocity, "Velocity: fick or raw-gradient")->capture_default_str();
    cmd->add_option("--shrink", a.shrink, "Land radius inside the unit disk")->capture_default_str();
    cmd->add_option("--truncate-radius", a.truncate_radius, "Sea truncation radius")->capture_default_str();
    cmd->add_option("--gap-spacing", a.gap_spacing, "Gap point spacing: auto or a number")->capture_default_str();
    cmd->add_flag("--sea-density-weighted", a.sea_weighted, "Area-weight the sea density mean");
    cmd->add_flag("--no-stroke", a.no_stroke, "Draw SVG faces without outlines");
    cmd->add_option("--seed", a.seed, "Seed for the triangulation retry jitter")->capture_default_str();
}

EqualizeOptions options_from(const Args& a)
{
    EqualizeOptions o;
    o.init = parse_init_kind(a.init);
    o.strict_init = a.strict_init;
    o.diffusion.epsilon = a.eps;
    o.diffusion.max_iterations = a.max_iter;
    o.diffusion.velocity = parse_velocity_mode(a.velocity);
    o.sea.shrink_radius = a.shrink;
    o.sea.truncate_radius = a.truncate_radius;
    o.sea.seed = a.seed;
    if (a.gap_spacing != "auto") {
        try {
            std::size_t used = 0;
            o.sea.gap_spacing = std::stod(a.gap_spacing, &used);
            if (used != a.gap_spacing.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ConfigError("--gap-spacing expects 'auto' or a number, got '" + a.gap_spacing + "'");
        }
        if (!(o.sea.gap_spacing > 0.0)) throw ConfigError("--gap-spacing must be positive");
    }
    o.sea_density_weighted = a.sea_weighted;
    o.sea.validate();
    o.diffusion.validate();
    return o;
}

PopulationSpec population_from(const Args& a, const TriMesh& mesh)
{
    PopulationSpec spec;
    if (!a.population.empty() && !a.region_labels.empty())
        throw ConfigError("--population and --region-labels are mutually exclusive");
    if (!a.population.empty()) {
        spec.mode = PopulationMode::per_face;
        spec.values = read_population_csv(a.population, mesh.face_count());
    } else if (!a.region_labels.empty()) {
        spec.mode = PopulationMode::region_scaled;
        spec.region_labels = read_region_labels(a.region_labels, mesh.face_count());
        if (!a.region_rules.empty()) spec.multipliers = read_region_rules(a.region_rules);
    } else if (!a.region_rules.empty()) {
        throw ConfigError("--region-rules requires --region-labels");
    }
    return spec;
}

RunReport base_report(const std::string& command, const Args& a, const TriMesh& mesh, const EqualizeResult& r)
{
    RunReport rep;
    rep.command = command;
    rep.input = a.input;
    rep.vertex_count = mesh.vertex_count();
    rep.face_count = mesh.face_count();
    rep.augmented_vertex_count = r.augmented.map.vertex_count();
    rep.augmented_face_count = r.augmented.map.face_count();
    rep.init = r.planar_input ? "planar" : a.init;
    rep.planar_input = r.planar_input;
    rep.iterations = r.report.iterations;
    rep.dt = r.report.dt;
    rep.converged = r.report.converged;
    rep.initial_functional = r.report.initial_functional;
    rep.trace = r.report.trace;
    rep.land_median = r.report.land_median;
    rep.land_iqr = r.report.land_iqr;
    rep.land_sd_over_mean = r.report.land_sd_over_mean;
    rep.flipped_land_faces = r.report.flipped_land_faces;
    rep.flags = {{"init", a.init},
                 {"strict_init", a.strict_init ? "true" : "false"},
                 {"eps", fmt(a.eps)},
                 {"max_iter", std::to_string(a.max_iter)},
                 {"velocity", a.velocity},
                 {"shrink", fmt(a.shrink)},
                 {"truncate_radius", fmt(a.truncate_radius)},
                 {"gap_spacing", a.gap_spacing},
                 {"sea_density_weighted", a.sea_weighted ? "true" : "false"},
                 {"seed", std::to_string(a.seed)}};
    if (!a.population.empty()) rep.flags["population"] = a.population;
    if (!a.region_labels.empty()) rep.flags["region_labels"] = a.region_labels;
    if (!a.region_rules.empty()) rep.flags["region_rules"] = a.region_rules;
    return rep;
}

void write_common_outputs(const Args& a, const EqualizeResult& r, RunReport& rep,
                          std::chrono::steady_clock::time_point start, std::ostream& out)
{
    if (!a.svg.empty()) {
        SvgOptions so;
        so.stroke = !a.no_stroke;
        write_svg(a.svg, r.land, r.report.land_density, so);
    }
    if (!a.dump_density.empty()) write_density_csv(a.dump_density, r.report.land_density);
    rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!a.report.empty()) write_report(a.report, rep);
    out << "iterations: " << rep.iterations << (rep.converged ? " (converged)" : " (not converged)") << '\n'
        << "land density median: " << rep.land_median << ", IQR: " << rep.land_iqr << '\n';
}

int run_flatten(const Args& a, bool area_mode, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    const TriMesh mesh = load_mesh(a.input);
    const EqualizeOptions opts = options_from(a);
    EqualizeResult r;
    RunReport rep;
    if (area_mode) {
        AreaPreservingResult ap = area_preserving_parameterize(mesh, opts);
        r = std::move(ap.run);
        rep = base_report("areapreserve", a, mesh, r);
        rep.area_ratio_median = ap.ratios.median;
        rep.area_ratio_sd_over_mean = ap.ratios.sd_over_mean;
    } else {
        r = density_equalize(mesh, population_from(a, mesh), opts);
        rep = base_report("flatten", a, mesh, r);
    }
    if (!a.out.empty()) save_mesh(r.land, a.out, format_from_path(a.out));
    write_common_outputs(a, r, rep, start, out);
    return r.report.converged ? kExitOk : kExitNotConverged;
}

int run_remesh(const Args& a, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    const TriMesh mesh = load_mesh(a.input);
    const EqualizeOptions opts = options_from(a);
    const EqualizeResult r = density_equalize(mesh, population_from(a, mesh), opts);
    const TriMesh remeshed = remesh_surface(mesh, r.land, RemeshSpec{a.spacing});
    if (!a.out.empty()) save_mesh(remeshed, a.out, format_from_path(a.out));
    if (!a.map_out.empty()) save_mesh(r.land, a.map_out, format_from_path(a.map_out));
    RunReport rep = base_report("remesh", a, mesh, r);
    rep.remesh_vertex_count = remeshed.vertex_count();
    rep.remesh_face_count = remeshed.face_count();
    rep.flags["spacing"] = fmt(a.spacing);
    out << "remeshed: " << remeshed.vertex_count() << " vertices, " << remeshed.face_count() << " faces\n";
    write_common_outputs(a, r, rep, start, out);
    return r.report.converged ? kExitOk : kExitNotConverged;
}

int run_verify(const Args& a, std::ostream& out)
{
    const TriMesh mesh = load_mesh(a.input);
    const MeshDiagnostics d = validate_disk_topology(mesh);
    out << "vertices: " << mesh.vertex_count() << '\n'
        << "faces: " << mesh.face_count() << '\n'
        << "euler_characteristic: " << d.euler_characteristic << '\n'
        << "boundary_loops: " << d.boundary_loop_count << '\n'
        << "nonmanifold_edges: " << d.nonmanifold_edge_count << '\n'
        << "nonmanifold_vertices: " << d.nonmanifold_vertex_count << '\n'
        << "inconsistent_orientation: " << d.inconsistent_orientation_count << '\n'
        << "isolated_vertices: " << d.isolated_vertex_count << '\n'
        << "min_face_area: " << d.min_face_area << '\n'
        << "disk: " << (d.is_disk() ? "yes" : "no") << '\n';
    if (!d.is_disk()) return kExitInvalid;
    const FlatCurve flat = flatten_boundary(boundary_loop_ccw(mesh));
    const ConvexityReport c = verify_convex_simple(flat);
    out << "planar: " << (is_planar_xy(mesh) ? "yes" : "no") << '\n'
        << "boundary_vertices: " << flat.points.size() << '\n'
        << "boundary_closure_gap: " << flat.closure_gap << '\n'
        << "flat_boundary_convex: " << (c.convex ? "yes" : "no") << '\n'
        << "flat_boundary_simple: " << (c.simple ? "yes" : "no") << '\n'
        << "flat_boundary_turning_number: " << c.turning_number << '\n';
    return c.convex && c.simple && c.turning_number == 1 ? kExitOk : kExitInvalid;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Density-equalizing flattening of simply-connected open triangle meshes", "deq"};
    app.require_subcommand(1);
    Args a;
    CLI::App* flatten = app.add_subcommand("flatten", "Density-equalizing map for a given population");
    add_pipeline_options(flatten, a, true);
    flatten->add_option("--out", a.out, "Write the final planar map (.obj or .off)");
    CLI::App* areapreserve = app.add_subcommand("areapreserve", "Area-preserving planar parameterization");
    add_pipeline_options(areapreserve, a, false);
    areapreserve->add_option("--out", a.out, "Write the final planar map (.obj or .off)");
    CLI::App* remesh = app.add_subcommand("remesh", "Remesh the surface through the density-equalizing map");
    add_pipeline_options(remesh, a, true);
    remesh->add_option("--out", a.out, "Write the remeshed 3D surface (.obj or .off)");
    remesh->add_option("--map-out", a.map_out, "Write the planar map used for sampling");
    remesh->add_option("--spacing", a.spacing, "Sample spacing on the map (0: mean land edge length)");
    CLI::App* verify = app.add_subcommand("verify", "Check mesh topology and the flattened boundary");
    verify->add_option("--input", a.input, "Input mesh (.off or .obj)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    const WarningSink previous = set_warning_sink([&err](const std::string& msg) { err << "warning: " << msg << '\n'; });
    int code = kExitOk;
    try {
        if (flatten->parsed()) code = run_flatten(a, false, out);
        else if (areapreserve->parsed()) code = run_flatten(a, true, out);
        else if (remesh->parsed()) code = run_remesh(a, out);
        else code = run_verify(a, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        code = kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        code = kExitInvalid;
    }
    set_warning_sink(previous);
    return code;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("deq");
    for (const auto& s : args) argv.push_back(s.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace deq
