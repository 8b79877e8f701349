#include "deq/mesh.hpp"

#include "deq/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace deq {

namespace {

void check_indices(std::span<const Face> faces, int vertex_count)
{
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& t = faces[f];
        for (int k = 0; k < 3; ++k) {
            if (t[k] < 0 || t[k] >= vertex_count) {
                throw GeometryError("face " + std::to_string(f) + " references vertex " +
                                    std::to_string(t[k]) + " out of range [0, " +
                                    std::to_string(vertex_count) + ")");
            }
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
            throw DegenerateFaceError("face " + std::to_string(f) + " repeats a vertex index",
                                      {static_cast<int>(f)});
        }
    }
}

std::string face_list(const std::vector<int>& faces)
{
    std::string s;
    for (std::size_t i = 0; i < faces.size() && i < 20; ++i) {
        if (i) s += ", ";
        s += std::to_string(faces[i]);
    }
    if (faces.size() > 20) s += ", ...";
    return s;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x)
    {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

MeshDiagnostics diagnose(std::span<const Face> faces, int vertex_count, const EdgeTopology& topo,
                         double min_area)
{
    MeshDiagnostics d;
    d.min_face_area = min_area;
    d.nonmanifold_edge_count = static_cast<int>(topo.nonmanifold_edges.size());

    std::vector<int> used(vertex_count, 0);
    for (const auto& t : faces)
        for (int v : t) used[v] = 1;
    const int used_count = static_cast<int>(std::count(used.begin(), used.end(), 1));
    d.isolated_vertex_count = vertex_count - used_count;
    d.euler_characteristic = used_count - topo.edge_count() + static_cast<int>(faces.size());

    // Orientation consistency: the two faces of an interior edge must traverse it
    // in opposite directions.
    auto directed = [&](int f, int a, int b) {
        const auto& t = faces[f];
        for (int k = 0; k < 3; ++k)
            if (t[k] == a && t[(k + 1) % 3] == b) return true;
        return false;
    };
    for (int e = 0; e < topo.edge_count(); ++e) {
        const auto [f0, f1] = topo.edge_faces[e];
        if (f1 < 0) continue;
        const auto [a, b] = topo.edges[e];
        if (directed(f0, a, b) == directed(f1, a, b)) ++d.inconsistent_orientation_count;
    }

    // Boundary loops = connected components of the boundary edge graph.
    UnionFind uf(vertex_count);
    std::vector<int> on_boundary(vertex_count, 0);
    for (int e = 0; e < topo.edge_count(); ++e) {
        if (!topo.is_boundary(e)) continue;
        uf.unite(topo.edges[e][0], topo.edges[e][1]);
        on_boundary[topo.edges[e][0]] = on_boundary[topo.edges[e][1]] = 1;
    }
    std::vector<int> roots;
    for (int v = 0; v < vertex_count; ++v)
        if (on_boundary[v]) roots.push_back(uf.find(v));
    std::sort(roots.begin(), roots.end());
    d.boundary_loop_count = static_cast<int>(std::unique(roots.begin(), roots.end()) - roots.begin());

    // Vertex manifoldness: incident faces must form a single edge-connected fan.
    std::vector<std::vector<int>> vertex_faces(vertex_count);
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
        for (int v : faces[f]) vertex_faces[v].push_back(f);
    std::vector<std::vector<int>> vertex_edges(vertex_count);
    for (int e = 0; e < topo.edge_count(); ++e) {
        vertex_edges[topo.edges[e][0]].push_back(e);
        vertex_edges[topo.edges[e][1]].push_back(e);
    }
    for (int v = 0; v < vertex_count; ++v) {
        const auto& vf = vertex_faces[v];
        if (vf.size() < 2) continue;
        std::map<int, int> local;
        for (std::size_t i = 0; i < vf.size(); ++i) local[vf[i]] = static_cast<int>(i);
        UnionFind fan(static_cast<int>(vf.size()));
        for (int e : vertex_edges[v]) {
            const auto [f0, f1] = topo.edge_faces[e];
            if (f1 >= 0) fan.unite(local.at(f0), local.at(f1));
        }
        int components = 0;
        for (int i = 0; i < static_cast<int>(vf.size()); ++i)
            if (fan.find(i) == i) ++components;
        if (components > 1) ++d.nonmanifold_vertex_count;
    }
    return d;
}

} // namespace

EdgeTopology build_edge_topology(std::span<const Face> faces)
{
    std::vector<std::array<int, 3>> half; // (lo, hi, face)
    half.reserve(faces.size() * 3);
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
        for (int k = 0; k < 3; ++k) {
            const int a = faces[f][k];
            const int b = faces[f][(k + 1) % 3];
            half.push_back({std::min(a, b), std::max(a, b), f});
        }
    }
    std::sort(half.begin(), half.end());

    EdgeTopology topo;
    for (std::size_t i = 0; i < half.size();) {
        std::size_t j = i;
        while (j < half.size() && half[j][0] == half[i][0] && half[j][1] == half[i][1]) ++j;
        const int e = topo.edge_count();
        topo.edges.push_back({half[i][0], half[i][1]});
        topo.edge_faces.push_back({half[i][2], j - i > 1 ? half[i + 1][2] : -1});
        if (j - i > 2) topo.nonmanifold_edges.push_back(e);
        i = j;
    }
    return topo;
}

TriMesh::TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces))
{
    check_indices(faces_, vertex_count());
    for (const auto& p : vertices_)
        if (!p.allFinite()) throw GeometryError("non-finite vertex coordinate");

    std::vector<double> areas(faces_.size());
    double total = 0.0;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const auto& t = faces_[f];
        areas[f] = 0.5 * (vertices_[t[1]] - vertices_[t[0]]).cross(vertices_[t[2]] - vertices_[t[0]]).norm();
        total += areas[f];
    }
    std::vector<int> bad;
    for (std::size_t f = 0; f < faces_.size(); ++f)
        if (!(areas[f] > 1e-14 * total)) bad.push_back(static_cast<int>(f));
    if (!bad.empty())
        throw DegenerateFaceError("degenerate faces (zero area): " + face_list(bad), bad);

    topology_ = build_edge_topology(faces_);
}

PlanarMap::PlanarMap(std::vector<Vec2> coords, std::vector<Face> faces, std::vector<std::uint8_t> land_mask,
                     std::vector<int> provenance)
    : coords_(std::move(coords)), faces_(std::move(faces)), land_(std::move(land_mask)),
      provenance_(std::move(provenance))
{
    check_indices(faces_, vertex_count());
    if (land_.empty()) land_.assign(faces_.size(), 1);
    if (provenance_.empty()) {
        provenance_.resize(coords_.size());
        std::iota(provenance_.begin(), provenance_.end(), 0);
    }
    if (land_.size() != faces_.size()) throw GeometryError("land mask size does not match face count");
    if (provenance_.size() != coords_.size())
        throw GeometryError("provenance size does not match vertex count");
}

int PlanarMap::land_face_count() const
{
    return static_cast<int>(std::count(land_.begin(), land_.end(), std::uint8_t{1}));
}

PlanarMap PlanarMap::with_coords(std::vector<Vec2> coords) const
{
    if (coords.size() != coords_.size()) throw GeometryError("coordinate count mismatch");
    PlanarMap out = *this;
    out.coords_ = std::move(coords);
    return out;
}

double PlanarMap::signed_area(int f) const
{
    const auto& t = faces_[f];
    const Vec2 a = coords_[t[1]] - coords_[t[0]];
    const Vec2 b = coords_[t[2]] - coords_[t[0]];
    return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

MeshDiagnostics validate_disk_topology(const TriMesh& mesh)
{
    double min_area = mesh.face_count() ? std::numeric_limits<double>::infinity() : 0.0;
    for (const auto& t : mesh.faces()) {
        const auto& v = mesh.vertices();
        min_area = std::min(min_area, 0.5 * (v[t[1]] - v[t[0]]).cross(v[t[2]] - v[t[0]]).norm());
    }
    return diagnose(mesh.faces(), mesh.vertex_count(), mesh.topology(), min_area);
}

MeshDiagnostics validate_disk_topology(const PlanarMap& map)
{
    double min_area = map.face_count() ? std::numeric_limits<double>::infinity() : 0.0;
    for (int f = 0; f < map.face_count(); ++f) min_area = std::min(min_area, map.signed_area(f));
    return diagnose(map.faces(), map.vertex_count(), build_edge_topology(map.faces()), min_area);
}

std::vector<int> boundary_loop(std::span<const Face> faces, int vertex_count)
{
    const EdgeTopology topo = build_edge_topology(faces);
    if (!topo.nonmanifold_edges.empty()) throw TopologyError("mesh has non-manifold edges");

    std::vector<int> next(vertex_count, -1);
    int halfedges = 0;
    for (int e = 0; e < topo.edge_count(); ++e) {
        if (!topo.is_boundary(e)) continue;
        const auto& t = faces[topo.edge_faces[e][0]];
        const auto [lo, hi] = topo.edges[e];
        int a = lo, b = hi;
        for (int k = 0; k < 3; ++k) {
            if (t[k] == hi && t[(k + 1) % 3] == lo) {
                a = hi;
                b = lo;
            }
        }
        if (next[a] >= 0) throw TopologyError("boundary is not a simple loop (non-manifold vertex)");
        next[a] = b;
        ++halfedges;
    }
    if (halfedges == 0) throw TopologyError("mesh has no boundary (closed surface)");

    const int start = static_cast<int>(std::find_if(next.begin(), next.end(), [](int n) { return n >= 0; }) -
                                       next.begin());
    std::vector<int> loop;
    int v = start;
    do {
        loop.push_back(v);
        v = next[v];
        if (v < 0) throw TopologyError("boundary is not closed (inconsistent orientation)");
        if (static_cast<int>(loop.size()) > halfedges) throw TopologyError("boundary traversal did not close");
    } while (v != start);
    if (static_cast<int>(loop.size()) != halfedges)
        throw TopologyError("mesh has " + std::string("more than one boundary loop"));
    return loop;
}

BoundaryCurve boundary_loop_ccw(const TriMesh& mesh)
{
    BoundaryCurve c;
    c.vertices = boundary_loop(mesh.faces(), mesh.vertex_count());
    const int n = static_cast<int>(c.vertices.size());
    c.points.reserve(n);
    for (int v : c.vertices) c.points.push_back(mesh.vertices()[v]);
    c.edge_lengths.resize(n);
    for (int i = 0; i < n; ++i) {
        c.edge_lengths[i] = (c.points[(i + 1) % n] - c.points[i]).norm();
        c.total_length += c.edge_lengths[i];
    }
    return c;
}

namespace {

AreaMeasures finish_measures(std::vector<double> face_areas, std::span<const Face> faces, int vertex_count)
{
    AreaMeasures m;
    m.vertex_areas.assign(vertex_count, 0.0);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        m.total_area += face_areas[f];
        for (int v : faces[f]) m.vertex_areas[v] += face_areas[f] / 3.0;
    }
    m.face_areas = std::move(face_areas);
    return m;
}

} // namespace

AreaMeasures geometry_measures(const TriMesh& mesh)
{
    std::vector<double> areas(mesh.face_count());
    std::vector<int> bad;
    const auto& v = mesh.vertices();
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& t = mesh.faces()[f];
        areas[f] = 0.5 * (v[t[1]] - v[t[0]]).cross(v[t[2]] - v[t[0]]).norm();
        if (!(areas[f] > 0.0)) bad.push_back(f);
    }
    if (!bad.empty()) throw DegenerateFaceError("degenerate faces: " + face_list(bad), bad);
    return finish_measures(std::move(areas), mesh.faces(), mesh.vertex_count());
}

AreaMeasures geometry_measures(const PlanarMap& map)
{
    std::vector<double> areas(map.face_count());
    std::vector<int> bad;
    for (int f = 0; f < map.face_count(); ++f) {
        areas[f] = map.signed_area(f);
        if (!(areas[f] > 0.0)) bad.push_back(f);
    }
    if (!bad.empty()) throw DegenerateFaceError("degenerate or flipped faces: " + face_list(bad), bad);
    return finish_measures(std::move(areas), map.faces(), map.vertex_count());
}

PlanarMap ensure_ccw(const PlanarMap& map)
{
    std::vector<Face> faces = map.faces();
    std::vector<int> bad;
    for (int f = 0; f < map.face_count(); ++f) {
        const double a = map.signed_area(f);
        if (a == 0.0) bad.push_back(f);
        else if (a < 0.0) std::swap(faces[f][1], faces[f][2]);
    }
    if (!bad.empty()) throw DegenerateFaceError("zero-area faces: " + face_list(bad), bad);
    return PlanarMap(map.coords(), std::move(faces), map.land_mask(), map.provenance());
}

int check_no_flips(const PlanarMap& map)
{
    int flips = 0;
    for (int f = 0; f < map.face_count(); ++f)
        if (!(map.signed_area(f) > 0.0)) ++flips;
    return flips;
}

double mean_edge_length(const PlanarMap& map)
{
    const EdgeTopology topo = build_edge_topology(map.faces());
    if (topo.edges.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [a, b] : topo.edges) sum += (map.coords()[a] - map.coords()[b]).norm();
    return sum / static_cast<double>(topo.edges.size());
}

Vec2 land_centroid(const PlanarMap& map)
{
    Vec2 c = Vec2::Zero();
    double total = 0.0;
    for (int f = 0; f < map.face_count(); ++f) {
        if (!map.is_land(f)) continue;
        const auto& t = map.faces()[f];
        const double a = std::abs(map.signed_area(f));
        c += a * (map.coords()[t[0]] + map.coords()[t[1]] + map.coords()[t[2]]) / 3.0;
        total += a;
    }
    if (!(total > 0.0)) throw GeometryError("land region has zero area");
    return c / total;
}

double land_area(const PlanarMap& map)
{
    double total = 0.0;
    for (int f = 0; f < map.face_count(); ++f)
        if (map.is_land(f)) total += map.signed_area(f);
    return total;
}

} // namespace deq
