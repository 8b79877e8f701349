#pragma once

// Triangle-mesh data model shared by every stage of the pipeline.
//
// TriMesh is a validated 3D triangle soup with cached edge adjacency.
// PlanarMap is a 2D embedding of a (possibly sea-augmented) mesh; each face
// is tagged land or sea and each vertex remembers which TriMesh vertex it
// came from (-1 for vertices created by the sea construction).

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace deq {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Face = std::array<int, 3>;

/// Undirected edge adjacency of a face list.
struct EdgeTopology {
    /// Edges as (lo, hi) vertex pairs, sorted lexicographically.
    std::vector<std::array<int, 2>> edges;
    /// Incident faces per edge; second entry is -1 for boundary edges.
    /// Edges with more than two faces keep the first two and are counted in
    /// `nonmanifold_edges`.
    std::vector<std::array<int, 2>> edge_faces;
    std::vector<int> nonmanifold_edges;

    int edge_count() const { return static_cast<int>(edges.size()); }
    bool is_boundary(int e) const { return edge_faces[e][1] < 0; }
};

EdgeTopology build_edge_topology(std::span<const Face> faces);

class TriMesh {
public:
    TriMesh() = default;

    /// Validates index ranges, repeated indices and face areas (faces with
    /// area <= 1e-14 * total area are rejected). Throws GeometryError or
    /// DegenerateFaceError.
    TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces);

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<Face>& faces() const { return faces_; }
    const EdgeTopology& topology() const { return topology_; }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int face_count() const { return static_cast<int>(faces_.size()); }

private:
    std::vector<Vec3> vertices_;
    std::vector<Face> faces_;
    EdgeTopology topology_;
};

class PlanarMap {
public:
    PlanarMap() = default;

    /// `land_mask` defaults to all-land and `provenance` to the identity.
    /// Checks index ranges and array sizes only; orientation is the job of
    /// ensure_ccw.
    PlanarMap(std::vector<Vec2> coords, std::vector<Face> faces,
              std::vector<std::uint8_t> land_mask = {}, std::vector<int> provenance = {});

    const std::vector<Vec2>& coords() const { return coords_; }
    const std::vector<Face>& faces() const { return faces_; }
    const std::vector<std::uint8_t>& land_mask() const { return land_; }
    const std::vector<int>& provenance() const { return provenance_; }
    int vertex_count() const { return static_cast<int>(coords_.size()); }
    int face_count() const { return static_cast<int>(faces_.size()); }
    bool is_land(int f) const { return land_[f] != 0; }
    int land_face_count() const;

    /// Same connectivity and tags, new vertex positions.
    PlanarMap with_coords(std::vector<Vec2> coords) const;

    /// Signed area of face `f` (positive when counter-clockwise).
    double signed_area(int f) const;

private:
    std::vector<Vec2> coords_;
    std::vector<Face> faces_;
    std::vector<std::uint8_t> land_;
    std::vector<int> provenance_;
};

struct MeshDiagnostics {
    int euler_characteristic = 0;
    int boundary_loop_count = 0;
    double min_face_area = 0.0;
    int nonmanifold_edge_count = 0;
    int nonmanifold_vertex_count = 0;
    /// Interior edges traversed in the same direction by both faces.
    int inconsistent_orientation_count = 0;
    int isolated_vertex_count = 0;

    bool is_disk() const
    {
        return euler_characteristic == 1 && boundary_loop_count == 1 && nonmanifold_edge_count == 0 &&
               nonmanifold_vertex_count == 0 && inconsistent_orientation_count == 0 &&
               isolated_vertex_count == 0;
    }
};

MeshDiagnostics validate_disk_topology(const TriMesh& mesh);
MeshDiagnostics validate_disk_topology(const PlanarMap& map);

/// Ordered cyclic boundary of a disk mesh, traversed with the interior on the
/// left (agreeing with the face orientation). Starts at the smallest boundary
/// vertex index. Throws TopologyError unless there is exactly one loop.
std::vector<int> boundary_loop(std::span<const Face> faces, int vertex_count);

struct BoundaryCurve {
    std::vector<int> vertices;
    std::vector<Vec3> points;
    /// edge_lengths[i] = |points[i+1] - points[i]| (cyclic).
    std::vector<double> edge_lengths;
    double total_length = 0.0;
};

BoundaryCurve boundary_loop_ccw(const TriMesh& mesh);

struct AreaMeasures {
    std::vector<double> face_areas;
    /// One third of the incident face areas.
    std::vector<double> vertex_areas;
    double total_area = 0.0;
};

/// Throws DegenerateFaceError if any face area is <= 0 (signed, for maps).
AreaMeasures geometry_measures(const TriMesh& mesh);
AreaMeasures geometry_measures(const PlanarMap& map);

/// Reverses every clockwise face. Throws DegenerateFaceError on zero area.
PlanarMap ensure_ccw(const PlanarMap& map);

/// Number of faces with signed area <= 0.
int check_no_flips(const PlanarMap& map);

double mean_edge_length(const PlanarMap& map);

/// Area-weighted centroid of the land faces.
Vec2 land_centroid(const PlanarMap& map);

double land_area(const PlanarMap& map);

} // namespace deq
