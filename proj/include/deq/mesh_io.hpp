#pragma once

#include "deq/mesh.hpp"

#include <filesystem>
#include <iosfwd>

namespace deq {

enum class MeshFormat { off, obj };

/// Guess the format from the file extension (".off" / ".obj", case-insensitive).
MeshFormat format_from_path(const std::filesystem::path& path);

/// Triangles only. Vertex order is preserved; OBJ indices are 1-based (negative
/// indices count back from the end), OFF indices are 0-based.
/// Throws IoError, ParseError (with line number) or DegenerateFaceError.
TriMesh load_mesh(const std::filesystem::path& path, MeshFormat format);
TriMesh load_mesh(const std::filesystem::path& path);
TriMesh read_mesh(std::istream& in, MeshFormat format);

/// Writers use LF line endings and 17 significant digits. Planar maps are
/// written with z = 0.
void save_mesh(const TriMesh& mesh, const std::filesystem::path& path, MeshFormat format = MeshFormat::obj);
void save_mesh(const PlanarMap& map, const std::filesystem::path& path, MeshFormat format = MeshFormat::obj);
void write_mesh(std::ostream& out, std::span<const Vec3> vertices, std::span<const Face> faces, MeshFormat format);

} // namespace deq
