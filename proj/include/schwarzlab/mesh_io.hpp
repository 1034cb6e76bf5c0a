#pragma once

// Mesh files are plain OBJ (v/f records, 17 significant digits, 1-based
// indices) plus a ".bnd" sidecar next to the OBJ listing boundary vertex
// ids, one per line, 0-based.  Text round trips are bitwise exact.

#include <filesystem>

#include "schwarzlab/trimesh.hpp"

namespace schwarz {

// Writes obj_path and the sidecar obj_path with extension replaced by .bnd.
void export_mesh(const TriMesh& mesh, const std::filesystem::path& obj_path);

// Reads both files; throws std::runtime_error naming file and line on
// malformed input, and validates flags against topology.
TriMesh import_mesh(const std::filesystem::path& obj_path);

}  // namespace schwarz
