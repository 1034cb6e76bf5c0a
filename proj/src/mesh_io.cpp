#include "schwarzlab/mesh_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace schwarz {

namespace {

std::filesystem::path sidecar_path(const std::filesystem::path& obj_path) {
    std::filesystem::path p = obj_path;
    p.replace_extension(".bnd");
    return p;
}

[[noreturn]] void parse_error(const std::filesystem::path& path, int line, const std::string& what) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void export_mesh(const TriMesh& mesh, const std::filesystem::path& obj_path) {
    std::FILE* f = std::fopen(obj_path.string().c_str(), "w");
    if (!f) throw std::runtime_error("export_mesh: cannot open " + obj_path.string());
    std::fprintf(f, "# %d vertices, %d triangles\n", mesh.vertex_count(), mesh.triangle_count());
    for (const Vec3& p : mesh.positions) std::fprintf(f, "v %.17g %.17g %.17g\n", p.x, p.y, p.z);
    for (const auto& t : mesh.triangles) std::fprintf(f, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
    std::fclose(f);

    std::FILE* b = std::fopen(sidecar_path(obj_path).string().c_str(), "w");
    if (!b) throw std::runtime_error("export_mesh: cannot open " + sidecar_path(obj_path).string());
    std::fprintf(b, "# boundary vertex ids (0-based)\n");
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (mesh.is_boundary[v]) std::fprintf(b, "%d\n", v);
    std::fclose(b);
}

TriMesh import_mesh(const std::filesystem::path& obj_path) {
    std::ifstream in(obj_path);
    if (!in) throw std::runtime_error("import_mesh: cannot open " + obj_path.string());

    TriMesh mesh;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string kind;
        ss >> kind;
        if (kind == "v") {
            Vec3 p;
            if (!(ss >> p.x >> p.y >> p.z)) parse_error(obj_path, lineno, "malformed vertex record");
            mesh.positions.push_back(p);
        } else if (kind == "f") {
            std::array<int, 3> t{};
            if (!(ss >> t[0] >> t[1] >> t[2])) parse_error(obj_path, lineno, "malformed face record");
            std::string extra;
            if (ss >> extra) parse_error(obj_path, lineno, "only triangle faces are supported");
            for (int& idx : t) {
                if (idx < 1 || idx > mesh.vertex_count())
                    parse_error(obj_path, lineno, "face index out of range");
                --idx;
            }
            mesh.triangles.push_back(t);
        } else if (!kind.empty()) {
            parse_error(obj_path, lineno, "unsupported record '" + kind + "'");
        }
    }

    mesh.is_boundary.assign(mesh.positions.size(), 0);
    const std::filesystem::path bnd = sidecar_path(obj_path);
    std::ifstream bin(bnd);
    if (!bin) throw std::runtime_error("import_mesh: cannot open " + bnd.string());
    lineno = 0;
    while (std::getline(bin, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        int v;
        if (!(ss >> v)) parse_error(bnd, lineno, "malformed boundary id");
        if (v < 0 || v >= mesh.vertex_count()) parse_error(bnd, lineno, "boundary id out of range");
        mesh.is_boundary[v] = 1;
    }

    if (!mesh.triangles.empty()) validate(mesh);
    return mesh;
}

}  // namespace schwarz
