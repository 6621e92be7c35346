#include "fvgrad/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fvgrad/errors.hpp"

namespace fvgrad {

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_mesh(const Mesh& mesh, std::ostream& out) {
    out << "{\n\"vertices\": [\n";
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec2& p = mesh.vertices[i].position;
        out << "[" << fmt17(p.x) << "," << fmt17(p.y) << "]"
            << (i + 1 < mesh.vertices.size() ? ",\n" : "\n");
    }
    out << "],\n\"faces\": [\n";
    for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
        const Face& f = mesh.faces[i];
        out << "{\"v\":[" << f.vertices[0] << "," << f.vertices[1] << "],\"owner\":" << f.owner;
        if (f.is_boundary())
            out << ",\"patch\":" << nlohmann::json(mesh.patch_names[f.patch]).dump();
        else
            out << ",\"neighbour\":" << f.neighbour;
        out << "}" << (i + 1 < mesh.faces.size() ? ",\n" : "\n");
    }
    out << "],\n\"cells\": [\n";
    for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
        out << "{\"faces\":[";
        const std::vector<int>& fs = mesh.cells[c].faces;
        for (std::size_t k = 0; k < fs.size(); ++k)
            out << fs[k] << (k + 1 < fs.size() ? "," : "");
        out << "]}" << (c + 1 < mesh.cells.size() ? ",\n" : "\n");
    }
    out << "]";
    if (!mesh.level.empty()) {
        out << ",\n\"levels\": [";
        for (std::size_t c = 0; c < mesh.level.size(); ++c)
            out << mesh.level[c] << (c + 1 < mesh.level.size() ? "," : "");
        out << "]";
    }
    out << "\n}\n";
}

void write_mesh_file(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_mesh(mesh, out);
}

Mesh read_mesh(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw MeshError(std::string("mesh file parse error: ") + e.what());
    }
    Mesh mesh;
    try {
        for (const auto& v : j.at("vertices"))
            mesh.vertices.push_back({Vec2{v.at(0).get<double>(), v.at(1).get<double>()}});

        std::unordered_map<std::string, int> patch_id;
        for (const auto& jf : j.at("faces")) {
            Face f;
            f.vertices = {jf.at("v").at(0).get<int>(), jf.at("v").at(1).get<int>()};
            f.owner = jf.at("owner").get<int>();
            if (jf.contains("neighbour")) {
                f.neighbour = jf.at("neighbour").get<int>();
            } else {
                const std::string name = jf.at("patch").get<std::string>();
                const auto [it, inserted] =
                    patch_id.try_emplace(name, static_cast<int>(mesh.patch_names.size()));
                if (inserted) mesh.patch_names.push_back(name);
                f.patch = it->second;
            }
            mesh.faces.push_back(f);
        }
        for (const auto& jc : j.at("cells")) {
            Cell c;
            for (const auto& fi : jc.at("faces")) c.faces.push_back(fi.get<int>());
            mesh.cells.push_back(std::move(c));
        }
        if (j.contains("levels"))
            for (const auto& l : j.at("levels")) mesh.level.push_back(l.get<int>());
    } catch (const nlohmann::json::exception& e) {
        throw MeshError(std::string("mesh file structure error: ") + e.what());
    }

    compute_geometry(mesh);
    const ValidationReport report = validate_mesh(mesh);
    if (!report.ok()) {
        std::string what = "mesh file failed validation:";
        for (const std::string& v : report.violations) what += "\n  " + v;
        throw MeshError(what);
    }
    return mesh;
}

Mesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_mesh(in);
}

} // namespace fvgrad
