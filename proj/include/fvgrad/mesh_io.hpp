#pragma once

#include <iosfwd>
#include <string>

#include "fvgrad/mesh.hpp"

namespace fvgrad {

/// Writes the textual mesh format: top-level keys `vertices` ([x,y] pairs),
/// `faces` ({v, owner, neighbour|patch}), `cells` ({faces}) and, when the mesh
/// is multi-level, `levels`. Coordinates are printed with 17 significant
/// digits so a write/read cycle reproduces every double bit-exactly.
void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh_file(const Mesh& mesh, const std::string& path);

/// Reads the format written by write_mesh, recomputes the geometry caches and
/// validates the result.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);

} // namespace fvgrad
