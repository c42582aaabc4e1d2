#pragma once

#include <iosfwd>
#include <string>

#include "biotsim/mesh.hpp"

namespace biotsim {

// ASCII mesh format (whitespace separated, '#' starts a comment line):
//   nodes N
//   x y                      (N lines, implicit 0-based ids)
//   triangles M
//   v0 v1 v2 region_tag      (M lines)
//   boundary_edges B
//   v0 v1 boundary_tag       (B lines)
// load_mesh validates all topology invariants; errors carry the line
// number (parse) or entity id (topology). write_mesh emits shortest
// round-trip decimals so load(write(m)) == m.

Mesh load_mesh(const std::string& path);
Mesh read_mesh(std::istream& in, const std::string& source_name = "<stream>");

void write_mesh(const Mesh& mesh, const std::string& path);
void write_mesh(const Mesh& mesh, std::ostream& out);

}  // namespace biotsim
