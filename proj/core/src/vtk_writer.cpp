#include "biotsim/vtk_writer.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace biotsim {

namespace {

void append_real(std::string& line, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  line.append(buf, ptr);
}

void check_field(const Mesh& mesh, const CoefficientVector& f, Family family,
                 const std::string& name) {
  if (f.space == nullptr || &f.space->mesh() != &mesh)
    throw std::invalid_argument("write_vtk: field '" + name + "' is not built on the given mesh");
  if (f.space->family() != family)
    throw std::invalid_argument("write_vtk: field '" + name + "' has the wrong family");
}

}  // namespace

void write_vtk(std::ostream& out, const Mesh& mesh,
               const std::vector<std::pair<std::string, const CoefficientVector*>>& scalar_fields,
               const std::vector<std::pair<std::string, const CoefficientVector*>>& vector_fields) {
  out << "# vtk DataFile Version 3.0\n";
  out << "biotsim fields\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";

  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const auto& v : mesh.vertices) {
    std::string line;
    append_real(line, v[0]);
    line.push_back(' ');
    append_real(line, v[1]);
    line += " 0\n";
    out << line;
  }

  out << "CELLS " << mesh.n_triangles() << " " << 4 * mesh.n_triangles() << "\n";
  for (const auto& tri : mesh.triangles)
    out << "3 " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << "\n";
  out << "CELL_TYPES " << mesh.n_triangles() << "\n";
  for (int t = 0; t < mesh.n_triangles(); ++t) out << "5\n";

  out << "POINT_DATA " << mesh.n_vertices() << "\n";
  for (const auto& [name, field] : scalar_fields) {
    check_field(mesh, *field, Family::P1Scalar, name);
    out << "SCALARS " << name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      std::string line;
      append_real(line, field->values[v]);
      line.push_back('\n');
      out << line;
    }
  }
  for (const auto& [name, field] : vector_fields) {
    check_field(mesh, *field, Family::P2Vector2, name);
    out << "VECTORS " << name << " double\n";
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      std::string line;
      append_real(line, field->values[2 * v]);
      line.push_back(' ');
      append_real(line, field->values[2 * v + 1]);
      line += " 0\n";
      out << line;
    }
  }
}

void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<std::pair<std::string, const CoefficientVector*>>& scalar_fields,
               const std::vector<std::pair<std::string, const CoefficientVector*>>& vector_fields) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk: cannot open '" + path + "'");
  write_vtk(out, mesh, scalar_fields, vector_fields);
  if (!out) throw std::runtime_error("write_vtk: write failed for '" + path + "'");
}

void write_dof_csv(std::ostream& out, const CoefficientVector& field) {
  const FeSpace& space = *field.space;
  if (space.components() == 1)
    out << "node,x,y,value\n";
  else
    out << "node,x,y,value_x,value_y\n";
  for (int n = 0; n < space.n_nodes(); ++n) {
    const Vec2 x = space.node_coord(n);
    std::string line = std::to_string(n);
    line.push_back(',');
    append_real(line, x[0]);
    line.push_back(',');
    append_real(line, x[1]);
    for (int c = 0; c < space.components(); ++c) {
      line.push_back(',');
      append_real(line, field.values[space.dof_of(n, c)]);
    }
    out << line << "\n";
  }
}

}  // namespace biotsim
