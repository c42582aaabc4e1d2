#include "biotsim/mesh_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace biotsim {

namespace {

// Line-oriented tokenizer that skips blank and comment lines and tracks
// the current line number for error messages.
class LineReader {
 public:
  LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  // Next non-empty, non-comment line split into tokens; false on EOF.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_number_;
      std::istringstream ss(line);
      tokens.clear();
      std::string tok;
      while (ss >> tok) {
        if (tok.front() == '#') break;
        tokens.push_back(tok);
      }
      if (!tokens.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw MeshError(name_ + ":" + std::to_string(line_number_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::string name_;
  int line_number_ = 0;
};

double parse_real(const LineReader& reader, const std::string& tok) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    reader.fail("expected a real number, got '" + tok + "'");
  return value;
}

long parse_int(const LineReader& reader, const std::string& tok) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    reader.fail("expected an integer, got '" + tok + "'");
  return value;
}

long expect_section(LineReader& reader, const char* keyword) {
  std::vector<std::string> tokens;
  if (!reader.next(tokens)) reader.fail(std::string("unexpected end of file, expected '") + keyword + " N'");
  if (tokens.size() != 2 || tokens[0] != keyword)
    reader.fail(std::string("expected '") + keyword + " N'");
  const long count = parse_int(reader, tokens[1]);
  if (count < 0) reader.fail(std::string("negative count for '") + keyword + "'");
  return count;
}

void format_real(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

Mesh read_mesh(std::istream& in, const std::string& source_name) {
  LineReader reader(in, source_name);
  std::vector<std::string> tokens;
  Mesh mesh;

  const long n_nodes = expect_section(reader, "nodes");
  mesh.vertices.reserve(n_nodes);
  for (long i = 0; i < n_nodes; ++i) {
    if (!reader.next(tokens)) reader.fail("unexpected end of file in node list");
    if (tokens.size() != 2) reader.fail("expected 'x y' for node " + std::to_string(i));
    mesh.vertices.push_back({parse_real(reader, tokens[0]), parse_real(reader, tokens[1])});
  }

  const long n_tri = expect_section(reader, "triangles");
  mesh.triangles.reserve(n_tri);
  mesh.triangle_region.reserve(n_tri);
  for (long i = 0; i < n_tri; ++i) {
    if (!reader.next(tokens)) reader.fail("unexpected end of file in triangle list");
    if (tokens.size() != 4) reader.fail("expected 'v0 v1 v2 region' for triangle " + std::to_string(i));
    std::array<int, 3> tri;
    for (int k = 0; k < 3; ++k) tri[k] = static_cast<int>(parse_int(reader, tokens[k]));
    mesh.triangles.push_back(tri);
    mesh.triangle_region.push_back(static_cast<int>(parse_int(reader, tokens[3])));
  }

  const long n_edges = expect_section(reader, "boundary_edges");
  mesh.boundary_edges.reserve(n_edges);
  for (long i = 0; i < n_edges; ++i) {
    if (!reader.next(tokens)) reader.fail("unexpected end of file in boundary edge list");
    if (tokens.size() != 3) reader.fail("expected 'v0 v1 tag' for boundary edge " + std::to_string(i));
    mesh.boundary_edges.push_back({static_cast<int>(parse_int(reader, tokens[0])),
                                   static_cast<int>(parse_int(reader, tokens[1])),
                                   static_cast<int>(parse_int(reader, tokens[2]))});
  }
  if (reader.next(tokens)) reader.fail("trailing content after boundary edge list");

  mesh.validate();
  return mesh;
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  return read_mesh(in, path);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  std::string buf;
  buf.reserve(64);
  out << "nodes " << mesh.n_vertices() << "\n";
  for (const auto& v : mesh.vertices) {
    buf.clear();
    format_real(buf, v[0]);
    buf.push_back(' ');
    format_real(buf, v[1]);
    buf.push_back('\n');
    out << buf;
  }
  out << "triangles " << mesh.n_triangles() << "\n";
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << mesh.triangle_region[t] << "\n";
  }
  out << "boundary_edges " << mesh.boundary_edges.size() << "\n";
  for (const auto& e : mesh.boundary_edges)
    out << e.v0 << ' ' << e.v1 << ' ' << e.tag << "\n";
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open '" + path + "' for writing");
  write_mesh(mesh, out);
  if (!out) throw MeshError("write failed for '" + path + "'");
}

}  // namespace biotsim
