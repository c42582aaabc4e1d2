#include "biotsim/mesh.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace biotsim {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
}

std::array<int, 2> edge_key(int a, int b) {
  return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
}

}  // namespace

double Mesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  return signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
}

double Mesh::total_area() const {
  double area = 0.0;
  for (int t = 0; t < n_triangles(); ++t) area += triangle_area(t);
  return area;
}

double Mesh::boundary_length(int tag) const {
  double len = 0.0;
  for (const auto& e : boundary_edges) {
    if (e.tag != tag) continue;
    const Vec2& a = vertices[e.v0];
    const Vec2& b = vertices[e.v1];
    len += norm({b[0] - a[0], b[1] - a[1]});
  }
  return len;
}

bool Mesh::has_boundary_tag(int tag) const {
  for (const auto& e : boundary_edges)
    if (e.tag == tag) return true;
  return false;
}

std::vector<int> Mesh::boundary_tags() const {
  std::set<int> tags;
  for (const auto& e : boundary_edges) tags.insert(e.tag);
  return {tags.begin(), tags.end()};
}

EdgeConnectivity build_edge_connectivity(const Mesh& mesh) {
  EdgeConnectivity conn;
  std::map<std::array<int, 2>, int> index;
  for (const auto& tri : mesh.triangles)
    for (int k = 0; k < 3; ++k) index.emplace(edge_key(tri[k], tri[(k + 1) % 3]), 0);

  conn.edges.reserve(index.size());
  for (auto& [key, id] : index) {
    id = static_cast<int>(conn.edges.size());
    conn.edges.push_back(key);
  }

  conn.triangle_edges.resize(mesh.n_triangles());
  conn.edge_triangles.assign(conn.edges.size(), {-1, -1});
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int e = index.at(edge_key(tri[k], tri[(k + 1) % 3]));
      conn.triangle_edges[t][k] = e;
      auto& adj = conn.edge_triangles[e];
      if (adj[0] < 0)
        adj[0] = t;
      else if (adj[1] < 0)
        adj[1] = t;
      else
        throw MeshError("edge " + std::to_string(e) + " shared by more than two triangles");
    }
  }
  return conn;
}

void Mesh::validate() const {
  const int nv = n_vertices();
  for (int t = 0; t < n_triangles(); ++t) {
    for (int v : triangles[t])
      if (v < 0 || v >= nv)
        throw MeshError("triangle " + std::to_string(t) + " references vertex " +
                        std::to_string(v) + " outside [0, " + std::to_string(nv) + ")");
    if (triangle_area(t) <= 0.0)
      throw MeshError("triangle " + std::to_string(t) +
                      " has non-positive area (vertices not counterclockwise)");
  }
  if (triangle_region.size() != triangles.size())
    throw MeshError("region tag count does not match triangle count");

  for (size_t i = 0; i < boundary_edges.size(); ++i) {
    const auto& e = boundary_edges[i];
    if (e.v0 < 0 || e.v0 >= nv || e.v1 < 0 || e.v1 >= nv)
      throw MeshError("boundary edge " + std::to_string(i) + " references vertex outside range");
  }

  const EdgeConnectivity conn = build_edge_connectivity(*this);
  std::map<std::array<int, 2>, int> edge_id;
  for (size_t e = 0; e < conn.edges.size(); ++e)
    edge_id[conn.edges[e]] = static_cast<int>(e);

  // Tagged edges must coincide with the topological boundary, one tag each.
  std::vector<int> tag_count(conn.edges.size(), 0);
  for (size_t i = 0; i < boundary_edges.size(); ++i) {
    const auto& e = boundary_edges[i];
    auto it = edge_id.find(edge_key(e.v0, e.v1));
    if (it == edge_id.end())
      throw MeshError("boundary edge " + std::to_string(i) + " (" + std::to_string(e.v0) + "," +
                      std::to_string(e.v1) + ") is not an edge of any triangle");
    if (conn.edge_triangles[it->second][1] >= 0)
      throw MeshError("boundary edge " + std::to_string(i) + " is interior (two adjacent triangles)");
    tag_count[it->second] += 1;
  }
  for (size_t e = 0; e < conn.edges.size(); ++e) {
    const bool is_boundary = conn.edge_triangles[e][1] < 0;
    if (is_boundary && tag_count[e] == 0)
      throw MeshError("boundary edge (" + std::to_string(conn.edges[e][0]) + "," +
                      std::to_string(conn.edges[e][1]) + ") carries no tag");
    if (tag_count[e] > 1)
      throw MeshError("edge (" + std::to_string(conn.edges[e][0]) + "," +
                      std::to_string(conn.edges[e][1]) + ") carries more than one tag");
  }
}

Mesh unit_square_mesh(int n) {
  if (n < 1) throw std::invalid_argument("unit_square_mesh: n must be >= 1");
  Mesh mesh;
  const double h = 1.0 / n;
  mesh.vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) mesh.vertices.push_back({i * h, j * h});

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  mesh.triangle_region.assign(mesh.triangles.size(), 0);

  // Tags follow the benchmark layout: 1 right, 2 bottom, 3 left, 4 top.
  for (int i = 0; i < n; ++i) mesh.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), 2});
  for (int j = 0; j < n; ++j) mesh.boundary_edges.push_back({vid(n, j), vid(n, j + 1), 1});
  for (int i = 0; i < n; ++i) mesh.boundary_edges.push_back({vid(i + 1, n), vid(i, n), 4});
  for (int j = 0; j < n; ++j) mesh.boundary_edges.push_back({vid(0, j + 1), vid(0, j), 3});
  return mesh;
}

Mesh refine_uniform(const Mesh& mesh) {
  Mesh fine;
  fine.vertices = mesh.vertices;

  const EdgeConnectivity conn = build_edge_connectivity(mesh);
  std::vector<int> midpoint(conn.edges.size());
  for (size_t e = 0; e < conn.edges.size(); ++e) {
    const Vec2& a = mesh.vertices[conn.edges[e][0]];
    const Vec2& b = mesh.vertices[conn.edges[e][1]];
    midpoint[e] = static_cast<int>(fine.vertices.size());
    fine.vertices.push_back({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])});
  }

  std::map<std::array<int, 2>, int> edge_id;
  for (size_t e = 0; e < conn.edges.size(); ++e)
    edge_id[conn.edges[e]] = static_cast<int>(e);

  fine.triangles.reserve(4 * mesh.triangles.size());
  fine.triangle_region.reserve(4 * mesh.triangles.size());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const int m01 = midpoint[conn.triangle_edges[t][0]];
    const int m12 = midpoint[conn.triangle_edges[t][1]];
    const int m20 = midpoint[conn.triangle_edges[t][2]];
    const std::array<std::array<int, 3>, 4> children = {{
        {tri[0], m01, m20}, {m01, tri[1], m12}, {m20, m12, tri[2]}, {m01, m12, m20}}};
    for (const auto& c : children) {
      fine.triangles.push_back(c);
      fine.triangle_region.push_back(mesh.triangle_region[t]);
    }
  }

  fine.boundary_edges.reserve(2 * mesh.boundary_edges.size());
  for (const auto& e : mesh.boundary_edges) {
    const int m = midpoint[edge_id.at(e.v0 < e.v1 ? std::array<int, 2>{e.v0, e.v1}
                                                  : std::array<int, 2>{e.v1, e.v0})];
    fine.boundary_edges.push_back({e.v0, m, e.tag});
    fine.boundary_edges.push_back({m, e.v1, e.tag});
  }
  return fine;
}

}  // namespace biotsim
