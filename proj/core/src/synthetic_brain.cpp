#include "biotsim/synthetic_brain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace biotsim {

namespace {

double ellipse_perimeter(double a, double b) {
  // Ramanujan's approximation, ample for grid sizing.
  return std::numbers::pi * (3.0 * (a + b) - std::sqrt((3.0 * a + b) * (a + 3.0 * b)));
}

}  // namespace

Mesh synthetic_brain_mesh(double outer_width, double outer_height, double ventricle_scale,
                          double injured_fraction, int target_elements) {
  if (!(ventricle_scale > 0.0 && ventricle_scale < 1.0))
    throw std::invalid_argument("synthetic_brain_mesh: ventricle_scale must be in (0,1)");
  if (!(injured_fraction > 0.0 && injured_fraction < 0.5))
    throw std::invalid_argument("synthetic_brain_mesh: injured_fraction must be in (0,0.5)");
  if (target_elements < 8)
    throw std::invalid_argument("synthetic_brain_mesh: target_elements too small");

  const double a_out = 0.5 * outer_width;
  const double b_out = 0.5 * outer_height;
  const double a_in = ventricle_scale * a_out;
  const double b_in = ventricle_scale * b_out;
  if (a_in >= a_out || b_in >= b_out)
    throw MeshError("synthetic_brain_mesh: ventricle cavity touches the outer boundary");

  // Ring/sector counts sized for near-isotropic cells at the mid radius.
  const double gap = 0.5 * ((a_out - a_in) + (b_out - b_in));
  const double circumference = ellipse_perimeter(0.5 * (a_in + a_out), 0.5 * (b_in + b_out));
  int n_r = std::max(2, static_cast<int>(std::lround(
                            std::sqrt(target_elements * gap / (2.0 * circumference)))));
  int n_theta = std::max(8, static_cast<int>(std::lround(target_elements / (2.0 * n_r))));

  Mesh mesh;
  mesh.vertices.reserve((n_r + 1) * n_theta);
  for (int k = 0; k <= n_r; ++k) {
    const double s = static_cast<double>(k) / n_r;
    const double a = (1.0 - s) * a_in + s * a_out;
    const double b = (1.0 - s) * b_in + s * b_out;
    for (int j = 0; j < n_theta; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / n_theta;
      mesh.vertices.push_back({a * std::cos(theta), b * std::sin(theta)});
    }
  }
  auto vid = [n_theta](int k, int j) { return k * n_theta + (j % n_theta); };

  // Injured patch: a wedge of quads hugging the ventricle around theta=0.
  const double injured_quads = injured_fraction * n_r * n_theta;
  const int k_inj = std::clamp(static_cast<int>(std::lround(std::sqrt(injured_quads))), 1, n_r);
  const int m_inj = std::clamp(static_cast<int>(std::lround(injured_quads / k_inj)), 1, n_theta);

  mesh.triangles.reserve(2 * n_r * n_theta);
  mesh.triangle_region.reserve(2 * n_r * n_theta);
  for (int k = 0; k < n_r; ++k) {
    for (int j = 0; j < n_theta; ++j) {
      // Counterclockwise quad corners, inner ring first.
      const int p0 = vid(k, j), p1 = vid(k + 1, j), p2 = vid(k + 1, j + 1), p3 = vid(k, j + 1);
      const Vec2& c0 = mesh.vertices[p0];
      const Vec2& c1 = mesh.vertices[p1];
      const Vec2& c2 = mesh.vertices[p2];
      const Vec2& c3 = mesh.vertices[p3];
      const double d02 = std::hypot(c2[0] - c0[0], c2[1] - c0[1]);
      const double d13 = std::hypot(c3[0] - c1[0], c3[1] - c1[1]);
      if (d02 <= d13) {
        mesh.triangles.push_back({p0, p1, p2});
        mesh.triangles.push_back({p0, p2, p3});
      } else {
        mesh.triangles.push_back({p0, p1, p3});
        mesh.triangles.push_back({p1, p2, p3});
      }
      const int region = (k < k_inj && j < m_inj) ? 1 : 0;
      mesh.triangle_region.push_back(region);
      mesh.triangle_region.push_back(region);
    }
  }

  // Tag 2 on the ventricle wall, traversed with the domain on the left.
  for (int j = 0; j < n_theta; ++j)
    mesh.boundary_edges.push_back({vid(0, j + 1), vid(0, j), 2});
  for (int j = 0; j < n_theta; ++j)
    mesh.boundary_edges.push_back({vid(n_r, j), vid(n_r, j + 1), 1});

  mesh.validate();
  return mesh;
}

}  // namespace biotsim
