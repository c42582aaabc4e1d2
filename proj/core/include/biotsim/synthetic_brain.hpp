#pragma once

#include "biotsim/mesh.hpp"

namespace biotsim {

// Elliptical-annulus stand-in for a 2D brain slice: an outer ellipse with
// axes outer_width x outer_height (tag 1, skull/SAS wall) around an inner
// elliptical cavity scaled by ventricle_scale (tag 2, ventricle wall).
// A contiguous patch of triangles adjacent to the ventricle covering
// about injured_fraction of all elements is tagged region 1. The element
// count lands within 20% of target_elements. Lengths are millimetres.
Mesh synthetic_brain_mesh(double outer_width, double outer_height, double ventricle_scale,
                          double injured_fraction, int target_elements);

}  // namespace biotsim
