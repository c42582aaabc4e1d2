#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "biotsim/fe_space.hpp"

namespace biotsim {

// Legacy ASCII VTK UNSTRUCTURED_GRID writer: POINTS, triangle CELLS, and
// POINT_DATA with one SCALARS section per scalar field and one VECTORS
// section per vector field. P2 fields are down-sampled to vertex values.
void write_vtk(std::ostream& out, const Mesh& mesh,
               const std::vector<std::pair<std::string, const CoefficientVector*>>& scalar_fields,
               const std::vector<std::pair<std::string, const CoefficientVector*>>& vector_fields);

void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<std::pair<std::string, const CoefficientVector*>>& scalar_fields,
               const std::vector<std::pair<std::string, const CoefficientVector*>>& vector_fields);

// Full-precision CSV of every DOF value (node id, coordinates, value per
// component); the lossless companion to the down-sampled VTK output.
void write_dof_csv(std::ostream& out, const CoefficientVector& field);

}  // namespace biotsim
