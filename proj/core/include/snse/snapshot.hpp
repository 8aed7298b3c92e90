#pragma once

#include <string>

#include "snse/field.hpp"

namespace snse {

// Binary snapshot: magic "SNSE", format version u32, n u32, component count
// u32, then components in order as little-endian 64-bit floats, x-fastest
// row-major physical samples.
void write_snapshot(const std::string& path, const VectorField& u);
void write_snapshot(const std::string& path, const ScalarField& f);

VectorField read_snapshot_vector(const std::string& path, const GridPtr& grid);

}  // namespace snse
