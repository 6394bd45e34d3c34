#pragma once

// Field snapshot emission: legacy-VTK structured-points text plus a CSV twin.
// Output is byte-stable for identical state.

#include <string>

#include "mds/transport.hpp"

namespace mds {

std::string fields_vtk(const Grid& g, const SimState& st);
std::string fields_csv(const Grid& g, const SimState& st);

void write_fields(const Grid& g, const SimState& st, const std::string& base_path);

}  // namespace mds
