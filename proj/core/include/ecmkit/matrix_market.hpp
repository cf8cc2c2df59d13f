#pragma once

#include <iosfwd>
#include <string>

#include "ecmkit/crs.hpp"

namespace ecmkit {

/// Reads a Matrix Market coordinate file (real, integer or pattern; general
/// or symmetric) into canonical CRS. Symmetric storage is expanded, duplicate
/// entries are summed, pattern entries get the value 1.0.
CrsMatrix read_matrix_market(const std::string& path);
CrsMatrix read_matrix_market(std::istream& in, const std::string& source);

void write_matrix_market(const CrsMatrix& a, const std::string& path);

} // namespace ecmkit
