#pragma once

#include <iosfwd>
#include <string>

#include "singpencil/matrix_core.hpp"

namespace singpencil::mm {

/// Reads a Matrix Market "matrix" file: array or coordinate storage,
/// real / complex / integer field, general symmetry. Throws ParseError with
/// the offending line and column.
CMatrix read(std::istream& in, const std::string& source = "<stream>");
CMatrix read_file(const std::string& path);

/// Writes "%%MatrixMarket matrix array complex general" with 17
/// significant digits, column-major.
void write(std::ostream& out, const CMatrix& m);
void write_file(const std::string& path, const CMatrix& m);

}  // namespace singpencil::mm
