#pragma once

#include "blockacs/block.hpp"

#include <iosfwd>
#include <string>

namespace blockacs {

// Text format: "rows cols" on the first line, then `rows` lines of `cols`
// whitespace-separated decimal values.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);

// Values are written with 17 significant digits so a read round-trips exactly.
void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::string& path, const Matrix& m);

}  // namespace blockacs
