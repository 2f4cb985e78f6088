#pragma once

#include <filesystem>
#include <iosfwd>

#include "panelfact/matrix.hpp"

namespace panelfact {

// Matrix Market dense ("array real general") format. Values are stored
// column-major in the file and written with 17 significant digits, so a
// write/read round trip is bit-exact.

Matrix read_matrix(std::istream& in);
Matrix read_matrix(const std::filesystem::path& path);

void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

} // namespace panelfact
