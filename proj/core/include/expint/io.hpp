#pragma once

#include <filesystem>
#include <iosfwd>

#include "expint/csr.hpp"

namespace expint {

/// Matrix Market "coordinate real general" (1-based indices). Symmetric
/// input is expanded on read; pattern and complex files are rejected.
CsrMatrix read_matrix_market(std::istream& in);
CsrMatrix read_matrix_market(const std::filesystem::path& path);
void write_matrix_market(std::ostream& out, const CsrMatrix& a);
void write_matrix_market(const std::filesystem::path& path, const CsrMatrix& a);

/// Plain text: first line the length, then one value per line (%.17g).
void write_vector_text(std::ostream& out, std::span<const double> v);
Vector read_vector_text(std::istream& in);

/// Binary: uint64 length, then IEEE-754 doubles, all little-endian.
void write_vector_binary(std::ostream& out, std::span<const double> v);
Vector read_vector_binary(std::istream& in);

}  // namespace expint
