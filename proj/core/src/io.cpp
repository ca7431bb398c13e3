#include "expint/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace expint {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
T to_little_endian(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::reverse(b, b + sizeof(T));
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

}  // namespace

CsrMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ContractViolation("matrix market: empty input");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ContractViolation("matrix market: missing banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix" || format != "coordinate")
    throw ContractViolation("matrix market: only coordinate matrices are supported");
  if (field != "real" && field != "integer" && field != "double")
    throw ContractViolation("matrix market: only real fields are supported");
  const bool symmetric = symmetry == "symmetric";
  const bool skew = symmetry == "skew-symmetric";
  if (!symmetric && !skew && symmetry != "general")
    throw ContractViolation("matrix market: unsupported symmetry '" + symmetry + "'");

  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sizes(line);
  long long rows = 0, cols = 0, entries = 0;
  if (!(sizes >> rows >> cols >> entries) || rows < 0 || cols < 0 || entries < 0)
    throw ContractViolation("matrix market: bad size line");

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(entries) * (symmetric || skew ? 2 : 1));
  for (long long k = 0; k < entries; ++k) {
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) throw ContractViolation("matrix market: truncated entry list");
    if (i < 1 || j < 1 || i > rows || j > cols)
      throw ContractViolation("matrix market: entry index out of range");
    t.push_back({i - 1, j - 1, v});
    if ((symmetric || skew) && i != j) t.push_back({j - 1, i - 1, skew ? -v : v});
  }
  return CsrMatrix::from_triplets(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                                  std::move(t));
}

CsrMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("matrix market: cannot open " + path.string());
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CsrMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (Index p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p)
      out << (i + 1) << ' ' << (a.col_idx()[p] + 1) << ' ' << format_double(a.values()[p])
          << '\n';
}

void write_matrix_market(const std::filesystem::path& path, const CsrMatrix& a) {
  std::ofstream out(path);
  if (!out) throw ContractViolation("matrix market: cannot write " + path.string());
  write_matrix_market(out, a);
}

void write_vector_text(std::ostream& out, std::span<const double> v) {
  out << v.size() << '\n';
  for (double x : v) out << format_double(x) << '\n';
}

Vector read_vector_text(std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n < 0) throw ContractViolation("vector text: bad length header");
  Vector v(static_cast<std::size_t>(n));
  for (auto& x : v)
    if (!(in >> x)) throw ContractViolation("vector text: truncated data");
  return v;
}

void write_vector_binary(std::ostream& out, std::span<const double> v) {
  const std::uint64_t n = to_little_endian(static_cast<std::uint64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (double x : v) {
    const double le = to_little_endian(x);
    out.write(reinterpret_cast<const char*>(&le), sizeof le);
  }
}

Vector read_vector_binary(std::istream& in) {
  std::uint64_t n = 0;
  if (!in.read(reinterpret_cast<char*>(&n), sizeof n))
    throw ContractViolation("vector binary: missing length header");
  n = to_little_endian(n);
  Vector v(static_cast<std::size_t>(n));
  for (auto& x : v) {
    double le = 0.0;
    if (!in.read(reinterpret_cast<char*>(&le), sizeof le))
      throw ContractViolation("vector binary: truncated data");
    x = to_little_endian(le);
  }
  return v;
}

}  // namespace expint
