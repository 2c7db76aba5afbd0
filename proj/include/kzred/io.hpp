#pragma once

#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "kzred/errors.hpp"
#include "kzred/matrix.hpp"

// Matrix text format: first line "m n", then m lines of n whitespace-separated
// numbers. Reals are written with 17 significant digits so they read back
// bit-identically.
namespace kzred::io {

inline RealMatrix read_real_matrix(std::istream& in) {
  std::size_t m = 0, n = 0;
  if (!(in >> m >> n)) throw ParseError("matrix header: expected \"m n\"");
  RealMatrix out(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::string tok;
      if (!(in >> tok)) throw ParseError("matrix body: too few entries");
      try {
        std::size_t used = 0;
        out(i, j) = std::stod(tok, &used);
        if (used != tok.size()) throw ParseError("matrix body: bad number '" + tok + "'");
      } catch (const std::logic_error&) {
        throw ParseError("matrix body: bad number '" + tok + "'");
      }
    }
  return out;
}

inline IntMatrix read_int_matrix(std::istream& in) {
  std::size_t m = 0, n = 0;
  if (!(in >> m >> n)) throw ParseError("matrix header: expected \"m n\"");
  IntMatrix out(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::string tok;
      if (!(in >> tok)) throw ParseError("matrix body: too few entries");
      try {
        out(i, j) = Integer(tok);
      } catch (const std::exception&) {
        throw ParseError("matrix body: bad integer '" + tok + "'");
      }
    }
  return out;
}

template <typename T>
void write_matrix(std::ostream& out, const Matrix<T>& m) {
  std::ios_base::fmtflags flags = out.flags();
  const auto precision = out.precision();
  out << m.rows() << ' ' << m.cols() << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

template <typename T>
std::string to_string(const Matrix<T>& m) {
  std::ostringstream s;
  write_matrix(s, m);
  return s.str();
}

}  // namespace kzred::io
