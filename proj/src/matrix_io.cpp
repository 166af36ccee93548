#include "blockacs/matrix_io.hpp"

#include "blockacs/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace blockacs {

Matrix read_matrix(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ShapeError("matrix text: missing header line");
  std::istringstream hs(header);
  long long rows = 0, cols = 0;
  std::string extra;
  if (!(hs >> rows >> cols) || (hs >> extra)) {
    throw ShapeError("matrix text: header must be \"rows cols\", got \"" + header + "\"");
  }
  if (rows < 1 || cols < 1) throw ShapeError("matrix text: rows and cols must be positive");

  Matrix m(rows, cols);
  std::string line;
  for (long long r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) {
      throw ShapeError("matrix text: expected " + std::to_string(rows) + " rows, got " + std::to_string(r));
    }
    std::istringstream ls(line);
    for (long long c = 0; c < cols; ++c) {
      std::string tok;
      if (!(ls >> tok)) {
        throw ShapeError("matrix text: row " + std::to_string(r + 1) + " has fewer than " +
                         std::to_string(cols) + " values");
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw ArgumentError("matrix text: bad number \"" + tok + "\"");
      if (!std::isfinite(v)) throw ArgumentError("matrix text: non-finite value \"" + tok + "\"");
      m(r, c) = v;
    }
    if (ls >> extra) {
      throw ShapeError("matrix text: row " + std::to_string(r + 1) + " has more than " +
                       std::to_string(cols) + " values");
    }
  }
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  out << std::setprecision(17);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ' ';
      out << m(r, c);
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  write_matrix(out, m);
}

}  // namespace blockacs
