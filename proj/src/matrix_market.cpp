#include "tracekit/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "tracekit/errors.hpp"

namespace tracekit {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Next line that is neither blank nor a % comment.
bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size() || line[i] == '%') continue;
    return true;
  }
  return false;
}

struct Header {
  bool coordinate = true;
  bool symmetric = false;
};

Header parse_header(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(origin + ": empty file");
  std::istringstream fields(line);
  std::string banner, object, format, field, symmetry;
  fields >> banner >> object >> format >> field >> symmetry;
  if (lower(banner) != "%%matrixmarket") throw ParseError(origin + ": missing %%MatrixMarket banner");
  if (lower(object) != "matrix") throw ParseError(origin + ": unsupported object '" + object + "'");
  Header h;
  const std::string fmt = lower(format);
  if (fmt == "coordinate") {
    h.coordinate = true;
  } else if (fmt == "array") {
    h.coordinate = false;
  } else {
    throw ParseError(origin + ": unsupported format '" + format + "'");
  }
  const std::string fld = lower(field);
  if (fld == "complex" || fld == "pattern") {
    throw UnsupportedFieldError(origin + ": unsupported field '" + field + "'");
  }
  if (fld != "real" && fld != "integer") {
    throw ParseError(origin + ": unknown field '" + field + "'");
  }
  const std::string sym = lower(symmetry);
  if (sym == "general") {
    h.symmetric = false;
  } else if (sym == "symmetric") {
    h.symmetric = true;
  } else {
    throw UnsupportedFieldError(origin + ": unsupported symmetry qualifier '" + symmetry + "'");
  }
  return h;
}

DenseSymmetric read_coordinate(std::istream& in, const Header& h, const std::string& origin) {
  std::string line;
  if (!next_data_line(in, line)) throw ParseError(origin + ": missing size line");
  std::istringstream size_line(line);
  long long rows = 0, cols = 0, nnz = 0;
  if (!(size_line >> rows >> cols >> nnz)) throw ParseError(origin + ": malformed size line");
  if (rows <= 0 || cols <= 0 || nnz < 0) throw ParseError(origin + ": bad dimensions");
  if (rows != cols) throw ParseError(origin + ": matrix is not square");
  const std::size_t m = static_cast<std::size_t>(rows);
  std::vector<double> flat(m * m, 0.0);
  for (long long e = 0; e < nnz; ++e) {
    if (!next_data_line(in, line)) throw ParseError(origin + ": fewer entries than the size line claims");
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(entry >> i >> j >> v)) throw ParseError(origin + ": malformed entry line '" + line + "'");
    if (i < 1 || j < 1 || i > rows || j > cols) throw ParseError(origin + ": entry index out of range");
    const std::size_t r = static_cast<std::size_t>(i - 1);
    const std::size_t c = static_cast<std::size_t>(j - 1);
    if (h.symmetric) {
      if (r < c) throw ParseError(origin + ": symmetric file stores an upper-triangle entry");
      flat[r * m + c] = v;
      flat[c * m + r] = v;
    } else {
      flat[r * m + c] = v;
    }
  }
  return DenseSymmetric::from_flat(m, std::move(flat));
}

DenseSymmetric read_array(std::istream& in, const Header& h, const std::string& origin) {
  std::string line;
  if (!next_data_line(in, line)) throw ParseError(origin + ": missing size line");
  std::istringstream size_line(line);
  long long rows = 0, cols = 0;
  if (!(size_line >> rows >> cols)) throw ParseError(origin + ": malformed size line");
  if (rows <= 0 || cols <= 0) throw ParseError(origin + ": bad dimensions");
  if (rows != cols) throw ParseError(origin + ": matrix is not square");
  const std::size_t m = static_cast<std::size_t>(rows);
  std::vector<double> flat(m * m, 0.0);
  auto next_value = [&](double& v) {
    if (!next_data_line(in, line)) throw ParseError(origin + ": fewer values than the size line claims");
    std::istringstream entry(line);
    if (!(entry >> v)) throw ParseError(origin + ": malformed value line '" + line + "'");
  };
  if (h.symmetric) {
    // Lower triangle packed by columns.
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = j; i < m; ++i) {
        double v;
        next_value(v);
        flat[i * m + j] = v;
        flat[j * m + i] = v;
      }
    }
  } else {
    // Full matrix in column-major order.
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < m; ++i) {
        double v;
        next_value(v);
        flat[i * m + j] = v;
      }
    }
  }
  return DenseSymmetric::from_flat(m, std::move(flat));
}

}  // namespace

DenseSymmetric read_matrix_market(std::istream& in, const std::string& origin) {
  const Header h = parse_header(in, origin);
  return h.coordinate ? read_coordinate(in, h, origin) : read_array(in, h, origin);
}

DenseSymmetric load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return read_matrix_market(in, path);
}

void write_matrix_market(const DenseSymmetric& a, std::ostream& out) {
  const std::size_t m = a.dim();
  std::size_t nnz = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (a.at(i, j) != 0.0) ++nnz;
    }
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << m << " " << m << " " << nnz << "\n";
  char buf[64];
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = a.at(i, j);
      if (v == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << (i + 1) << " " << (j + 1) << " " << buf << "\n";
    }
  }
}

void save_matrix_market(const DenseSymmetric& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  write_matrix_market(a, out);
  out.flush();
  if (!out) throw ParseError(path + ": write failed");
}

}  // namespace tracekit
