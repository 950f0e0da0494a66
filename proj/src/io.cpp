#include "pathlim/io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace pathlim {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string format_exact(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string matrix_csv(std::span<const std::string> row_names,
                       std::span<const std::string> col_names, const Matrix& m) {
  std::ostringstream out;
  out << "vertex";
  for (const auto& c : col_names) out << ',' << c;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << row_names[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << format_number(m(i, j));
    out << '\n';
  }
  return out.str();
}

std::string matrix_csv(const WeightedDigraph& g, const Matrix& m) {
  return matrix_csv(g.vertices(), g.vertices(), m);
}

std::vector<std::string> names_of(const WeightedDigraph& g, std::span<const std::size_t> vertices) {
  std::vector<std::string> out;
  out.reserve(vertices.size());
  for (auto v : vertices) out.push_back(g.name(v));
  return out;
}

}  // namespace pathlim
