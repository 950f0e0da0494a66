#pragma once

#include <span>
#include <string>
#include <vector>

#include "pathlim/graph.hpp"

namespace pathlim {

/// Nine significant digits, the precision of every report.
std::string format_number(double x);
/// Shortest representation that parses back to the same double.
std::string format_exact(double x);

/// CSV matrix with a header row of column tokens and a leading column of row
/// tokens.
std::string matrix_csv(std::span<const std::string> row_names,
                       std::span<const std::string> col_names, const Matrix& m);
std::string matrix_csv(const WeightedDigraph& g, const Matrix& m);

std::vector<std::string> names_of(const WeightedDigraph& g, std::span<const std::size_t> vertices);

}  // namespace pathlim
