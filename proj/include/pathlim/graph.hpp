#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace pathlim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
using VertexSet = std::vector<std::size_t>;

/// Finite digraph with a nonnegative weight on every ordered vertex pair.
/// Pairs of positive weight are the edges; the weight table doubles as the
/// adjacency matrix. Immutable once constructed.
class WeightedDigraph {
 public:
  WeightedDigraph() = default;
  WeightedDigraph(std::vector<std::string> vertices, Matrix weights);

  std::size_t size() const noexcept { return vertices_.size(); }
  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  const std::string& name(std::size_t v) const { return vertices_.at(v); }

  std::optional<std::size_t> find(std::string_view token) const;
  /// Throws an input error for unknown tokens.
  std::size_t index_of(std::string_view token) const;

  double weight(std::size_t x, std::size_t y) const { return weights_(x, y); }
  bool has_edge(std::size_t x, std::size_t y) const { return weights_(x, y) > 0.0; }
  const Matrix& adjacency() const noexcept { return weights_; }
  std::vector<std::size_t> successors(std::size_t x) const;

  /// Sub-digraph induced on `subset`, vertices kept in the order given.
  WeightedDigraph induced(std::span<const std::size_t> subset) const;

 private:
  std::vector<std::string> vertices_;
  std::unordered_map<std::string, std::size_t> index_;
  Matrix weights_;
};

/// A finite path, as vertex indices of its digraph. A single vertex is the
/// length-0 path.
struct Path {
  std::vector<std::size_t> vertices;

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  std::size_t initial() const { return vertices.front(); }
  std::size_t final() const { return vertices.back(); }
  bool is_prefix_of(const Path& other) const;
  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path&, const Path&) = default;
};

Path path_from_tokens(const WeightedDigraph& g, std::span<const std::string> tokens);
/// Space-separated vertex tokens.
std::string format_path(const WeightedDigraph& g, const Path& u);

/// Product of the edge weights along `u`; 1 for length-0 paths.
double path_weight(const WeightedDigraph& g, const Path& u);
bool is_valid_path(const WeightedDigraph& g, const Path& u);

/// Weighted path counts. per_vertex(k, x) = Z_x(k); per_pair[k](x, y) = Z_{x,y}(k).
struct ZTable {
  Matrix per_vertex;
  std::optional<std::vector<Matrix>> per_pair;

  std::size_t max_length() const { return static_cast<std::size_t>(per_vertex.rows()) - 1; }
  double z(std::size_t x, std::size_t k) const { return per_vertex(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(x)); }
};

ZTable z_table(const WeightedDigraph& g, std::size_t max_length, bool with_pairs = false);

/// F^k v by k successive products.
Vector matrix_power_apply(const WeightedDigraph& g, std::size_t k, const Vector& v);

/// Edge-list text: one `src dst weight` triple per line, `#` starts a comment
/// line. Vertices are numbered in order of first appearance.
WeightedDigraph parse_digraph(std::string_view text);
WeightedDigraph read_digraph_file(const std::string& path);
/// Inverse of parse_digraph: re-parsing yields the same vertex order and
/// bit-identical weights.
std::string serialize_digraph(const WeightedDigraph& g);

}  // namespace pathlim
