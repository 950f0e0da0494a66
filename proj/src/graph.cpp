#include "pathlim/graph.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pathlim/error.hpp"
#include "pathlim/io.hpp"

namespace pathlim {

WeightedDigraph::WeightedDigraph(std::vector<std::string> vertices, Matrix weights)
    : vertices_(std::move(vertices)), weights_(std::move(weights)) {
  const auto n = static_cast<Eigen::Index>(vertices_.size());
  if (weights_.rows() != n || weights_.cols() != n)
    throw input_error("weight table must be square with one row per vertex");
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!index_.emplace(vertices_[i], i).second)
      throw input_error("duplicate vertex '" + vertices_[i] + "'");
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (!(weights_(i, j) >= 0.0) || !std::isfinite(weights_(i, j)))
        throw input_error("weights must be finite and nonnegative");
}

std::optional<std::size_t> WeightedDigraph::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t WeightedDigraph::index_of(std::string_view token) const {
  if (auto v = find(token)) return *v;
  throw input_error("unknown vertex '" + std::string(token) + "'");
}

std::vector<std::size_t> WeightedDigraph::successors(std::size_t x) const {
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < size(); ++y)
    if (has_edge(x, y)) out.push_back(y);
  return out;
}

WeightedDigraph WeightedDigraph::induced(std::span<const std::size_t> subset) const {
  std::vector<std::string> names;
  names.reserve(subset.size());
  const auto m = static_cast<Eigen::Index>(subset.size());
  Matrix w(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    names.push_back(vertices_.at(subset[static_cast<std::size_t>(i)]));
    for (Eigen::Index j = 0; j < m; ++j)
      w(i, j) = weights_(static_cast<Eigen::Index>(subset[static_cast<std::size_t>(i)]),
                         static_cast<Eigen::Index>(subset[static_cast<std::size_t>(j)]));
  }
  return WeightedDigraph(std::move(names), std::move(w));
}

bool Path::is_prefix_of(const Path& other) const {
  if (vertices.size() > other.vertices.size()) return false;
  return std::equal(vertices.begin(), vertices.end(), other.vertices.begin());
}

Path path_from_tokens(const WeightedDigraph& g, std::span<const std::string> tokens) {
  if (tokens.empty()) throw input_error("a path has at least one vertex");
  Path u;
  for (const auto& t : tokens) u.vertices.push_back(g.index_of(t));
  if (!is_valid_path(g, u)) throw input_error("not a path of the digraph");
  return u;
}

std::string format_path(const WeightedDigraph& g, const Path& u) {
  std::string out;
  for (std::size_t i = 0; i < u.vertices.size(); ++i) {
    if (i) out += ' ';
    out += g.name(u.vertices[i]);
  }
  return out;
}

bool is_valid_path(const WeightedDigraph& g, const Path& u) {
  if (u.vertices.empty()) return false;
  for (auto v : u.vertices)
    if (v >= g.size()) return false;
  for (std::size_t i = 0; i + 1 < u.vertices.size(); ++i)
    if (!g.has_edge(u.vertices[i], u.vertices[i + 1])) return false;
  return true;
}

double path_weight(const WeightedDigraph& g, const Path& u) {
  if (!is_valid_path(g, u)) throw input_error("invalid path: consecutive vertices must be edges");
  double w = 1.0;
  for (std::size_t i = 0; i + 1 < u.vertices.size(); ++i) w *= g.weight(u.vertices[i], u.vertices[i + 1]);
  return w;
}

ZTable z_table(const WeightedDigraph& g, std::size_t max_length, bool with_pairs) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const auto rows = static_cast<Eigen::Index>(max_length) + 1;
  const Matrix& f = g.adjacency();
  ZTable t;
  t.per_vertex.resize(rows, n);
  t.per_vertex.row(0).setOnes();
  for (Eigen::Index k = 1; k < rows; ++k)
    t.per_vertex.row(k) = (f * t.per_vertex.row(k - 1).transpose()).transpose();
  if (with_pairs) {
    std::vector<Matrix> pairs;
    pairs.reserve(static_cast<std::size_t>(rows));
    pairs.push_back(Matrix::Identity(n, n));
    for (Eigen::Index k = 1; k < rows; ++k) pairs.push_back(pairs.back() * f);
    t.per_pair = std::move(pairs);
  }
  return t;
}

Vector matrix_power_apply(const WeightedDigraph& g, std::size_t k, const Vector& v) {
  if (v.size() != static_cast<Eigen::Index>(g.size()))
    throw input_error("vector dimension does not match the vertex count");
  Vector out = v;
  for (std::size_t i = 0; i < k; ++i) out = g.adjacency() * out;
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

WeightedDigraph parse_digraph(std::string_view text) {
  std::vector<std::string> names;
  std::unordered_map<std::string, std::size_t> index;
  std::map<std::pair<std::size_t, std::size_t>, double> entries;

  auto intern = [&](const std::string& token) {
    auto [it, inserted] = index.emplace(token, names.size());
    if (inserted) names.push_back(token);
    return it->second;
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    std::istringstream in{std::string(line)};
    std::vector<std::string> fields;
    for (std::string f; in >> f;) fields.push_back(f);
    if (fields.size() != 3)
      throw ParseError(line_no, "expected 'src dst weight', got " + std::to_string(fields.size()) + " fields");

    const auto& w_text = fields[2];
    double w = 0.0;
    auto [ptr, ec] = std::from_chars(w_text.data(), w_text.data() + w_text.size(), w);
    if (ec != std::errc() || ptr != w_text.data() + w_text.size() || !std::isfinite(w))
      throw ParseError(line_no, "weight '" + w_text + "' is not a decimal number");
    if (w < 0.0) throw ParseError(line_no, "negative weight " + w_text);

    const auto src = intern(fields[0]);
    const auto dst = intern(fields[1]);
    if (!entries.emplace(std::pair{src, dst}, w).second)
      throw ParseError(line_no, "duplicate edge " + fields[0] + " -> " + fields[1]);
  }
  if (names.empty()) throw input_error("digraph has no vertices");

  const auto n = static_cast<Eigen::Index>(names.size());
  Matrix weights = Matrix::Zero(n, n);
  for (const auto& [key, w] : entries)
    weights(static_cast<Eigen::Index>(key.first), static_cast<Eigen::Index>(key.second)) = w;
  return WeightedDigraph(std::move(names), std::move(weights));
}

WeightedDigraph read_digraph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_digraph(buf.str());
}

std::string serialize_digraph(const WeightedDigraph& g) {
  // Lines are ordered so that first appearance reproduces the vertex order:
  // vertex n is introduced by an edge whose other endpoint is already known,
  // or by a zero-weight placeholder line.
  const std::size_t n = g.size();
  std::vector<std::vector<bool>> done(n, std::vector<bool>(n, false));
  std::ostringstream out;
  auto emit = [&](std::size_t x, std::size_t y) {
    out << g.name(x) << ' ' << g.name(y) << ' ' << format_exact(g.weight(x, y)) << '\n';
    done[x][y] = true;
  };
  for (std::size_t v = 0; v < n; ++v) {
    bool introduced = false;
    for (std::size_t x = 0; x < v && !introduced; ++x)
      if (g.has_edge(x, v) && !done[x][v]) emit(x, v), introduced = true;
    for (std::size_t y = 0; y <= v && !introduced; ++y)
      if (g.has_edge(v, y) && !done[v][y]) emit(v, y), introduced = true;
    if (!introduced) {
      out << g.name(v) << ' ' << g.name(v) << " 0\n";
      done[v][v] = true;
    }
    for (std::size_t x = 0; x <= v; ++x)
      for (std::size_t y = 0; y <= v; ++y)
        if ((x == v || y == v) && g.has_edge(x, y) && !done[x][y]) emit(x, y);
  }
  return out.str();
}

}  // namespace pathlim
