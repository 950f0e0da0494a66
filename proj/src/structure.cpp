#include "pathlim/structure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>

#include "pathlim/error.hpp"
#include "pathlim/io.hpp"
#include "pathlim/spectral.hpp"

namespace pathlim {

bool same_radius(double a, double b) {
  return std::abs(a - b) <= kRhoTolerance * std::max(std::abs(a), std::abs(b));
}

std::vector<std::size_t> ClassDecomposition::basic_classes() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (classes[c].basic) out.push_back(c);
  return out;
}

std::vector<std::size_t> ClassDecomposition::final_classes() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (classes[c].final) out.push_back(c);
  return out;
}

VertexSet ClassDecomposition::vertex_order() const {
  VertexSet out;
  for (const auto& c : classes) out.insert(out.end(), c.members.begin(), c.members.end());
  return out;
}

namespace {

// Tarjan's algorithm; returns a component id per vertex.
std::vector<std::size_t> strong_components(const WeightedDigraph& g, std::size_t& count) {
  const std::size_t n = g.size();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0;
  count = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = next_index++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (!g.has_edge(v, w)) continue;
      if (index[w] == unset) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = count;
      } while (w != v);
      ++count;
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] == unset) visit(v);
  return comp;
}

}  // namespace

ClassDecomposition access_classes(const WeightedDigraph& g) {
  const std::size_t n = g.size();
  std::size_t k = 0;
  const auto comp = strong_components(g, k);

  std::vector<VertexSet> members(k);
  for (std::size_t v = 0; v < n; ++v) members[comp[v]].push_back(v);

  std::vector<std::vector<bool>> edge(k, std::vector<bool>(k, false));
  std::vector<int> indegree(k, 0);
  std::vector<bool> is_final(k, true);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (g.has_edge(x, y) && comp[x] != comp[y] && !edge[comp[x]][comp[y]]) {
        edge[comp[x]][comp[y]] = true;
        ++indegree[comp[y]];
        is_final[comp[x]] = false;
      }

  // Kahn's algorithm keyed by (final, smallest member).
  using Key = std::pair<bool, std::size_t>;
  std::priority_queue<std::pair<Key, std::size_t>, std::vector<std::pair<Key, std::size_t>>, std::greater<>> ready;
  for (std::size_t c = 0; c < k; ++c)
    if (indegree[c] == 0) ready.push({{is_final[c], members[c].front()}, c});
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const auto c = ready.top().second;
    ready.pop();
    order.push_back(c);
    for (std::size_t d = 0; d < k; ++d)
      if (edge[c][d] && --indegree[d] == 0) ready.push({{is_final[d], members[d].front()}, d});
  }

  std::vector<std::size_t> position(k);
  for (std::size_t i = 0; i < k; ++i) position[order[i]] = i;

  ClassDecomposition dec;
  dec.classes.resize(k);
  dec.class_of.resize(n);
  dec.class_edges = BoolMatrix::Constant(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k), false);
  for (std::size_t c = 0; c < k; ++c) {
    auto& cls = dec.classes[position[c]];
    cls.members = members[c];
    cls.final = is_final[c];
    for (auto v : members[c]) dec.class_of[v] = position[c];
    for (std::size_t d = 0; d < k; ++d)
      if (edge[c][d]) dec.class_edges(static_cast<Eigen::Index>(position[c]), static_cast<Eigen::Index>(position[d])) = true;
  }

  // Closure, scanning classes from the last (downstream) one.
  const auto ki = static_cast<Eigen::Index>(k);
  dec.class_reach = BoolMatrix::Constant(ki, ki, false);
  for (Eigen::Index c = ki - 1; c >= 0; --c) {
    dec.class_reach(c, c) = true;
    for (Eigen::Index d = c + 1; d < ki; ++d)
      if (dec.class_edges(c, d))
        for (Eigen::Index e = d; e < ki; ++e)
          dec.class_reach(c, e) = dec.class_reach(c, e) || dec.class_reach(d, e);
  }
  return dec;
}

ClassDecomposition classify(const WeightedDigraph&, ClassDecomposition dec, std::span<const double> spectral_radii) {
  if (spectral_radii.size() != dec.classes.size())
    throw precondition_error("classify: one spectral radius per class is required");
  dec.rho = 0.0;
  for (std::size_t c = 0; c < dec.classes.size(); ++c) {
    dec.classes[c].rho = spectral_radii[c];
    dec.rho = std::max(dec.rho, spectral_radii[c]);
  }
  for (auto& c : dec.classes) c.basic = dec.rho > 0.0 && same_radius(c.rho, dec.rho);
  dec.classified = true;
  return dec;
}

ClassDecomposition analyze(const WeightedDigraph& g) {
  auto dec = access_classes(g);
  std::vector<double> radii;
  radii.reserve(dec.classes.size());
  for (auto& c : dec.classes) {
    radii.push_back(spectral_radius_class(g, c.members));
    c.period = period_class(g, c.members).period;
  }
  return classify(g, std::move(dec), radii);
}

double spectral_radius(const WeightedDigraph& g) { return analyze(g).rho; }

HeightReport height_within(const ClassDecomposition& dec, std::span<const std::size_t> class_subset) {
  HeightReport report;
  for (auto c : class_subset) report.rho = std::max(report.rho, dec.classes.at(c).rho);
  if (!(report.rho > 0.0)) throw degenerate_error("digraph has spectral radius 0");

  std::vector<std::size_t> basic;
  for (auto c : class_subset)
    if (same_radius(dec.classes[c].rho, report.rho)) basic.push_back(c);
  std::sort(basic.begin(), basic.end());

  // Longest chain ending at each basic class; classes are topologically sorted.
  std::vector<int> best(basic.size(), 1);
  for (std::size_t i = 0; i < basic.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (dec.class_accessible(basic[j], basic[i])) best[i] = std::max(best[i], best[j] + 1);
  report.height = *std::max_element(best.begin(), best.end());

  std::vector<std::size_t> chain;
  std::function<void(std::size_t)> extend = [&](std::size_t i) {
    chain.push_back(basic[i]);
    if (best[i] == 1) {
      report.dominant_chains.emplace_back(chain.rbegin(), chain.rend());
    } else {
      for (std::size_t j = 0; j < i; ++j)
        if (best[j] == best[i] - 1 && dec.class_accessible(basic[j], basic[i])) extend(j);
    }
    chain.pop_back();
  };
  for (std::size_t i = 0; i < basic.size(); ++i)
    if (best[i] == report.height) extend(i);
  std::sort(report.dominant_chains.begin(), report.dominant_chains.end());
  return report;
}

HeightReport height(const ClassDecomposition& dec) {
  std::vector<std::size_t> all(dec.classes.size());
  for (std::size_t c = 0; c < all.size(); ++c) all[c] = c;
  return height_within(dec, all);
}

bool is_umbrella(const ClassDecomposition& dec) {
  if (dec.degenerate()) throw degenerate_error("digraph has spectral radius 0");
  for (const auto& c : dec.classes)
    if (c.basic != c.final) return false;
  return true;
}

bool is_augmented_umbrella(const ClassDecomposition& dec) {
  if (dec.degenerate()) throw degenerate_error("digraph has spectral radius 0");
  const auto basic = dec.basic_classes();
  for (auto b : basic)
    for (auto c : basic)
      if (b != c && dec.class_accessible(b, c)) return false;
  return true;
}

Reachable reachable(const WeightedDigraph& g, const ClassDecomposition& dec, std::size_t x) {
  if (x >= g.size()) throw input_error("unknown vertex index");
  Reachable out;
  for (std::size_t y = 0; y < g.size(); ++y)
    if (dec.accessible(x, y)) out.vertices.push_back(y);
  for (std::size_t c = 0; c < dec.classes.size(); ++c)
    if (dec.class_accessible(dec.class_of[x], c)) out.gamma = std::max(out.gamma, dec.classes[c].rho);
  out.graph = g.induced(out.vertices);
  return out;
}

Reachable reachable(const WeightedDigraph& g, std::size_t x) { return reachable(g, analyze(g), x); }

VertexSet umbrella_spanned(const WeightedDigraph& g, const ClassDecomposition& dec, std::size_t x) {
  if (x >= g.size()) throw input_error("unknown vertex index");
  std::vector<std::size_t> below;
  for (std::size_t c = 0; c < dec.classes.size(); ++c)
    if (dec.class_accessible(dec.class_of[x], c)) below.push_back(c);
  double gamma = 0.0;
  for (auto c : below) gamma = std::max(gamma, dec.classes[c].rho);
  if (!(gamma > 0.0)) throw degenerate_error("no infinite paths from " + g.name(x));

  const auto report = height_within(dec, below);
  VertexSet out;
  for (std::size_t y = 0; y < g.size(); ++y) {
    if (!dec.accessible(x, y)) continue;
    for (const auto& chain : report.dominant_chains)
      if (dec.class_accessible(dec.class_of[y], chain.front())) {
        out.push_back(y);
        break;
      }
  }
  return out;
}

VertexSet umbrella_spanned(const WeightedDigraph& g, std::size_t x) {
  return umbrella_spanned(g, analyze(g), x);
}

std::string condensation_dot(const WeightedDigraph& g, const ClassDecomposition& dec) {
  std::ostringstream out;
  out << "digraph condensation {\n  node [shape=box];\n";
  for (std::size_t c = 0; c < dec.classes.size(); ++c) {
    const auto& cls = dec.classes[c];
    out << "  c" << c << " [label=\"{";
    for (std::size_t i = 0; i < cls.members.size(); ++i) out << (i ? "," : "") << g.name(cls.members[i]);
    out << "}\\nrho=" << format_number(cls.rho) << " period=" << cls.period;
    if (cls.basic) out << "\\nbasic";
    if (cls.final) out << (cls.basic ? " final" : "\\nfinal");
    out << "\"";
    if (cls.basic) out << ", style=bold";
    out << "];\n";
  }
  for (Eigen::Index c = 0; c < dec.class_edges.rows(); ++c)
    for (Eigen::Index d = 0; d < dec.class_edges.cols(); ++d)
      if (dec.class_edges(c, d)) out << "  c" << c << " -> c" << d << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace pathlim
