#pragma once

#include <span>
#include <string>
#include <vector>

#include "pathlim/graph.hpp"

namespace pathlim {

/// Relative tolerance when comparing a class spectral radius to rho(W).
inline constexpr double kRhoTolerance = 1e-9;

bool same_radius(double a, double b);

struct AccessClass {
  VertexSet members;  // ascending vertex index
  double rho = 0.0;
  int period = 0;  // 0 for a singleton without self-loop
  bool basic = false;
  bool final = false;
};

/// Access classes (strongly connected components) in an order compatible with
/// accessibility: x => y implies class_index(x) <= class_index(y), final
/// classes last, ties broken by smallest member index.
struct ClassDecomposition {
  std::vector<AccessClass> classes;
  std::vector<std::size_t> class_of;
  /// Reflexive-transitive accessibility between classes.
  BoolMatrix class_reach;
  /// Direct edges between distinct classes.
  BoolMatrix class_edges;
  double rho = 0.0;
  bool classified = false;

  std::size_t class_count() const { return classes.size(); }
  bool degenerate() const { return !(rho > 0.0); }
  bool accessible(std::size_t x, std::size_t y) const {
    return class_reach(static_cast<Eigen::Index>(class_of[x]), static_cast<Eigen::Index>(class_of[y]));
  }
  bool class_accessible(std::size_t c, std::size_t d) const {
    return class_reach(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(d));
  }
  std::vector<std::size_t> basic_classes() const;
  std::vector<std::size_t> final_classes() const;
  /// Vertices listed class by class; the adjacency matrix permuted by this
  /// order is block upper triangular.
  VertexSet vertex_order() const;
};

struct HeightReport {
  int height = 0;
  double rho = 0.0;
  /// Chains of basic class indices, upstream first, each of length `height`.
  std::vector<std::vector<std::size_t>> dominant_chains;
};

ClassDecomposition access_classes(const WeightedDigraph& g);
/// Fills class radii, rho(W) and the basic/final flags.
ClassDecomposition classify(const WeightedDigraph& g, ClassDecomposition dec,
                            std::span<const double> spectral_radii);
/// access_classes + per-class spectral radius and period + classify.
ClassDecomposition analyze(const WeightedDigraph& g);

double spectral_radius(const WeightedDigraph& g);

HeightReport height(const ClassDecomposition& dec);
/// Height of the sub-digraph formed by a final (or otherwise convex) union of
/// classes, with basic classes taken relative to that sub-digraph's radius.
HeightReport height_within(const ClassDecomposition& dec, std::span<const std::size_t> class_subset);

bool is_umbrella(const ClassDecomposition& dec);
bool is_augmented_umbrella(const ClassDecomposition& dec);

struct Reachable {
  WeightedDigraph graph;  // induced on `vertices`
  VertexSet vertices;     // V(x), ascending
  double gamma = 0.0;     // spectral radius of V(x)
};

Reachable reachable(const WeightedDigraph& g, std::size_t x);
Reachable reachable(const WeightedDigraph& g, const ClassDecomposition& dec, std::size_t x);

/// U(x): vertices of V(x) having access to the head of a dominant chain of V(x).
VertexSet umbrella_spanned(const WeightedDigraph& g, std::size_t x);
VertexSet umbrella_spanned(const WeightedDigraph& g, const ClassDecomposition& dec, std::size_t x);

/// Graphviz rendering of the class poset with per-class labels.
std::string condensation_dot(const WeightedDigraph& g, const ClassDecomposition& dec);

}  // namespace pathlim
