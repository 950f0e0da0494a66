#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pathlim/graph.hpp"

namespace pathlim {

/// Markov kernel of a cocycle measure: q(x, y) = w(x, y) Gamma(x, y) / rho.
/// Matrices are indexed over `support` (vertex indices of the ambient digraph).
struct CocycleKernel {
  VertexSet support;
  double rho = 0.0;
  Matrix gamma;           // meaningful where `accessible` holds, 0 elsewhere
  BoolMatrix accessible;  // x => y inside the support
  Matrix q;

  /// Position of a vertex of the ambient digraph inside `support`.
  std::optional<std::size_t> local(std::size_t vertex) const;
};

/// Probability under the Boltzmann distribution theta_{x,s} of the paths
/// extending u: w(u) s^|u| G_{final u}(s) / G_x(s).
double boltzmann_cylinder(const WeightedDigraph& g, std::size_t x, double s, const Path& u);

/// Probability under the uniform distribution on length-k paths from x that
/// the path extends u: w(u) Z_{final u}(k - |u|) / Z_x(k).
double uniform_cylinder(const WeightedDigraph& g, std::size_t x, std::size_t k, const Path& u);

/// Limit of boltzmann_cylinder as s -> 1/gamma(x0):
/// gamma^{-|u|} w(u) [Theta 1]_{final u} / [Theta 1]_{x0}, Theta the residual
/// matrix of V(x0); 0 when final u lies outside U(x0).
double boltzmann_limit_cylinder(const WeightedDigraph& g, std::size_t x0, const Path& u);

/// Kernel of the limit measure, supported by U(x0) and computed from the
/// residual matrix of U(x0).
CocycleKernel limit_kernel(const WeightedDigraph& g, std::size_t x0);

struct CylinderLimits {
  Path cylinder;               // vertex indices of the ambient digraph
  std::vector<double> limits;  // one per residue of k modulo d
  bool agree = true;
};

struct ConvergenceReport {
  std::size_t origin = 0;
  VertexSet support;  // U(x0)
  int d = 1;
  bool aperiodic = true;
  int max_cylinder_length = 0;
  /// betas(v, i) = rho^{-i} [F^i Pi_d 1]_v over the support.
  Matrix betas;
  std::vector<CylinderLimits> residue_limits;
  bool converges = true;
  std::optional<Path> witness;
};

/// Whether the uniform distributions from x0 converge, decided by comparing
/// the limits of cylinder probabilities along each residue class of k mod d
/// for every cylinder of length <= max_cylinder_length (default 2d).
ConvergenceReport uniform_convergence(const WeightedDigraph& g, std::size_t x0,
                                      std::optional<int> max_cylinder_length = std::nullopt);

struct ValidationReport {
  bool row_stochastic = true;
  bool multiplicative = true;
  bool complete = true;
  bool consistent = true;  // q matches w Gamma / rho
  std::vector<std::string> violations;

  bool valid() const { return row_stochastic && multiplicative && consistent; }
};

ValidationReport validate_cocycle_measure(const WeightedDigraph& g, const CocycleKernel& kernel);

/// Positive rho-eigenvector sum_i alpha_i r_i of an umbrella digraph, alphas
/// normalized to sum 1, one per basic class in class order.
Vector positive_eigenvector(const WeightedDigraph& g, std::span<const double> alphas);

/// Complete cocycle kernel with Gamma(x, y) = r_y / r_x for the eigenvector
/// above.
CocycleKernel cocycle_from_alpha(const WeightedDigraph& g, std::span<const double> alphas);

}  // namespace pathlim
