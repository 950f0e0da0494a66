#pragma once

#include <vector>

#include "pathlim/graph.hpp"
#include "pathlim/structure.hpp"

namespace pathlim {

/// Growth matrix H(s) = (Id - sF)^{-1} at a point 0 <= s < 1/rho.
struct GrowthEval {
  double s = 0.0;
  Matrix h;

  /// G_x(s): total Boltzmann weight of the paths starting at x.
  Vector row_sums() const { return h.rowwise().sum(); }
};

GrowthEval growth_eval(const WeightedDigraph& g, double s);

/// Off-diagonal block of the growth matrix for a partition (S, T) with T
/// final: s H_S(s) X H_T(s).
Matrix block_extension(const Matrix& h_s, const Matrix& h_t, const Matrix& x, double s);
/// Same block after multiplication by the vanishing factors, at the limit
/// s -> 1/rho, given the limits of the two diagonal factors:
/// rho^{-1} L_S X L_T.
Matrix block_extension_limit(const Matrix& limit_s, const Matrix& x, const Matrix& limit_t, double rho);

/// Families of left/right rho-eigenvectors attached to the basic classes of an
/// augmented umbrella digraph, with left_i . right_j = delta_ij.
struct EigenBases {
  double rho = 0.0;
  std::vector<std::size_t> basic_classes;
  std::vector<Vector> left;
  std::vector<Vector> right;
};

EigenBases eigenvector_bases(const WeightedDigraph& g, const ClassDecomposition& dec);
EigenBases eigenvector_bases(const WeightedDigraph& g);

/// F^d = rho^d (projector + remainder), projector idempotent, both products
/// projector * remainder vanish, spectral radius of the remainder below 1.
struct SpectralDecomposition {
  double rho = 0.0;
  int d = 1;
  Matrix projector;
  Matrix remainder;
  std::vector<Vector> left_basis;
  std::vector<Vector> right_basis;
  /// Upper bound on the spectral radius of `remainder`.
  double remainder_radius = 0.0;
};

/// Requires an augmented umbrella digraph whose basic classes are aperiodic.
SpectralDecomposition umbrella_decomposition(const WeightedDigraph& g);
/// Requires an augmented umbrella digraph and d a common multiple of the
/// periods of its basic classes. Works on the d-th power digraph.
SpectralDecomposition periodic_decomposition(const WeightedDigraph& g, int d);

/// Least common multiple of the basic-class periods.
int aggregation_period(const ClassDecomposition& dec);

/// Relative threshold separating structural zeros of the residual matrix.
inline constexpr double kSupportTolerance = 1e-8;

struct ResidualResult {
  int height = 0;
  Matrix theta;
  BoolMatrix support;
};

BoolMatrix support_of(const Matrix& theta);

/// Residual matrix of an augmented umbrella digraph:
/// (1/d) (sum_{i<d} rho^{-i} F^i) projector_d.
ResidualResult residual_umbrella(const WeightedDigraph& g);
/// r l for the normalized Perron pair of a strongly connected digraph.
ResidualResult residual_strongly_connected(const WeightedDigraph& g);
/// Any digraph of positive spectral radius. Classes are absorbed one at a
/// time from the downstream end; height-one prefixes are computed directly.
ResidualResult residual_matrix(const WeightedDigraph& g);

/// (x, y) is in the support iff some dominant chain (L_1, ..., L_h) has
/// x => L_1 and L_h => y.
BoolMatrix theta_support_predicate(const ClassDecomposition& dec, const HeightReport& report);

}  // namespace pathlim
