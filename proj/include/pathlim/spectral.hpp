#pragma once

#include <span>
#include <vector>

#include "pathlim/graph.hpp"

namespace pathlim {

/// Positive left/right eigenvectors of an irreducible block, normalized so
/// that the right vector has unit max entry and left . right = 1.
struct PerronPair {
  Vector left;
  Vector right;
  double rho = 0.0;
};

/// Period d of a strongly connected class and its periodic classes
/// C_0, ..., C_{d-1}: every edge inside the class goes from C_j to C_{j+1 mod d}.
/// A class without edges has period 0 and no periodic classes.
struct PeriodData {
  int period = 0;
  std::vector<VertexSet> periodic_classes;
};

struct PowerIterationOptions {
  double tolerance = 1e-13;
  int max_iterations = 10000;
};

/// Spectral radius of the block of `cls` (strongly connected or a singleton).
/// Power iteration on F_D + c Id with c the max row sum; stops when the
/// Collatz-Wielandt bracket of the shifted matrix is relatively narrower than
/// the tolerance.
double spectral_radius_class(const WeightedDigraph& g, std::span<const std::size_t> cls,
                             const PowerIterationOptions& opts = {});

PeriodData period_class(const WeightedDigraph& g, std::span<const std::size_t> cls);

PerronPair perron_pair(const WeightedDigraph& g, std::span<const std::size_t> cls,
                       const PowerIterationOptions& opts = {});

/// Perron pair of the aggregated block S_0 = [F^d] restricted to C_0.
PerronPair aggregated_base_pair(const WeightedDigraph& g, std::span<const std::size_t> cls,
                                const PeriodData& period, const PowerIterationOptions& opts = {});

/// Pairs for every aggregated block S_i, obtained from the pair of S_0 by
/// transport along the blocks Q_j = F[C_j, C_{j+1}]:
///   left_i = rho^{-i} left_0 Q_0 ... Q_{i-1},  right_i = rho^{i-d} Q_i ... Q_{d-1} right_0.
/// Pair i is indexed over periodic_classes[i]; its rho field holds rho^d.
std::vector<PerronPair> transported_pairs(const WeightedDigraph& g, std::span<const std::size_t> cls,
                                          const PeriodData& period, const PerronPair& base);

/// Upper bound on the spectral radius of an arbitrary square matrix:
/// min over m <= max_squarings of ||R^(2^m)||^(1/2^m).
double spectral_radius_bound(const Matrix& r, int max_squarings = 12);

}  // namespace pathlim
