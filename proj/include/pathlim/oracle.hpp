#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pathlim/graph.hpp"

// Brute-force and numeric cross-checks. Nothing here calls into the
// structure, spectral or residual code: reachability, eigenvalues, matrix
// powers and ranks are recomputed from the weight table.

namespace pathlim::oracle {

struct WeightedPath {
  Path path;
  double weight = 0.0;
};

constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/// Every path of length k from x, depth first. Throws a precondition error
/// once more than `cap` paths have been produced.
std::vector<WeightedPath> enumerate_paths(const WeightedDigraph& g, std::size_t x, std::size_t k,
                                          std::size_t cap = kDefaultEnumerationCap);

/// reach(x, y) iff a path (possibly empty) leads from x to y, by BFS.
BoolMatrix reachability(const WeightedDigraph& g);

/// Largest eigenvalue modulus, from a dense eigensolve of each irreducible
/// diagonal block.
double spectral_radius(const WeightedDigraph& g);

struct NumericResidual {
  Matrix theta;                // last stable iterate
  Matrix extrapolated;         // Richardson extrapolation of the iterates to s = 1/rho
  std::vector<Matrix> iterates;
  std::vector<int> exponents;  // j of each iterate, s = (1 - 10^-j) / rho
  bool converging = true;
  bool stopped_early = false;  // conditioning cut the schedule short
};

/// (1 - rho s)^h (Id - sF)^{-1} along s = (1 - 10^-j) / rho for j in the
/// schedule. Requires rho > 0.
NumericResidual numeric_residual(const WeightedDigraph& g, int h, std::span<const int> schedule);
NumericResidual numeric_residual(const WeightedDigraph& g, int h);

constexpr std::size_t kDefaultEigenspaceBound = 8;

struct GeneralizedEigenspace {
  int index = 0;      // smallest k with ker (F - rho Id)^k = ker (F - rho Id)^{k+1}
  int dimension = 0;  // dim ker (F - rho Id)^{|V|}
  double gap = 0.0;   // ratio of the smallest kept to the largest dropped singular value
};

/// Kernel chain of M = F - rho Id with numeric ranks taken at
/// 1e-8 * sigma_max(M). Throws a numeric error when a singular value sits
/// within three decades of that threshold.
GeneralizedEigenspace generalized_eigenspace(const Matrix& f, double rho,
                                             std::size_t bound = kDefaultEigenspaceBound);

/// The index of rho, which is the quantity that tracks the height (the
/// dimension counts basic classes instead).
int generalized_eigenspace_dim(const Matrix& f, double rho, std::size_t bound = kDefaultEigenspaceBound);

/// Whether F has a strictly positive rho-eigenvector. Decided only when the
/// rho-eigenspace is one-dimensional; nullopt otherwise.
std::optional<bool> has_positive_eigenvector(const Matrix& f, double rho);

/// Reproducible random digraph on 1..max_vertices vertices named v0, v1, ...
/// Each ordered pair (loops included) is an edge with probability 0.4 and
/// integer weight uniform in 1..max_weight.
WeightedDigraph random_digraph(std::uint64_t seed, std::size_t max_vertices, int max_weight);

}  // namespace pathlim::oracle
