#include "pathlim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "pathlim/error.hpp"
#include "pathlim/sampling.hpp"

namespace pathlim::oracle {

std::vector<WeightedPath> enumerate_paths(const WeightedDigraph& g, std::size_t x, std::size_t k,
                                          std::size_t cap) {
  if (x >= g.size()) throw input_error("unknown vertex index");
  std::vector<WeightedPath> out;
  std::vector<std::size_t> stack{x};
  auto dfs = [&](auto&& self, double weight) -> void {
    if (stack.size() == k + 1) {
      if (out.size() >= cap)
        throw precondition_error("path enumeration cap of " + std::to_string(cap) + " exceeded");
      out.push_back({Path{stack}, weight});
      return;
    }
    const std::size_t v = stack.back();
    for (std::size_t y = 0; y < g.size(); ++y) {
      const double w = g.adjacency()(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(y));
      if (w == 0.0) continue;
      stack.push_back(y);
      self(self, weight * w);
      stack.pop_back();
    }
  };
  dfs(dfs, 1.0);
  return out;
}

BoolMatrix reachability(const WeightedDigraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const Matrix& f = g.adjacency();
  BoolMatrix reach = BoolMatrix::Constant(n, n, false);
  for (Eigen::Index x = 0; x < n; ++x) {
    std::deque<Eigen::Index> queue{x};
    reach(x, x) = true;
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      for (Eigen::Index y = 0; y < n; ++y)
        if (f(v, y) != 0.0 && !reach(x, y)) {
          reach(x, y) = true;
          queue.push_back(y);
        }
    }
  }
  return reach;
}

double spectral_radius(const WeightedDigraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const BoolMatrix reach = reachability(g);
  std::vector<bool> done(g.size(), false);
  double rho = 0.0;
  for (Eigen::Index x = 0; x < n; ++x) {
    if (done[x]) continue;
    std::vector<Eigen::Index> block;
    for (Eigen::Index y = 0; y < n; ++y)
      if (reach(x, y) && reach(y, x)) {
        block.push_back(y);
        done[y] = true;
      }
    const auto m = static_cast<Eigen::Index>(block.size());
    Matrix sub(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = g.adjacency()(block[i], block[j]);
    Eigen::EigenSolver<Matrix> solver(sub, false);
    if (solver.info() != Eigen::Success) throw numeric_error("dense eigensolve failed");
    rho = std::max(rho, solver.eigenvalues().cwiseAbs().maxCoeff());
  }
  return rho;
}

NumericResidual numeric_residual(const WeightedDigraph& g, int h, std::span<const int> schedule) {
  const double rho = spectral_radius(g);
  if (!(rho > 0.0)) throw degenerate_error("numeric residual needs a positive spectral radius");
  const auto n = static_cast<Eigen::Index>(g.size());
  const Matrix id = Matrix::Identity(n, n);
  NumericResidual out;
  for (int j : schedule) {
    const double eps = std::pow(10.0, -j);
    const double s = (1.0 - eps) / rho;
    Eigen::FullPivLU<Matrix> lu(id - s * g.adjacency());
    if (!lu.isInvertible() || lu.rcond() < 1e-15) {
      out.stopped_early = true;
      break;
    }
    Matrix m = std::pow(eps, h) * lu.inverse();
    if (!m.allFinite()) {
      out.stopped_early = true;
      break;
    }
    out.iterates.push_back(std::move(m));
    out.exponents.push_back(j);
  }
  if (out.iterates.empty()) throw numeric_error("numeric residual: no stable iterate");
  out.theta = out.iterates.back();

  // The iterates are analytic in eps = 1 - rho s, so Neville's scheme on the
  // points (eps_j, M_j) evaluated at eps = 0 cancels the leading error terms.
  {
    std::vector<Matrix> table = out.iterates;
    std::vector<double> eps;
    for (int j : out.exponents) eps.push_back(std::pow(10.0, -j));
    for (std::size_t level = 1; level < table.size(); ++level)
      for (std::size_t i = table.size() - 1; i >= level; --i)
        table[i] = (eps[i - level] * table[i] - eps[i] * table[i - 1]) / (eps[i - level] - eps[i]);
    out.extrapolated = table.back();
  }

  // Converging iterates settle geometrically; a wrong exponent makes them
  // grow by the schedule ratio instead.
  const auto count = out.iterates.size();
  if (count >= 3) {
    const double prev = (out.iterates[count - 2] - out.iterates[count - 3]).cwiseAbs().maxCoeff();
    const double last = (out.iterates[count - 1] - out.iterates[count - 2]).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, out.theta.cwiseAbs().maxCoeff());
    out.converging = last <= 1e-9 * scale || last < 0.5 * prev;
  } else if (count == 2) {
    const double scale = std::max(1.0, out.iterates[0].cwiseAbs().maxCoeff());
    out.converging = out.theta.cwiseAbs().maxCoeff() <= 2.0 * scale;
  }
  return out;
}

NumericResidual numeric_residual(const WeightedDigraph& g, int h) {
  const int schedule[] = {2, 3, 4, 5};
  return numeric_residual(g, h, schedule);
}

namespace {

constexpr double kRankTolerance = 1e-8;
constexpr double kAmbiguityDecades = 1e3;

struct NullSpace {
  Matrix basis;
  double smallest_kept = std::numeric_limits<double>::infinity();
  double largest_dropped = 0.0;
};

NullSpace null_space(const Matrix& a, double threshold) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  NullSpace out;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) {
      ++rank;
      out.smallest_kept = std::min(out.smallest_kept, sv(i));
    } else {
      out.largest_dropped = std::max(out.largest_dropped, sv(i));
    }
    if (sv(i) > threshold / kAmbiguityDecades && sv(i) < threshold * kAmbiguityDecades) {
      std::ostringstream msg;
      msg << "ambiguous numeric rank: singular value " << sv(i) << " against threshold " << threshold;
      throw numeric_error(msg.str());
    }
  }
  out.basis = svd.matrixV().rightCols(a.cols() - rank);
  return out;
}

}  // namespace

GeneralizedEigenspace generalized_eigenspace(const Matrix& f, double rho, std::size_t bound) {
  if (f.rows() != f.cols()) throw input_error("generalized_eigenspace: matrix is not square");
  const auto n = f.rows();
  if (static_cast<std::size_t>(n) > bound)
    throw precondition_error("generalized_eigenspace: matrix larger than " + std::to_string(bound));
  const Matrix m = f - rho * Matrix::Identity(n, n);
  GeneralizedEigenspace out;
  const double sigma_max = n == 0 ? 0.0 : Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
  if (sigma_max == 0.0) {
    out.index = n == 0 ? 0 : 1;
    out.dimension = static_cast<int>(n);
    out.gap = std::numeric_limits<double>::infinity();
    return out;
  }
  const double threshold = kRankTolerance * sigma_max;
  // ker M^{k+1} = ker (P_k M), P_k the orthogonal projector onto the
  // complement of ker M^k. Every factor stays of the size of M.
  Matrix kernel(n, 0);
  out.gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Matrix projector = Matrix::Identity(n, n) - kernel * kernel.transpose();
    const auto ns = null_space(projector * m, threshold);
    if (ns.largest_dropped > 0.0) out.gap = std::min(out.gap, ns.smallest_kept / ns.largest_dropped);
    if (ns.basis.cols() <= kernel.cols()) break;
    kernel = ns.basis;
    out.index = static_cast<int>(k) + 1;
  }
  out.dimension = static_cast<int>(kernel.cols());
  return out;
}

int generalized_eigenspace_dim(const Matrix& f, double rho, std::size_t bound) {
  return generalized_eigenspace(f, rho, bound).index;
}

std::optional<bool> has_positive_eigenvector(const Matrix& f, double rho) {
  const auto n = f.rows();
  const Matrix m = f - rho * Matrix::Identity(n, n);
  const double sigma_max = Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
  if (sigma_max == 0.0) return true;  // F = rho Id
  const auto ns = null_space(m, kRankTolerance * sigma_max);
  if (ns.basis.cols() != 1) return std::nullopt;
  Vector v = ns.basis.col(0);
  if (v.maxCoeff() < -v.minCoeff()) v = -v;
  return v.minCoeff() > 1e-12 * v.maxCoeff();
}

WeightedDigraph random_digraph(std::uint64_t seed, std::size_t max_vertices, int max_weight) {
  if (max_vertices == 0) throw precondition_error("random_digraph: max_vertices must be positive");
  Rng rng(seed);
  const auto n = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_vertices));
  std::vector<std::string> names;
  for (std::size_t v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
  Matrix w = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  if (max_weight > 0)
    for (Eigen::Index x = 0; x < w.rows(); ++x)
      for (Eigen::Index y = 0; y < w.cols(); ++y)
        if (rng.uniform() < 0.4) w(x, y) = 1.0 + std::floor(rng.uniform() * max_weight);
  return WeightedDigraph(std::move(names), std::move(w));
}

}  // namespace pathlim::oracle
