#include "pathlim/residual.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "pathlim/error.hpp"
#include "pathlim/spectral.hpp"

namespace pathlim {

namespace {

Matrix select(const Matrix& m, const VertexSet& rows, const VertexSet& cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j]));
  return out;
}

void place(Matrix& target, const VertexSet& rows, const VertexSet& cols, const Matrix& block) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      target(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j])) =
          block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

VertexSet all_vertices(std::size_t n) {
  VertexSet v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

VertexSet members_of(const ClassDecomposition& dec, const std::vector<std::size_t>& classes) {
  VertexSet out;
  for (auto c : classes) out.insert(out.end(), dec.classes[c].members.begin(), dec.classes[c].members.end());
  std::sort(out.begin(), out.end());
  return out;
}

// (M)^{-1} B by partial-pivot LU, refusing near-singular systems.
Matrix solve_checked(const Matrix& m, const Matrix& b, const char* what) {
  if (m.rows() == 0) return Matrix(0, b.cols());
  Eigen::PartialPivLU<Matrix> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream msg;
    msg << what << ": singular linear system (reciprocal condition " << rcond << ")";
    throw numeric_error(msg.str());
  }
  return lu.solve(b);
}

Matrix matrix_power(const Matrix& f, int k) {
  Matrix p = Matrix::Identity(f.rows(), f.cols());
  for (int i = 0; i < k; ++i) p = p * f;
  return p;
}

}  // namespace

GrowthEval growth_eval(const WeightedDigraph& g, double s) {
  const double rho = spectral_radius(g);
  if (!(s >= 0.0) || (rho > 0.0 && s * rho >= 1.0)) {
    std::ostringstream msg;
    msg << "growth_eval: s = " << s << " is outside [0, 1/rho) with rho = " << rho;
    throw precondition_error(msg.str());
  }
  const auto n = static_cast<Eigen::Index>(g.size());
  const Matrix m = Matrix::Identity(n, n) - s * g.adjacency();
  return {s, solve_checked(m, Matrix::Identity(n, n), "growth_eval")};
}

Matrix block_extension(const Matrix& h_s, const Matrix& h_t, const Matrix& x, double s) {
  if (h_s.cols() != x.rows() || x.cols() != h_t.rows())
    throw precondition_error("block_extension: dimension mismatch");
  return s * h_s * x * h_t;
}

Matrix block_extension_limit(const Matrix& limit_s, const Matrix& x, const Matrix& limit_t, double rho) {
  if (limit_s.cols() != x.rows() || x.cols() != limit_t.rows())
    throw precondition_error("block_extension_limit: dimension mismatch");
  return limit_s * x * limit_t / rho;
}

EigenBases eigenvector_bases(const WeightedDigraph& g, const ClassDecomposition& dec) {
  if (dec.degenerate()) throw degenerate_error("digraph has spectral radius 0");
  if (!is_augmented_umbrella(dec))
    throw precondition_error("eigenvector bases require an augmented umbrella digraph");

  EigenBases out;
  out.rho = dec.rho;
  out.basic_classes = dec.basic_classes();
  const auto n = static_cast<Eigen::Index>(g.size());
  const Matrix& f = g.adjacency();

  VertexSet others;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (!dec.classes[dec.class_of[v]].basic) others.push_back(v);
  const auto k = static_cast<Eigen::Index>(others.size());
  const Matrix shifted = dec.rho * Matrix::Identity(k, k) - select(f, others, others);
  Eigen::PartialPivLU<Matrix> lu;
  if (k > 0) {
    lu.compute(shifted);
    if (!(lu.rcond() > 1e-14)) throw numeric_error("eigenvector_bases: rho Id - A is singular");
  }

  for (auto c : out.basic_classes) {
    const auto& members = dec.classes[c].members;
    const auto pair = perron_pair(g, members);
    Vector r = Vector::Zero(n), l = Vector::Zero(n);
    for (std::size_t i = 0; i < members.size(); ++i) {
      r(static_cast<Eigen::Index>(members[i])) = pair.right(static_cast<Eigen::Index>(i));
      l(static_cast<Eigen::Index>(members[i])) = pair.left(static_cast<Eigen::Index>(i));
    }
    if (k > 0) {
      // Upstream part solves (rho Id - A) u = X r~, downstream part solves
      // v (rho Id - A) = l~ Y.
      const Vector u = lu.solve(select(f, others, members) * pair.right);
      const Vector v = lu.transpose().solve(select(f, members, others).transpose() * pair.left);
      for (Eigen::Index i = 0; i < k; ++i) {
        r(static_cast<Eigen::Index>(others[static_cast<std::size_t>(i)])) = u(i);
        l(static_cast<Eigen::Index>(others[static_cast<std::size_t>(i)])) = v(i);
      }
    }
    out.right.push_back(std::move(r));
    out.left.push_back(std::move(l));
  }
  return out;
}

EigenBases eigenvector_bases(const WeightedDigraph& g) { return eigenvector_bases(g, analyze(g)); }

SpectralDecomposition umbrella_decomposition(const WeightedDigraph& g) {
  const auto dec = analyze(g);
  if (dec.degenerate()) throw degenerate_error("digraph has spectral radius 0");
  if (!is_augmented_umbrella(dec))
    throw precondition_error("umbrella_decomposition: two basic classes access each other");
  for (auto c : dec.basic_classes())
    if (dec.classes[c].period != 1)
      throw precondition_error("umbrella_decomposition: basic class of period " +
                               std::to_string(dec.classes[c].period) + " (use periodic_decomposition)");

  auto bases = eigenvector_bases(g, dec);
  const auto n = static_cast<Eigen::Index>(g.size());
  SpectralDecomposition out;
  out.rho = dec.rho;
  out.d = 1;
  out.projector = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < bases.right.size(); ++i)
    out.projector += bases.right[i] * bases.left[i].transpose();
  out.remainder = g.adjacency() / dec.rho - out.projector;
  out.remainder_radius = spectral_radius_bound(out.remainder);
  out.left_basis = std::move(bases.left);
  out.right_basis = std::move(bases.right);
  return out;
}

int aggregation_period(const ClassDecomposition& dec) {
  int d = 1;
  for (auto c : dec.basic_classes()) d = std::lcm(d, std::max(dec.classes[c].period, 1));
  return d;
}

SpectralDecomposition periodic_decomposition(const WeightedDigraph& g, int d) {
  const auto dec = analyze(g);
  if (dec.degenerate()) throw degenerate_error("digraph has spectral radius 0");
  if (!is_augmented_umbrella(dec))
    throw precondition_error("periodic_decomposition: two basic classes access each other");
  if (d < 1) throw precondition_error("periodic_decomposition: d must be positive");
  for (auto c : dec.basic_classes())
    if (d % dec.classes[c].period != 0)
      throw precondition_error("periodic_decomposition: d = " + std::to_string(d) +
                               " is not a multiple of the period " + std::to_string(dec.classes[c].period));

  const Matrix fd = matrix_power(g.adjacency(), d);
  const WeightedDigraph power(g.vertices(), fd);
  auto out = umbrella_decomposition(power);
  out.rho = dec.rho;
  out.d = d;
  out.remainder = fd / std::pow(dec.rho, d) - out.projector;
  out.remainder_radius = spectral_radius_bound(out.remainder);
  return out;
}

BoolMatrix support_of(const Matrix& theta) {
  const double cut = kSupportTolerance * theta.cwiseAbs().maxCoeff();
  return (theta.array() > cut).matrix();
}

ResidualResult residual_umbrella(const WeightedDigraph& g) {
  const auto dec = analyze(g);
  if (dec.degenerate()) throw degenerate_error("digraph has spectral radius 0");
  if (!is_augmented_umbrella(dec))
    throw precondition_error("residual_umbrella: digraph is not an (augmented) umbrella digraph");
  const int d = aggregation_period(dec);
  const auto pd = periodic_decomposition(g, d);
  const auto n = static_cast<Eigen::Index>(g.size());
  const Matrix scaled = g.adjacency() / dec.rho;
  Matrix sum = Matrix::Zero(n, n), power = Matrix::Identity(n, n);
  for (int i = 0; i < d; ++i) {
    sum += power;
    power = power * scaled;
  }
  ResidualResult out;
  out.height = 1;
  out.theta = sum * pd.projector / d;
  out.support = support_of(out.theta);
  return out;
}

ResidualResult residual_strongly_connected(const WeightedDigraph& g) {
  const auto dec = access_classes(g);
  if (dec.class_count() != 1) throw precondition_error("residual_strongly_connected: digraph is not strongly connected");
  const auto all = all_vertices(g.size());
  if (!(spectral_radius_class(g, all) > 0.0)) throw degenerate_error("digraph has spectral radius 0");
  const auto pair = perron_pair(g, all);
  ResidualResult out;
  out.height = 1;
  out.theta = pair.right * pair.left.transpose();
  out.support = support_of(out.theta);
  return out;
}

namespace {

using Memo = std::map<VertexSet, ResidualResult>;

ResidualResult residual_recursive(const WeightedDigraph& g, const VertexSet& origin, Memo& memo) {
  VertexSet key = origin;
  std::sort(key.begin(), key.end());
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  const auto dec = analyze(g);
  if (dec.degenerate()) throw degenerate_error("digraph has spectral radius 0");
  const auto whole = height(dec);
  if (whole.height == 1) {
    auto result = residual_umbrella(g);
    memo.emplace(key, result);
    return result;
  }

  const auto n = static_cast<Eigen::Index>(g.size());
  const Matrix& f = g.adjacency();
  const VertexSet everyone = all_vertices(g.size());
  auto sub_origin = [&](const VertexSet& local) {
    VertexSet out;
    for (auto v : local) out.push_back(origin[v]);
    return out;
  };
  auto class_residual = [&](std::size_t c) {
    return residual_strongly_connected(g.induced(dec.classes[c].members)).theta;
  };

  // State for V_{i-1}: height, and the residual matrix embedded in n x n.
  // A height-one state is kept lazy until a later step needs its residual.
  std::vector<std::size_t> suffix;
  int h_prev = 0;
  bool lazy = false;
  Matrix theta = Matrix::Zero(n, n);

  auto materialize = [&]() {
    if (!lazy) return;
    const auto vs = members_of(dec, suffix);
    const auto sub = residual_recursive(g.induced(vs), sub_origin(vs), memo);
    theta.setZero();
    place(theta, vs, vs, sub.theta);
    lazy = false;
  };

  for (std::size_t step = 0; step < dec.class_count(); ++step) {
    const std::size_t c = dec.class_count() - 1 - step;
    std::vector<std::size_t> next_suffix = suffix;
    next_suffix.push_back(c);

    double rho = 0.0;
    for (auto k : next_suffix) rho = std::max(rho, dec.classes[k].rho);
    if (!(rho > 0.0)) {
      suffix = std::move(next_suffix);
      continue;
    }
    const int h = height_within(dec, next_suffix).height;
    if (h == 1) {
      suffix = std::move(next_suffix);
      h_prev = 1;
      lazy = true;
      continue;
    }

    materialize();
    const auto& d_members = dec.classes[c].members;
    const Matrix x = select(f, d_members, everyone);

    if (h == h_prev + 1) {
      // D_i extends every dominant chain of V_{i-1}.
      const Matrix y = block_extension_limit(class_residual(c), x, theta, rho);
      theta.setZero();
      place(theta, d_members, everyone, y);
    } else if (!same_radius(dec.classes[c].rho, rho)) {
      // D_i is not basic; its growth matrix is finite at 1/rho.
      const auto k = static_cast<Eigen::Index>(d_members.size());
      const Matrix h_d = solve_checked(Matrix::Identity(k, k) - select(f, d_members, d_members) / rho,
                                       Matrix::Identity(k, k), "residual_matrix");
      const Matrix a = block_extension_limit(h_d, x, theta, rho);
      place(theta, d_members, everyone, a);
    } else {
      // D_i is basic but starts no dominant chain of V_i. Only the part of
      // V_{i-1} reachable from D_i carries the rows of D_i: it is closed
      // under access, so its growth matrix is a diagonal block of that of
      // V_{i-1}. Its height is at most h - 1, and below that the limit is 0.
      std::vector<std::size_t> below_classes;
      for (auto k : suffix)
        if (dec.class_accessible(c, k)) below_classes.push_back(k);
      const VertexSet below = members_of(dec, below_classes);
      double rho_below = 0.0;
      for (auto k : below_classes) rho_below = std::max(rho_below, dec.classes[k].rho);
      if (rho_below > 0.0 && same_radius(rho_below, rho) && height_within(dec, below_classes).height == h - 1) {
        const auto sub = residual_recursive(g.induced(below), sub_origin(below), memo);
        const Matrix y = block_extension_limit(class_residual(c), select(f, d_members, below), sub.theta, rho);
        place(theta, d_members, below, y);
      }
    }
    suffix = std::move(next_suffix);
    h_prev = h;
  }

  ResidualResult result;
  if (lazy) {
    result = residual_umbrella(g);
  } else {
    result.height = h_prev;
    result.theta = theta;
    result.support = support_of(theta);
  }
  memo.emplace(key, result);
  return result;
}

}  // namespace

ResidualResult residual_matrix(const WeightedDigraph& g) {
  Memo memo;
  return residual_recursive(g, all_vertices(g.size()), memo);
}

BoolMatrix theta_support_predicate(const ClassDecomposition& dec, const HeightReport& report) {
  const auto n = static_cast<Eigen::Index>(dec.class_of.size());
  BoolMatrix out = BoolMatrix::Constant(n, n, false);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y)
      for (const auto& chain : report.dominant_chains)
        if (dec.class_accessible(dec.class_of[static_cast<std::size_t>(x)], chain.front()) &&
            dec.class_accessible(chain.back(), dec.class_of[static_cast<std::size_t>(y)])) {
          out(x, y) = true;
          break;
        }
  return out;
}

}  // namespace pathlim
