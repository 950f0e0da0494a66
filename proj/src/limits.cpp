#include "pathlim/limits.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "pathlim/error.hpp"
#include "pathlim/io.hpp"
#include "pathlim/residual.hpp"
#include "pathlim/spectral.hpp"
#include "pathlim/structure.hpp"

namespace pathlim {

std::optional<std::size_t> CocycleKernel::local(std::size_t vertex) const {
  auto it = std::lower_bound(support.begin(), support.end(), vertex);
  if (it == support.end() || *it != vertex) return std::nullopt;
  return static_cast<std::size_t>(it - support.begin());
}

namespace {

std::size_t position_in(const VertexSet& set, std::size_t v) {
  return static_cast<std::size_t>(std::lower_bound(set.begin(), set.end(), v) - set.begin());
}

void require_path_from(const WeightedDigraph& g, std::size_t x, const Path& u) {
  if (x >= g.size()) throw input_error("unknown vertex index");
  if (!is_valid_path(g, u)) throw input_error("invalid path: consecutive vertices must be edges");
  if (u.initial() != x) throw input_error("path does not start at " + g.name(x));
}

// Kernel over `support` from a positive vector h on it: Gamma(x,y) = h_y / h_x.
CocycleKernel kernel_from_harmonic(const WeightedDigraph& g, const VertexSet& support, const Vector& h,
                                   double rho) {
  const auto sub = g.induced(support);
  const auto dec = access_classes(sub);
  const auto m = static_cast<Eigen::Index>(support.size());
  CocycleKernel k;
  k.support = support;
  k.rho = rho;
  k.gamma = Matrix::Zero(m, m);
  k.q = Matrix::Zero(m, m);
  k.accessible = BoolMatrix::Constant(m, m, false);
  for (Eigen::Index x = 0; x < m; ++x)
    for (Eigen::Index y = 0; y < m; ++y) {
      if (!dec.accessible(static_cast<std::size_t>(x), static_cast<std::size_t>(y))) continue;
      k.accessible(x, y) = true;
      k.gamma(x, y) = h(y) / h(x);
      k.q(x, y) = sub.weight(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) * k.gamma(x, y) / rho;
    }
  return k;
}

}  // namespace

double boltzmann_cylinder(const WeightedDigraph& g, std::size_t x, double s, const Path& u) {
  require_path_from(g, x, u);
  const auto dec = analyze(g);
  const auto reach = reachable(g, dec, x);
  if (!(s > 0.0) || (reach.gamma > 0.0 && s * reach.gamma >= 1.0)) {
    std::ostringstream msg;
    msg << "boltzmann_cylinder: s = " << s << " is outside (0, 1/gamma) with gamma = " << reach.gamma;
    throw precondition_error(msg.str());
  }
  const Vector big_g = growth_eval(reach.graph, s).row_sums();
  const double g_final = big_g(static_cast<Eigen::Index>(position_in(reach.vertices, u.final())));
  const double g_x = big_g(static_cast<Eigen::Index>(position_in(reach.vertices, x)));
  return path_weight(g, u) * std::pow(s, static_cast<double>(u.length())) * g_final / g_x;
}

double uniform_cylinder(const WeightedDigraph& g, std::size_t x, std::size_t k, const Path& u) {
  require_path_from(g, x, u);
  if (u.length() > k) throw precondition_error("uniform_cylinder: cylinder longer than k");
  const auto table = z_table(g, k);
  const double z_x = table.z(x, k);
  if (!(z_x > 0.0)) throw precondition_error("no path of length " + std::to_string(k) + " from " + g.name(x));
  return path_weight(g, u) * table.z(u.final(), k - u.length()) / z_x;
}

double boltzmann_limit_cylinder(const WeightedDigraph& g, std::size_t x0, const Path& u) {
  require_path_from(g, x0, u);
  const auto dec = analyze(g);
  const auto reach = reachable(g, dec, x0);
  if (!(reach.gamma > 0.0)) throw degenerate_error("no infinite paths from " + g.name(x0));
  const auto spanned = umbrella_spanned(g, dec, x0);
  if (!std::binary_search(spanned.begin(), spanned.end(), u.final())) return 0.0;

  const auto theta = residual_matrix(reach.graph).theta;
  const Vector mass = theta.rowwise().sum();
  const double m_final = mass(static_cast<Eigen::Index>(position_in(reach.vertices, u.final())));
  const double m_x = mass(static_cast<Eigen::Index>(position_in(reach.vertices, x0)));
  return std::pow(reach.gamma, -static_cast<double>(u.length())) * path_weight(g, u) * m_final / m_x;
}

CocycleKernel limit_kernel(const WeightedDigraph& g, std::size_t x0) {
  if (x0 >= g.size()) throw input_error("unknown vertex index");
  const auto dec = analyze(g);
  const auto support = umbrella_spanned(g, dec, x0);
  const auto sub = g.induced(support);
  const auto theta = residual_umbrella(sub).theta;
  return kernel_from_harmonic(g, support, theta.rowwise().sum(), spectral_radius(sub));
}

ConvergenceReport uniform_convergence(const WeightedDigraph& g, std::size_t x0,
                                      std::optional<int> max_cylinder_length) {
  if (x0 >= g.size()) throw input_error("unknown vertex index");
  const auto dec = analyze(g);
  ConvergenceReport report;
  report.origin = x0;
  report.support = umbrella_spanned(g, dec, x0);
  const auto sub = g.induced(report.support);
  const auto sub_dec = analyze(sub);
  const double rho = sub_dec.rho;

  report.d = aggregation_period(sub_dec);
  report.aperiodic = report.d == 1;
  report.max_cylinder_length = max_cylinder_length.value_or(2 * report.d);
  if (report.max_cylinder_length < 0) throw precondition_error("uniform_convergence: negative cylinder length");

  const auto pd = periodic_decomposition(sub, report.d);
  const auto m = static_cast<Eigen::Index>(report.support.size());
  report.betas.resize(m, report.d);
  {
    Vector v = pd.projector * Vector::Ones(m);
    for (int i = 0; i < report.d; ++i) {
      report.betas.col(i) = v;
      v = sub.adjacency() * v / rho;
    }
  }

  const auto start = position_in(report.support, x0);
  constexpr std::size_t max_cylinders = 100000;
  Path local{{start}};
  std::function<void()> walk = [&]() {
    if (local.length() >= 1) {
      CylinderLimits entry;
      for (auto v : local.vertices) entry.cylinder.vertices.push_back(report.support[v]);
      const double w = path_weight(sub, local);
      const int len = static_cast<int>(local.length());
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (int i = 0; i < report.d; ++i) {
        const int j = ((i - len) % report.d + report.d) % report.d;
        const double value = std::pow(rho, -len) * w *
                             report.betas(static_cast<Eigen::Index>(local.final()), j) /
                             report.betas(static_cast<Eigen::Index>(start), i);
        entry.limits.push_back(value);
        lo = std::min(lo, value);
        hi = std::max(hi, value);
      }
      entry.agree = hi - lo <= 1e-10 * std::max(1.0, std::abs(hi));
      if (!entry.agree && !report.witness) report.witness = entry.cylinder;
      report.residue_limits.push_back(std::move(entry));
      if (report.residue_limits.size() > max_cylinders)
        throw precondition_error("uniform_convergence: too many cylinders; lower the maximum length");
    }
    if (static_cast<int>(local.length()) >= report.max_cylinder_length) return;
    for (auto y : sub.successors(local.final())) {
      local.vertices.push_back(y);
      walk();
      local.vertices.pop_back();
    }
  };
  walk();

  report.converges = report.aperiodic || !report.witness.has_value();
  return report;
}

ValidationReport validate_cocycle_measure(const WeightedDigraph& g, const CocycleKernel& kernel) {
  ValidationReport report;
  const auto m = static_cast<Eigen::Index>(kernel.support.size());
  auto name = [&](Eigen::Index i) { return g.name(kernel.support[static_cast<std::size_t>(i)]); };

  for (Eigen::Index x = 0; x < m; ++x) {
    const double sum = kernel.q.row(x).sum();
    if (std::abs(sum - 1.0) > 1e-12) {
      report.row_stochastic = false;
      report.violations.push_back("row " + name(x) + " sums to " + format_number(sum));
    }
  }
  for (Eigen::Index x = 0; x < m; ++x)
    for (Eigen::Index y = 0; y < m; ++y) {
      if (!kernel.accessible(x, y)) continue;
      if (!(kernel.gamma(x, y) > 0.0)) {
        report.complete = false;
        report.violations.push_back("Gamma(" + name(x) + "," + name(y) + ") is not positive");
      }
      const double w = g.weight(kernel.support[static_cast<std::size_t>(x)], kernel.support[static_cast<std::size_t>(y)]);
      const double expected = w * kernel.gamma(x, y) / kernel.rho;
      if (std::abs(kernel.q(x, y) - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
        report.consistent = false;
        report.violations.push_back("q(" + name(x) + "," + name(y) + ") differs from w Gamma / rho");
      }
      for (Eigen::Index z = 0; z < m; ++z) {
        if (!kernel.accessible(y, z)) continue;
        const double lhs = kernel.gamma(x, z);
        const double rhs = kernel.gamma(x, y) * kernel.gamma(y, z);
        if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, std::abs(lhs))) {
          report.multiplicative = false;
          report.violations.push_back("Gamma(" + name(x) + "," + name(z) + ") != Gamma(" + name(x) + "," +
                                      name(y) + ") Gamma(" + name(y) + "," + name(z) + ")");
        }
      }
    }
  for (Eigen::Index x = 0; x < m; ++x)
    for (Eigen::Index y = 0; y < m; ++y)
      if (!kernel.accessible(x, y) && kernel.q(x, y) != 0.0) {
        report.consistent = false;
        report.violations.push_back("q(" + name(x) + "," + name(y) + ") is positive on an inaccessible pair");
      }
  return report;
}

Vector positive_eigenvector(const WeightedDigraph& g, std::span<const double> alphas) {
  const auto dec = analyze(g);
  if (dec.degenerate()) throw degenerate_error("digraph has spectral radius 0");
  if (!is_umbrella(dec))
    throw precondition_error("not an umbrella digraph: no complete cocycle measure exists");
  const auto bases = eigenvector_bases(g, dec);
  if (alphas.size() != bases.right.size())
    throw precondition_error("expected " + std::to_string(bases.right.size()) + " weights, one per basic class");
  double total = 0.0;
  for (double a : alphas) {
    if (!(a > 0.0)) throw precondition_error("simplex weights must be positive");
    total += a;
  }
  Vector r = Vector::Zero(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < alphas.size(); ++i) r += (alphas[i] / total) * bases.right[i];
  if (!(r.minCoeff() > 0.0)) throw numeric_error("eigenvector combination is not strictly positive");
  return r;
}

CocycleKernel cocycle_from_alpha(const WeightedDigraph& g, std::span<const double> alphas) {
  const Vector r = positive_eigenvector(g, alphas);
  VertexSet all(g.size());
  for (std::size_t v = 0; v < all.size(); ++v) all[v] = v;
  return kernel_from_harmonic(g, all, r, spectral_radius(g));
}

}  // namespace pathlim
