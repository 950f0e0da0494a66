#include "pathlim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "pathlim/error.hpp"

namespace pathlim {

namespace {

Matrix block_of(const WeightedDigraph& g, std::span<const std::size_t> rows,
                std::span<const std::size_t> cols) {
  Matrix b(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g.weight(rows[i], cols[j]);
  return b;
}

struct PowerResult {
  double rho;     // of the unshifted matrix
  Vector vector;  // unit max entry
};

// Power iteration for the Perron root of an irreducible nonnegative matrix.
// The shift makes the iterated matrix primitive; the Collatz-Wielandt ratios
// min/max of (Av)_i / v_i enclose its Perron root at every step.
PowerResult shifted_power_iteration(const Matrix& b, const PowerIterationOptions& opts) {
  const Eigen::Index n = b.rows();
  const double shift = b.rowwise().sum().maxCoeff();
  if (shift <= 0.0) return {0.0, Vector::Ones(n)};
  const Matrix a = b + shift * Matrix::Identity(n, n);

  Vector v = Vector::Ones(n);
  double lo = 0.0, hi = 0.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    Vector w = a * v;
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ratio = w(i) / v(i);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    v = w / w.maxCoeff();
    if (hi - lo <= opts.tolerance * hi) return {0.5 * (lo + hi) - shift, v};
  }
  std::ostringstream msg;
  msg << "power iteration did not converge after " << opts.max_iterations
      << " iterations (residual bracket " << (hi - lo) << ")";
  throw numeric_error(msg.str());
}

}  // namespace

double spectral_radius_class(const WeightedDigraph& g, std::span<const std::size_t> cls,
                             const PowerIterationOptions& opts) {
  if (cls.empty()) return 0.0;
  if (cls.size() == 1) return g.weight(cls[0], cls[0]);
  return shifted_power_iteration(block_of(g, cls, cls), opts).rho;
}

PeriodData period_class(const WeightedDigraph& g, std::span<const std::size_t> cls) {
  PeriodData out;
  if (cls.empty()) return out;
  const std::size_t m = cls.size();
  std::vector<long> level(m, -1);
  level[0] = 0;
  std::deque<std::size_t> queue{0};
  long d = 0;
  bool any_edge = false;
  while (!queue.empty()) {
    const auto i = queue.front();
    queue.pop_front();
    for (std::size_t j = 0; j < m; ++j) {
      if (!g.has_edge(cls[i], cls[j])) continue;
      any_edge = true;
      if (level[j] < 0) {
        level[j] = level[i] + 1;
        queue.push_back(j);
      } else {
        d = std::gcd(d, std::labs(level[i] + 1 - level[j]));
      }
    }
  }
  if (!any_edge) return out;
  if (std::any_of(level.begin(), level.end(), [](long l) { return l < 0; }))
    throw precondition_error("period_class: vertex set is not strongly connected");

  out.period = static_cast<int>(d);
  out.periodic_classes.assign(static_cast<std::size_t>(d), {});
  for (std::size_t i = 0; i < m; ++i)
    out.periodic_classes[static_cast<std::size_t>(level[i] % d)].push_back(cls[i]);
  return out;
}

PerronPair perron_pair(const WeightedDigraph& g, std::span<const std::size_t> cls,
                       const PowerIterationOptions& opts) {
  if (cls.empty()) throw precondition_error("perron_pair: empty class");
  const Matrix b = block_of(g, cls, cls);
  auto right = shifted_power_iteration(b, opts);
  if (right.rho <= 0.0) throw degenerate_error("perron_pair: class has zero spectral radius");
  auto left = shifted_power_iteration(b.transpose(), opts);
  PerronPair p;
  p.rho = right.rho;
  p.right = right.vector;
  p.left = left.vector / left.vector.dot(right.vector);
  return p;
}

PerronPair aggregated_base_pair(const WeightedDigraph& g, std::span<const std::size_t> cls,
                                const PeriodData& period, const PowerIterationOptions& opts) {
  if (period.period < 1 || period.periodic_classes.empty())
    throw precondition_error("aggregated_base_pair: class has no period");
  const auto& c0 = period.periodic_classes.front();
  Matrix f = block_of(g, cls, cls);
  Matrix fd = Matrix::Identity(f.rows(), f.cols());
  for (int i = 0; i < period.period; ++i) fd = fd * f;
  std::vector<std::size_t> pos;
  for (auto v : c0) pos.push_back(static_cast<std::size_t>(std::find(cls.begin(), cls.end(), v) - cls.begin()));
  std::vector<std::string> names;
  for (auto v : c0) names.push_back(g.name(v));
  const auto k = static_cast<Eigen::Index>(c0.size());
  Matrix s0(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      s0(i, j) = fd(static_cast<Eigen::Index>(pos[static_cast<std::size_t>(i)]),
                    static_cast<Eigen::Index>(pos[static_cast<std::size_t>(j)]));
  WeightedDigraph aggregated(std::move(names), std::move(s0));
  std::vector<std::size_t> all(c0.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return perron_pair(aggregated, all, opts);
}

std::vector<PerronPair> transported_pairs(const WeightedDigraph& g, std::span<const std::size_t> cls,
                                          const PeriodData& period, const PerronPair& base) {
  const int d = period.period;
  if (d < 1 || period.periodic_classes.size() != static_cast<std::size_t>(d))
    throw precondition_error("transported_pairs: inconsistent period data");
  std::size_t covered = 0;
  for (const auto& c : period.periodic_classes) {
    if (c.empty()) throw precondition_error("transported_pairs: empty periodic class");
    covered += c.size();
    for (auto v : c)
      if (std::find(cls.begin(), cls.end(), v) == cls.end())
        throw precondition_error("transported_pairs: periodic class leaves the class");
  }
  if (covered != cls.size()) throw precondition_error("transported_pairs: periodic classes do not partition the class");
  const auto& c0 = period.periodic_classes.front();
  if (base.left.size() != static_cast<Eigen::Index>(c0.size()) ||
      base.right.size() != static_cast<Eigen::Index>(c0.size()))
    throw precondition_error("transported_pairs: base pair does not match C_0");

  const double rho = std::pow(base.rho, 1.0 / d);
  auto q = [&](int j) {
    const auto& from = period.periodic_classes[static_cast<std::size_t>(j)];
    const auto& to = period.periodic_classes[static_cast<std::size_t>((j + 1) % d)];
    return block_of(g, from, to);
  };

  std::vector<PerronPair> pairs(static_cast<std::size_t>(d));
  pairs[0] = base;
  for (int i = 1; i < d; ++i) {
    auto& p = pairs[static_cast<std::size_t>(i)];
    p.rho = base.rho;
    p.left = (pairs[static_cast<std::size_t>(i - 1)].left.transpose() * q(i - 1)).transpose() / rho;
  }
  // right_d stands for right_0.
  Vector next = base.right;
  for (int i = d - 1; i >= 1; --i) {
    pairs[static_cast<std::size_t>(i)].right = q(i) * next / rho;
    next = pairs[static_cast<std::size_t>(i)].right;
  }
  return pairs;
}

double spectral_radius_bound(const Matrix& r, int max_squarings) {
  auto norm_inf = [](const Matrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); };
  if (r.size() == 0) return 0.0;
  Matrix p = r;
  double best = norm_inf(p);
  double power = 1.0;
  for (int m = 1; m <= max_squarings; ++m) {
    p = p * p;
    power *= 2.0;
    const double nrm = norm_inf(p);
    if (nrm == 0.0) return 0.0;
    best = std::min(best, std::pow(nrm, 1.0 / power));
    // keep the iterate representable
    if (!std::isfinite(nrm) || nrm > 1e200) break;
    if (nrm < 1e-200) break;
  }
  return best;
}

}  // namespace pathlim
