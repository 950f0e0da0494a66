// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "pathlim/error.hpp"
#include "pathlim/limits.hpp"
#include "pathlim/oracle.hpp"
#include "pathlim/residual.hpp"
#include "pathlim/sampling.hpp"
#include "pathlim/structure.hpp"
#include "support.hpp"

using namespace pathlim;
using pathlim::testing::corpus;
using pathlim::testing::fixture;
using pathlim::testing::max_abs;
using pathlim::testing::path_of;

namespace {

// Collects the first failure of a criterion and a count of the checks made.
struct Outcome {
  std::size_t checks = 0;
  std::string failure;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failure.empty()) failure = what;
  }
  bool ok() const { return failure.empty(); }
};

std::string seed_text(std::uint64_t seed) { return "seed " + std::to_string(seed); }

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

bool within_band(double freq, double p, std::size_t n) {
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
  return std::abs(freq - p) <= 4 * sigma + 1.0 / static_cast<double>(n);
}

// 1. Residual matrices of the fixtures, against hand values (1e-6) and the
//    numeric limit oracle (1e-4).
void residual_fixtures(Outcome& o) {
  std::map<int, std::pair<int, Matrix>> expected{
      {1, {1, Matrix::Ones(1, 1)}},
      {2, {1, mat2(0, 1, 0, 1)}},
      {3, {2, mat2(0, 1, 0, 0)}},
      {5, {1, mat2(0.5, 0.5, 0.5, 0.5)}},
  };
  for (int i = 1; i <= 5; ++i) {
    const auto g = fixture(i);
    const auto r = residual_matrix(g);
    const std::string name = "G" + std::to_string(i);
    if (auto it = expected.find(i); it != expected.end()) {
      o.expect(r.height == it->second.first, name + " height");
      o.expect(max_abs(r.theta - it->second.second) <= 1e-6, name + " theta");
    } else {
      o.expect(r.height == 1, name + " height");
      o.expect(max_abs(r.theta.col(0)) <= 1e-6, name + " column a");
      o.expect(std::abs(r.theta(1, 1) - 0.5) <= 1e-6 && std::abs(r.theta(2, 2) - 0.5) <= 1e-6, name + " diagonal");
    }
    const auto numeric = oracle::numeric_residual(g, r.height);
    o.expect(max_abs(numeric.theta - r.theta) <= 1e-4, name + " numeric limit gap");
  }
}

// 2. Recursive residual against the direct umbrella and strongly connected
//    formulas on the corpus, 1e-9.
void cross_method(Outcome& o) {
  for (const auto& [seed, g] : corpus()) {
    const auto dec = analyze(g);
    const auto r = residual_matrix(g);
    if (is_umbrella(dec)) o.expect(max_abs(r.theta - residual_umbrella(g).theta) <= 1e-9, seed_text(seed) + " umbrella");
    if (dec.class_count() == 1)
      o.expect(max_abs(r.theta - residual_strongly_connected(g).theta) <= 1e-9, seed_text(seed) + " strongly connected");
  }
}

// 3. Numeric support equals the dominant-chain predicate exactly.
void support_pattern(Outcome& o) {
  o.expect(corpus().size() == 200, "corpus size");
  for (const auto& [seed, g] : corpus()) {
    const auto dec = analyze(g);
    o.expect(residual_matrix(g).support == theta_support_predicate(dec, height(dec)), seed_text(seed));
  }
}

// 4. Height equals the index of rho for the oracle's kernel chain, exact.
void height_index(Outcome& o) {
  for (const auto& [seed, g] : corpus()) {
    if (g.size() > 6) continue;
    const int h = height(analyze(g)).height;
    const int index = oracle::generalized_eigenspace_dim(g.adjacency(), oracle::spectral_radius(g));
    o.expect(h == index, seed_text(seed) + ": height " + std::to_string(h) + " vs " + std::to_string(index));
  }
}

// 5. Umbrella iff a strictly positive eigenvector comes out of the simplex
//    parameterization, with eigen-residual below 1e-8 ||r||.
void positive_eigenvectors(Outcome& o) {
  Rng rng(20240611);
  for (const auto& [seed, g] : corpus()) {
    const auto dec = analyze(g);
    const bool umbrella = is_umbrella(dec);
    std::vector<double> alphas(dec.basic_classes().size());
    for (auto& a : alphas) a = 0.05 + rng.uniform();
    bool succeeded = false;
    try {
      const auto kernel = cocycle_from_alpha(g, alphas);
      const Vector r = positive_eigenvector(g, alphas);
      const double residual = (g.adjacency() * r - dec.rho * r).cwiseAbs().maxCoeff();
      succeeded = r.minCoeff() > 0.0 && residual <= 1e-8 * r.cwiseAbs().maxCoeff() && kernel.q.rows() > 0;
    } catch (const Error&) {
      succeeded = false;
    }
    o.expect(umbrella == succeeded, seed_text(seed));
  }
  const auto g3 = fixture(3);
  o.expect(oracle::has_positive_eigenvector(g3.adjacency(), 1.0) == std::optional<bool>(false),
           "G3 has a positive eigenvector");
}

// 6. Limit kernels: stochastic rows (1e-12), multiplicative cocycle (1e-10),
//    and the G2 kernel exactly.
void limit_kernels(Outcome& o) {
  for (const auto& [seed, g] : corpus()) {
    const auto dec = analyze(g);
    for (std::size_t x = 0; x < g.size(); ++x) {
      if (!(reachable(g, dec, x).gamma > 0.0)) continue;
      const auto report = validate_cocycle_measure(g, limit_kernel(g, x));
      o.expect(report.row_stochastic && report.multiplicative && report.complete,
               seed_text(seed) + " x=" + std::to_string(x));
    }
  }
  o.expect(max_abs(limit_kernel(fixture(2), 0).q - mat2(0.5, 0.5, 0, 1)) <= 1e-12, "G2 kernel");
}

// 7. Convergence verdicts and the G4 residue limits against exact cylinders.
void convergence(Outcome& o) {
  o.expect(uniform_convergence(fixture(2), 0).converges, "G2 converges");
  o.expect(uniform_convergence(fixture(5), 0).converges, "G5 converges");
  const auto g4 = fixture(4);
  const auto report = uniform_convergence(g4, 0);
  o.expect(!report.converges, "G4 diverges");
  const auto u = path_of(g4, {"a", "b"});
  o.expect(report.witness == u, "G4 witness is (a, b)");
  const auto& c = report.residue_limits.front();
  o.expect(c.cylinder == u && std::abs(c.limits[0] - 2.0 / 3.0) <= 1e-10 && std::abs(c.limits[1] - 0.5) <= 1e-10,
           "G4 residue limits");
  for (std::size_t k = 1; k <= 8; ++k)
    o.expect(uniform_cylinder(g4, 0, k, u) == (k % 2 == 0 ? 2.0 / 3.0 : 0.5), "G4 k=" + std::to_string(k));
}

// 8. Finite distributions approach the limit: exact uniform cylinders on G2,
//    monotone Boltzmann gaps.
void distribution_limits(Outcome& o) {
  const auto g2 = fixture(2);
  const auto kernel = limit_kernel(g2, 0);
  const auto aa = path_of(g2, {"a", "a"});
  for (std::size_t k = 1; k <= 30; ++k) o.expect(uniform_cylinder(g2, 0, k, aa) == 0.5, "k=" + std::to_string(k));
  o.expect(std::abs(kernel.q(0, 0) - 0.5) <= 1e-12, "kernel q(a,a)");
  o.expect(std::abs(boltzmann_limit_cylinder(g2, 0, aa) - 0.5) <= 1e-12, "Boltzmann limit of (a,a)");
  for (const auto& u : {aa, path_of(g2, {"a", "b"}), path_of(g2, {"a", "a", "b"})}) {
    const double limit = boltzmann_limit_cylinder(g2, 0, u);
    double previous = std::numeric_limits<double>::infinity();
    for (int j = 2; j <= 5; ++j) {
      const double gap = std::abs(boltzmann_cylinder(g2, 0, (1 - std::pow(10.0, -j)) / 2, u) - limit);
      o.expect(gap < previous, format_path(g2, u) + " j=" + std::to_string(j));
      previous = gap;
    }
  }
}

// 9. Sampler frequencies within 4 sigma binomial bands and reproducible dumps.
void samplers(Outcome& o) {
  const std::size_t n = 200000;
  for (int i = 1; i <= 5; ++i) {
    const auto g = fixture(i);
    const std::string name = "G" + std::to_string(i);
    for (std::size_t k = 1; k <= 4; ++k) {
      SamplerConfig config{900 + 10 * static_cast<std::uint64_t>(i) + k, UniformMode{k}, n};
      std::map<Path, std::size_t> counts;
      for (const auto& p : run_sampler(g, 0, config)) ++counts[p];
      const auto paths = oracle::enumerate_paths(g, 0, k);
      double z = 0;
      for (const auto& p : paths) z += p.weight;
      for (const auto& p : paths)
        o.expect(within_band(static_cast<double>(counts[p.path]) / n, p.weight / z, n),
                 name + " uniform k=" + std::to_string(k) + " " + format_path(g, p.path));
    }

    const double s = 0.6 / spectral_radius(g);
    const auto boltzmann = run_sampler(g, 0, {700 + static_cast<std::uint64_t>(i), BoltzmannMode{s}, n});
    const auto walks = run_sampler(g, 0, {800 + static_cast<std::uint64_t>(i), WalkMode{3}, n});
    const auto kernel = limit_kernel(g, 0);
    for (std::size_t len = 1; len <= 3; ++len)
      for (const auto& p : oracle::enumerate_paths(g, 0, len)) {
        o.expect(within_band(empirical_cylinder(boltzmann, p.path), boltzmann_cylinder(g, 0, s, p.path), n),
                 name + " Boltzmann " + format_path(g, p.path));
        const auto at = kernel.local(p.path.final());
        const double expected = at ? std::pow(kernel.rho, -static_cast<double>(len)) * p.weight *
                                         kernel.gamma(static_cast<Eigen::Index>(*kernel.local(0)),
                                                      static_cast<Eigen::Index>(*at))
                                   : 0.0;
        o.expect(within_band(empirical_cylinder(walks, p.path), expected, n), name + " walk " + format_path(g, p.path));
      }
  }
  const auto g4 = fixture(4);
  for (const auto& mode : {SamplerMode{UniformMode{6}}, SamplerMode{BoltzmannMode{0.5}}, SamplerMode{WalkMode{6}}}) {
    const SamplerConfig config{31337, mode, 1000};
    o.expect(dump_samples(g4, run_sampler(g4, 0, config)) == dump_samples(g4, run_sampler(g4, 0, config)),
             "identical dumps");
  }
}

// 10. Spectral decomposition identities on umbrella corpus members, 1e-9
//     (relative to rho^d for the power identity).
void decomposition(Outcome& o) {
  for (const auto& [seed, g] : corpus()) {
    const auto dec = analyze(g);
    if (!is_umbrella(dec)) continue;
    const int d = aggregation_period(dec);
    const auto pd = periodic_decomposition(g, d);
    const Matrix& p = pd.projector;
    const Matrix& r = pd.remainder;
    Matrix fd = Matrix::Identity(p.rows(), p.cols());
    for (int i = 0; i < d; ++i) fd = fd * g.adjacency();
    const double scale = std::pow(pd.rho, d);
    const auto name = seed_text(seed);
    o.expect(max_abs(p * p - p) <= 1e-9, name + " idempotent");
    o.expect(max_abs(p * r) <= 1e-9 && max_abs(r * p) <= 1e-9, name + " annihilation");
    o.expect(max_abs(fd - scale * (p + r)) <= 1e-9 * std::max(1.0, scale), name + " power identity");
    o.expect(pd.remainder_radius < 1.0, name + " remainder radius");
    for (std::size_t i = 0; i < pd.left_basis.size(); ++i)
      for (std::size_t j = 0; j < pd.right_basis.size(); ++j)
        o.expect(std::abs(pd.left_basis[i].dot(pd.right_basis[j]) - (i == j ? 1.0 : 0.0)) <= 1e-9, name + " duality");
  }
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"residual matrices on fixtures", residual_fixtures},
      {"cross-method agreement", cross_method},
      {"support pattern", support_pattern},
      {"height equals index of rho", height_index},
      {"umbrella iff positive eigenvector", positive_eigenvectors},
      {"limit kernels", limit_kernels},
      {"convergence verdicts", convergence},
      {"distribution limits", distribution_limits},
      {"samplers", samplers},
      {"decomposition identities", decomposition},
  };
  int failed = 0;
  int id = 0;
  for (const auto& [name, run] : criteria) {
    ++id;
    Outcome o;
    try {
      run(o);
    } catch (const std::exception& e) {
      o.failure = std::string("exception: ") + e.what();
    }
    if (o.ok()) {
      std::printf("PASS %2d %s (%zu checks)\n", id, name, o.checks);
    } else {
      ++failed;
      std::printf("FAIL %2d %s: %s\n", id, name, o.failure.c_str());
    }
  }
  std::printf("%d of %d criteria passed\n", id - failed, id);
  return failed == 0 ? 0 : 1;
}
