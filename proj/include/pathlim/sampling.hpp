#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pathlim/graph.hpp"
#include "pathlim/limits.hpp"

namespace pathlim {

/// xoshiro256** seeded through splitmix64. Satisfies
/// UniformRandomBitGenerator so it also plugs into <random> distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  std::array<std::uint64_t, 4> s_;
};

/// Draws paths of length k from x, uniformly with respect to path weight.
class UniformSampler {
 public:
  UniformSampler(const WeightedDigraph& g, std::size_t x, std::size_t k);
  Path operator()(Rng& rng) const;

 private:
  const WeightedDigraph* g_;
  std::size_t x_, k_;
  ZTable table_;
};

/// Draws finite paths from x with probability w(u) s^|u| / G_x(s).
class BoltzmannSampler {
 public:
  BoltzmannSampler(const WeightedDigraph& g, std::size_t x, double s);
  Path operator()(Rng& rng) const;

 private:
  const WeightedDigraph* g_;
  std::size_t x_;
  double s_;
  Vector big_g_;  // G_v(s) over all of g; zero outside V(x)
};

Path sample_uniform(const WeightedDigraph& g, std::size_t x, std::size_t k, Rng& rng);
Path sample_boltzmann(const WeightedDigraph& g, std::size_t x, double s, Rng& rng);
/// n steps of the Markov chain with kernel q started at x.
Path sample_limit_walk(const WeightedDigraph& g, const CocycleKernel& kernel, std::size_t x, std::size_t n,
                       Rng& rng);

/// Fraction of samples having u as a prefix; 0 for an empty sample list.
double empirical_cylinder(std::span<const Path> samples, const Path& u);

struct UniformMode {
  std::size_t k = 0;
};
struct BoltzmannMode {
  double s = 0.0;
};
struct WalkMode {
  std::size_t n = 0;
};
using SamplerMode = std::variant<UniformMode, BoltzmannMode, WalkMode>;

/// Parses `uniform:K`, `boltzmann:S` or `walk:N`.
SamplerMode parse_sampler_mode(std::string_view text);

struct SamplerConfig {
  std::uint64_t seed = 0;
  SamplerMode mode;
  std::size_t count = 1;
};

std::vector<Path> run_sampler(const WeightedDigraph& g, std::size_t x, const SamplerConfig& config);
/// One path per line, space-separated vertex tokens.
std::string dump_samples(const WeightedDigraph& g, std::span<const Path> samples);

}  // namespace pathlim
