#include "pathlim/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "pathlim/error.hpp"
#include "pathlim/io.hpp"
#include "pathlim/residual.hpp"
#include "pathlim/structure.hpp"

namespace pathlim {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// Index i drawn with probability weights[i] / total. Rounding may leave u past
// the last cumulative sum; the last positive weight absorbs it.
template <class Weights>
std::size_t choose(const Weights& weights, std::size_t n, double total, Rng& rng) {
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights(i);
    if (!(w > 0.0)) continue;
    acc += w;
    last = i;
    if (u < acc) return i;
  }
  return last;
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& word : s_) word = splitmix64(seed);
}

Rng::result_type Rng::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

UniformSampler::UniformSampler(const WeightedDigraph& g, std::size_t x, std::size_t k)
    : g_(&g), x_(x), k_(k), table_(z_table(g, k)) {
  if (x >= g.size()) throw input_error("unknown vertex index");
  if (!(table_.z(x, k) > 0.0))
    throw precondition_error("no path of length " + std::to_string(k) + " from " + g.name(x));
}

Path UniformSampler::operator()(Rng& rng) const {
  Path u{{x_}};
  u.vertices.reserve(k_ + 1);
  for (std::size_t m = k_; m > 0; --m) {
    const std::size_t v = u.final();
    auto weight = [&](std::size_t y) { return g_->weight(v, y) * table_.z(y, m - 1); };
    u.vertices.push_back(choose(weight, g_->size(), table_.z(v, m), rng));
  }
  return u;
}

BoltzmannSampler::BoltzmannSampler(const WeightedDigraph& g, std::size_t x, double s) : g_(&g), x_(x), s_(s) {
  if (x >= g.size()) throw input_error("unknown vertex index");
  const auto reach = reachable(g, x);
  if (!(s > 0.0) || (reach.gamma > 0.0 && s * reach.gamma >= 1.0))
    throw precondition_error("boltzmann parameter s = " + format_number(s) + " is outside (0, 1/gamma(" +
                             g.name(x) + "))");
  const Vector local = growth_eval(reach.graph, s).row_sums();
  big_g_ = Vector::Zero(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < reach.vertices.size(); ++i)
    big_g_(static_cast<Eigen::Index>(reach.vertices[i])) = local(static_cast<Eigen::Index>(i));
}

Path BoltzmannSampler::operator()(Rng& rng) const {
  Path u{{x_}};
  for (;;) {
    const std::size_t v = u.final();
    const double gv = big_g_(static_cast<Eigen::Index>(v));
    // Outcome g.size() means halting, with weight 1.
    auto weight = [&](std::size_t y) {
      if (y == g_->size()) return 1.0;
      return s_ * g_->weight(v, y) * big_g_(static_cast<Eigen::Index>(y));
    };
    const std::size_t next = choose(weight, g_->size() + 1, gv, rng);
    if (next == g_->size()) return u;
    u.vertices.push_back(next);
  }
}

Path sample_uniform(const WeightedDigraph& g, std::size_t x, std::size_t k, Rng& rng) {
  return UniformSampler(g, x, k)(rng);
}

Path sample_boltzmann(const WeightedDigraph& g, std::size_t x, double s, Rng& rng) {
  return BoltzmannSampler(g, x, s)(rng);
}

Path sample_limit_walk(const WeightedDigraph& g, const CocycleKernel& kernel, std::size_t x, std::size_t n,
                       Rng& rng) {
  auto at = kernel.local(x);
  if (!at) throw precondition_error("vertex " + g.name(x) + " is outside the kernel support");
  const auto m = kernel.support.size();
  Path u{{x}};
  u.vertices.reserve(n + 1);
  for (std::size_t step = 0; step < n; ++step) {
    const auto row = kernel.q.row(static_cast<Eigen::Index>(*at));
    auto weight = [&](std::size_t j) { return row(static_cast<Eigen::Index>(j)); };
    const std::size_t j = choose(weight, m, row.sum(), rng);
    if (j == m) throw numeric_error("kernel row of " + g.name(x) + " has no mass");
    *at = j;
    u.vertices.push_back(kernel.support[j]);
  }
  return u;
}

double empirical_cylinder(std::span<const Path> samples, const Path& u) {
  if (samples.empty()) return 0.0;
  const auto hits = std::count_if(samples.begin(), samples.end(), [&](const Path& p) { return u.is_prefix_of(p); });
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

SamplerMode parse_sampler_mode(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw input_error("sampler mode must look like uniform:K, boltzmann:S or walk:N");
  const auto kind = text.substr(0, colon);
  const auto arg = text.substr(colon + 1);
  auto parse_count = [&]() {
    std::size_t value = 0;
    auto [end, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
    if (ec != std::errc{} || end != arg.data() + arg.size() || arg.empty())
      throw input_error("bad length in sampler mode: " + std::string(arg));
    return value;
  };
  if (kind == "uniform") return UniformMode{parse_count()};
  if (kind == "walk") return WalkMode{parse_count()};
  if (kind == "boltzmann") {
    double s = 0.0;
    auto [end, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), s);
    if (ec != std::errc{} || end != arg.data() + arg.size() || arg.empty() || !std::isfinite(s))
      throw input_error("bad parameter in sampler mode: " + std::string(arg));
    return BoltzmannMode{s};
  }
  throw input_error("unknown sampler mode: " + std::string(kind));
}

std::vector<Path> run_sampler(const WeightedDigraph& g, std::size_t x, const SamplerConfig& config) {
  Rng rng(config.seed);
  std::vector<Path> out;
  out.reserve(config.count);
  auto draw = [&](const auto& sampler) {
    for (std::size_t i = 0; i < config.count; ++i) out.push_back(sampler(rng));
  };
  if (auto* m = std::get_if<UniformMode>(&config.mode)) {
    draw(UniformSampler(g, x, m->k));
  } else if (auto* b = std::get_if<BoltzmannMode>(&config.mode)) {
    draw(BoltzmannSampler(g, x, b->s));
  } else {
    const auto n = std::get<WalkMode>(config.mode).n;
    const auto kernel = limit_kernel(g, x);
    draw([&](Rng& r) { return sample_limit_walk(g, kernel, x, n, r); });
  }
  return out;
}

std::string dump_samples(const WeightedDigraph& g, std::span<const Path> samples) {
  std::string out;
  for (const auto& p : samples) {
    out += format_path(g, p);
    out += '\n';
  }
  return out;
}

}  // namespace pathlim
