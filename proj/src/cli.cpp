#include "pathlim/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pathlim/error.hpp"
#include "pathlim/graph.hpp"
#include "pathlim/io.hpp"
#include "pathlim/limits.hpp"
#include "pathlim/oracle.hpp"
#include "pathlim/residual.hpp"
#include "pathlim/sampling.hpp"
#include "pathlim/structure.hpp"

namespace pathlim {

namespace {

constexpr double kCheckTolerance = 1e-4;

std::string set_text(const WeightedDigraph& g, std::span<const std::size_t> vertices) {
  std::string out = "{";
  for (std::size_t i = 0; i < vertices.size(); ++i) out += (i ? "," : "") + g.name(vertices[i]);
  return out + "}";
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

int analyze(const std::string& file, const std::optional<std::string>& from, std::ostream& out) {
  const auto g = read_digraph_file(file);
  const auto dec = analyze(g);
  out << "vertices: " << g.size() << "\n";
  out << "classes: " << dec.classes.size() << "\n";
  for (std::size_t c = 0; c < dec.classes.size(); ++c) {
    const auto& cls = dec.classes[c];
    out << "class " << c << ": " << set_text(g, cls.members) << " rho=" << format_number(cls.rho)
        << " period=" << cls.period << " basic=" << yes_no(cls.basic) << " final=" << yes_no(cls.final) << "\n";
  }
  out << "rho: " << format_number(dec.rho) << "\n";
  if (dec.degenerate()) throw degenerate_error("digraph has spectral radius 0: no infinite paths");
  const auto report = height(dec);
  out << "height: " << report.height << "\n";
  for (const auto& chain : report.dominant_chains) {
    out << "dominant chain:";
    for (auto c : chain) out << " " << set_text(g, dec.classes[c].members);
    out << "\n";
  }
  out << "umbrella: " << yes_no(is_umbrella(dec)) << "\n";
  out << "augmented umbrella: " << yes_no(is_augmented_umbrella(dec)) << "\n";
  if (from) {
    const auto x = g.index_of(*from);
    const auto reach = reachable(g, dec, x);
    out << "gamma(" << *from << "): " << format_number(reach.gamma) << "\n";
    out << "V(" << *from << "): " << set_text(g, reach.vertices) << "\n";
    if (reach.gamma > 0.0) out << "U(" << *from << "): " << set_text(g, umbrella_spanned(g, dec, x)) << "\n";
  }
  return kExitOk;
}

ResidualResult residual_by(const WeightedDigraph& g, const std::string& method) {
  if (method == "recursive") return residual_matrix(g);
  if (method == "umbrella") return residual_umbrella(g);
  const auto dec = analyze(g);
  if (!dec.degenerate() && is_augmented_umbrella(dec)) return residual_umbrella(g);
  return residual_matrix(g);
}

// Largest entrywise gap between theta and the numeric oracle, extrapolated to
// the pole.
double check_gap(const WeightedDigraph& g, const ResidualResult& r) {
  const auto numeric = oracle::numeric_residual(g, r.height);
  return (numeric.extrapolated - r.theta).cwiseAbs().maxCoeff();
}

int residual(const std::string& file, const std::string& method, bool check, std::ostream& out) {
  const auto g = read_digraph_file(file);
  const auto r = residual_by(g, method);
  out << "height: " << r.height << "\n" << matrix_csv(g, r.theta);
  if (!check) return kExitOk;
  const double gap = check_gap(g, r);
  out << "check-gap: " << format_number(gap) << "\n";
  return gap <= kCheckTolerance ? kExitOk : kExitVerifyFailed;
}

int kernel(const std::string& file, const std::string& from, std::ostream& out) {
  const auto g = read_digraph_file(file);
  const auto k = limit_kernel(g, g.index_of(from));
  out << "support: U(" << from << ") = " << set_text(g, k.support) << "\n";
  const auto names = names_of(g, k.support);
  out << matrix_csv(names, names, k.q);
  return kExitOk;
}

int converge(const std::string& file, const std::string& from, std::optional<int> max_len, std::ostream& out) {
  const auto g = read_digraph_file(file);
  const auto report = uniform_convergence(g, g.index_of(from), max_len);
  out << "verdict: " << (report.converges ? "CONVERGES" : "DIVERGES") << (report.aperiodic ? " (aperiodic)" : "")
      << "\n";
  out << "d: " << report.d << "\n";
  out << "support: U(" << from << ") = " << set_text(g, report.support) << "\n";
  if (report.witness) {
    const auto it = std::find_if(report.residue_limits.begin(), report.residue_limits.end(),
                                 [&](const CylinderLimits& c) { return c.cylinder == *report.witness; });
    out << "witness: " << format_path(g, *report.witness) << "\n";
    out << "witness limits:";
    for (double v : it->limits) out << " " << format_number(v);
    out << "\n";
  }
  std::vector<std::string> residues;
  for (int i = 0; i < report.d; ++i) residues.push_back(std::to_string(i));
  out << "beta\n" << matrix_csv(names_of(g, report.support), residues, report.betas);
  out << "residue limits\ncylinder";
  for (const auto& r : residues) out << "," << r;
  out << ",agree\n";
  for (const auto& c : report.residue_limits) {
    out << format_path(g, c.cylinder);
    for (double v : c.limits) out << "," << format_number(v);
    out << "," << (c.agree ? "yes" : "no") << "\n";
  }
  return kExitOk;
}

int sample(const std::string& file, const std::string& from, const std::string& mode, std::size_t count,
           std::uint64_t seed, std::ostream& out) {
  const auto g = read_digraph_file(file);
  if (const char* env = std::getenv("PATHLIM_SEED"); env && *env) {
    const std::string_view text(env);
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc{} || end != text.data() + text.size())
      throw input_error("PATHLIM_SEED is not an unsigned integer: " + std::string(text));
  }
  SamplerConfig config{seed, parse_sampler_mode(mode), count};
  const auto samples = run_sampler(g, g.index_of(from), config);
  out << dump_samples(g, samples);
  return kExitOk;
}

struct VerifyTally {
  int passed = 0, failed = 0, skipped = 0, warnings = 0;
  std::ostream* out;

  void check(bool ok, const std::string& name, const std::string& detail) {
    (ok ? passed : failed)++;
    *out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
  }
  void skip(const std::string& name, const std::string& why) {
    ++skipped;
    *out << "SKIP " << name << ": " << why << "\n";
  }
  void warn(const std::string& name, const std::string& why) {
    ++warnings;
    *out << "WARN " << name << ": " << why << "\n";
  }
};

int verify(const std::string& file, std::size_t max_len, std::size_t cap, std::ostream& out) {
  const auto g = read_digraph_file(file);
  VerifyTally tally{.out = &out};

  // Path counts against exhaustive enumeration.
  {
    const auto table = z_table(g, max_len);
    double worst = 0.0;
    bool capped = false;
    for (std::size_t k = 0; k <= max_len && !capped; ++k)
      for (std::size_t x = 0; x < g.size(); ++x) {
        std::vector<oracle::WeightedPath> paths;
        try {
          paths = oracle::enumerate_paths(g, x, k, cap);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::precondition) throw;
          capped = true;
          tally.warn("path-counts", e.what() + std::string(" at length ") + std::to_string(k) +
                                        "; counts verified up to length " + std::to_string(k == 0 ? 0 : k - 1));
          break;
        }
        double total = 0.0;
        for (const auto& p : paths) total += p.weight;
        const double z = table.z(x, k);
        worst = std::max(worst, std::abs(total - z) / std::max(1.0, z));
      }
    tally.check(worst <= 1e-12, "path-counts", "max relative gap " + format_number(worst));
  }

  const auto dec = analyze(g);
  {
    const BoolMatrix reach = oracle::reachability(g);
    bool same = true;
    for (std::size_t x = 0; x < g.size(); ++x)
      for (std::size_t y = 0; y < g.size(); ++y)
        same = same && reach(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) == dec.accessible(x, y);
    tally.check(same, "accessibility", same ? "classes match breadth-first search" : "mismatch");
  }
  const double rho_oracle = oracle::spectral_radius(g);
  {
    const double gap = std::abs(rho_oracle - dec.rho);
    tally.check(gap <= 1e-8 * std::max(1.0, rho_oracle), "spectral-radius",
                "power iteration " + format_number(dec.rho) + ", eigensolve " + format_number(rho_oracle));
  }
  if (dec.degenerate()) {
    for (const char* name : {"residual", "height", "kernels"}) tally.skip(name, "spectral radius is 0");
  } else {
    auto r = residual_matrix(g);
    if (std::getenv("PATHLIM_VERIFY_CORRUPT")) r.theta(0, 0) += 1.0;
    const double gap = check_gap(g, r);
    tally.check(gap <= kCheckTolerance, "residual", "gap to numeric limit " + format_number(gap));

    if (g.size() > oracle::kDefaultEigenspaceBound) {
      tally.skip("height", "more than " + std::to_string(oracle::kDefaultEigenspaceBound) + " vertices");
    } else {
      const int index = oracle::generalized_eigenspace_dim(g.adjacency(), rho_oracle);
      tally.check(index == r.height, "height",
                  "height " + std::to_string(r.height) + ", index of rho " + std::to_string(index));
    }

    std::size_t checked = 0;
    std::vector<std::string> bad;
    for (std::size_t x = 0; x < g.size(); ++x) {
      if (!(reachable(g, dec, x).gamma > 0.0)) continue;
      const auto report = validate_cocycle_measure(g, limit_kernel(g, x));
      ++checked;
      if (!report.valid()) bad.push_back(g.name(x) + ": " + report.violations.front());
    }
    tally.check(bad.empty(), "kernels",
                bad.empty() ? std::to_string(checked) + " limit kernels are valid cocycle kernels" : bad.front());
  }

  out << "verify: " << tally.passed << " passed, " << tally.failed << " failed, " << tally.skipped << " skipped, "
      << tally.warnings << " warnings\n";
  return tally.failed == 0 ? kExitOk : kExitVerifyFailed;
}

struct ExportFlags {
  bool dot = false, theta = false, projector = false, kernel = false;
  std::optional<std::string> from;
};

int export_file(const std::string& file, const ExportFlags& flags, std::ostream& out) {
  const int chosen = flags.dot + flags.theta + flags.projector + flags.kernel;
  if (chosen != 1) throw input_error("export needs exactly one of --dot, --theta, --projector, --kernel");
  const auto g = read_digraph_file(file);
  if (flags.dot) {
    out << condensation_dot(g, analyze(g));
  } else if (flags.theta) {
    out << matrix_csv(g, residual_matrix(g).theta);
  } else if (flags.projector) {
    const auto dec = analyze(g);
    const auto pd = periodic_decomposition(g, dec.degenerate() ? 1 : aggregation_period(dec));
    out << matrix_csv(g, pd.projector);
  } else {
    if (!flags.from) throw input_error("export --kernel needs --from");
    return kernel(file, *flags.from, out);
  }
  return kExitOk;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input: return kExitInput;
    case ErrorKind::degenerate: return kExitDegenerate;
    case ErrorKind::precondition: return kExitPrecondition;
    case ErrorKind::numeric: return kExitNumeric;
  }
  return kExitNumeric;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Growth rates and limit measures of paths in weighted digraphs", "pathlim"};
  app.require_subcommand(1);
  app.allow_windows_style_options(false);

  std::string file;
  std::optional<std::string> from;
  std::string from_required;

  auto* a = app.add_subcommand("analyze", "Access classes, spectral radius, height, umbrella tests");
  a->add_option("file", file, "Edge-list file")->required();
  a->add_option("--from", from, "Also report gamma, V and U of this vertex");

  std::string method = "recursive";
  bool check = false;
  auto* r = app.add_subcommand("residual", "Height and residual matrix as CSV");
  r->add_option("file", file, "Edge-list file")->required();
  r->add_option("--method", method, "recursive, umbrella or auto")
      ->check(CLI::IsMember({"recursive", "umbrella", "auto"}));
  r->add_flag("--check", check, "Compare with the numeric limit oracle");

  auto* k = app.add_subcommand("kernel", "Transition kernel of the limit measure from a vertex");
  k->add_option("file", file, "Edge-list file")->required();
  k->add_option("--from", from_required, "Origin vertex")->required();

  std::optional<int> max_len;
  auto* c = app.add_subcommand("converge", "Whether the uniform distributions from a vertex converge");
  c->add_option("file", file, "Edge-list file")->required();
  c->add_option("--from", from_required, "Origin vertex")->required();
  c->add_option("--max-len", max_len, "Longest cylinder compared (default 2d)");

  std::string mode;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  auto* s = app.add_subcommand("sample", "Random paths, one per line (PATHLIM_SEED overrides --seed)");
  s->add_option("file", file, "Edge-list file")->required();
  s->add_option("--from", from_required, "Origin vertex")->required();
  s->add_option("--mode", mode, "uniform:K, boltzmann:S or walk:N")->required();
  s->add_option("--count", count, "Number of paths");
  s->add_option("--seed", seed, "Generator seed");

  std::size_t verify_len = 8;
  std::size_t cap = oracle::kDefaultEnumerationCap;
  auto* v = app.add_subcommand("verify", "Cross-check against brute-force and numeric oracles");
  v->add_option("file", file, "Edge-list file")->required();
  v->add_option("--max-len", verify_len, "Longest enumerated path length");
  v->add_option("--enum-cap", cap, "Enumeration cap per vertex and length");

  ExportFlags flags;
  auto* e = app.add_subcommand("export", "DOT condensation or CSV matrices");
  e->add_option("file", file, "Edge-list file")->required();
  e->add_flag("--dot", flags.dot, "Condensation digraph in DOT");
  e->add_flag("--theta", flags.theta, "Residual matrix");
  e->add_flag("--projector", flags.projector, "Spectral projector of the d-th power");
  e->add_flag("--kernel", flags.kernel, "Limit kernel (needs --from)");
  e->add_option("--from", flags.from, "Origin vertex for --kernel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    if (ex.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "pathlim: " << ex.what() << "\n";
    return kExitInput;
  }

  try {
    if (a->parsed()) return analyze(file, from, out);
    if (r->parsed()) return residual(file, method, check, out);
    if (k->parsed()) return kernel(file, from_required, out);
    if (c->parsed()) return converge(file, from_required, max_len, out);
    if (s->parsed()) return sample(file, from_required, mode, count, seed, out);
    if (v->parsed()) return verify(file, verify_len, cap, out);
    if (e->parsed()) return export_file(file, flags, out);
  } catch (const Error& ex) {
    err << "pathlim: " << ex.what() << "\n";
    return exit_code(ex.kind());
  }
  return kExitInput;
}

}  // namespace pathlim
