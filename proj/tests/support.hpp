#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "pathlim/graph.hpp"
#include "pathlim/oracle.hpp"

namespace pathlim::testing {

inline std::string data_path(const std::string& name) { return std::string(PATHLIM_TEST_DATA) + "/" + name; }

/// Fixture digraphs g1..g5 shipped as edge lists.
inline WeightedDigraph fixture(int i) { return read_digraph_file(data_path("g" + std::to_string(i) + ".txt")); }

struct CorpusMember {
  std::uint64_t seed;
  WeightedDigraph g;
};

inline constexpr std::size_t kCorpusMaxVertices = 6;
inline constexpr int kCorpusMaxWeight = 3;

/// The frozen corpus: every member has a positive spectral radius.
inline const std::vector<CorpusMember>& corpus() {
  static const std::vector<CorpusMember> members = [] {
    std::vector<CorpusMember> out;
    std::ifstream in(data_path("corpus_seeds.txt"));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto seed = std::stoull(line);
      out.push_back({seed, oracle::random_digraph(seed, kCorpusMaxVertices, kCorpusMaxWeight)});
    }
    return out;
  }();
  return members;
}

inline Path path_of(const WeightedDigraph& g, const std::vector<std::string>& tokens) {
  return path_from_tokens(g, tokens);
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace pathlim::testing
