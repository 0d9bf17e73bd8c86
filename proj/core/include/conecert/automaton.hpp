#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "conecert/tolerances.hpp"
#include "conecert/validation.hpp"

namespace conecert {

// Labeled transition of the switching automaton; all indices 0-based.
struct Edge {
  int from = 0;
  int label = 0;
  int to = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// The switching-rule automaton: admissible mode sequences are exactly the
// label sequences of walks on this graph.
struct SwitchingGraph {
  std::vector<std::string> nodes;
  std::vector<Edge> edges;
  int mode_count = 0;

  int node_index(std::string_view name) const;  // -1 when absent
  std::vector<std::vector<int>> outgoing_by_node() const;  // edge indices, ascending
};

struct WalkStep {
  int label = 0;
  int to = 0;

  friend bool operator==(const WalkStep&, const WalkStep&) = default;
};

struct Walk {
  int start = 0;
  std::vector<WalkStep> steps;

  int length() const { return static_cast<int>(steps.size()); }
  int end_node() const { return steps.empty() ? start : steps.back().to; }

  friend bool operator==(const Walk&, const Walk&) = default;
};

ValidationReport validate_graph(const SwitchingGraph& g);

// Single node with one self-loop per mode: every mode sequence is admissible.
SwitchingGraph arbitrary_switching(int mode_count);

bool is_admissible(const SwitchingGraph& g, const Walk& walk);

// All walks of the given length from `start`, ordered lexicographically by
// edge-index sequence. Throws NumericalError past `max_walks`.
std::vector<Walk> enumerate_walks(const SwitchingGraph& g, int start, int length,
                                  std::size_t max_walks = tol::kWalkEnumerationCap);

// Streaming variant of enumerate_walks with the same order and cap; the
// oracles use it to avoid materializing large walk sets.
void for_each_walk(const SwitchingGraph& g, int start, int length,
                   const std::function<void(const Walk&)>& visit,
                   std::size_t max_walks = tol::kWalkEnumerationCap);

// Uniform choice among outgoing edges at every step. Deterministic for a
// fixed seed: an std::mt19937_64 stream reduced by modulo (see README).
Walk sample_walk(const SwitchingGraph& g, int start, int length, std::uint64_t seed);

}  // namespace conecert
