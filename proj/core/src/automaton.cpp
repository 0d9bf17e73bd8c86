#include "conecert/automaton.hpp"

#include <random>
#include <set>

#include "conecert/errors.hpp"

namespace conecert {

int SwitchingGraph::node_index(std::string_view name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<std::vector<int>> SwitchingGraph::outgoing_by_node() const {
  std::vector<std::vector<int>> out(nodes.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& edge = edges[e];
    if (edge.from >= 0 && edge.from < static_cast<int>(nodes.size())) {
      out[edge.from].push_back(static_cast<int>(e));
    }
  }
  return out;
}

ValidationReport validate_graph(const SwitchingGraph& g) {
  ValidationReport report;
  const int n_nodes = static_cast<int>(g.nodes.size());

  if (n_nodes == 0) report.errors.push_back("graph has no nodes");
  if (g.mode_count < 1) report.errors.push_back("mode_count must be at least 1");

  std::set<std::string_view> seen_names;
  for (const auto& name : g.nodes) {
    if (!seen_names.insert(name).second) {
      report.errors.push_back("duplicate node name '" + name + "'");
    }
  }

  auto node_name = [&](int i) {
    return i >= 0 && i < n_nodes ? g.nodes[i] : "#" + std::to_string(i);
  };

  std::set<std::tuple<int, int, int>> seen_edges;
  std::vector<bool> has_outgoing(n_nodes, false);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const Edge& edge = g.edges[e];
    const std::string where = "edge #" + std::to_string(e);
    if (edge.from < 0 || edge.from >= n_nodes) {
      report.errors.push_back(where + ": from-node index " + std::to_string(edge.from) + " out of range");
    } else {
      has_outgoing[edge.from] = true;
    }
    if (edge.to < 0 || edge.to >= n_nodes) {
      report.errors.push_back(where + ": to-node index " + std::to_string(edge.to) + " out of range");
    }
    if (edge.label < 0 || edge.label >= g.mode_count) {
      report.errors.push_back(where + ": label " + std::to_string(edge.label + 1) + " out of range for " +
                              std::to_string(g.mode_count) + " modes");
    }
    if (!seen_edges.insert({edge.from, edge.label, edge.to}).second) {
      report.errors.push_back(where + ": duplicate of an earlier (from,label,to) triple");
    }
  }

  // Every node needs an outgoing edge so infinite switching sequences exist.
  for (int i = 0; i < n_nodes; ++i) {
    if (!has_outgoing[i]) {
      report.errors.push_back("node " + node_name(i) + " has no outgoing edge");
    }
  }
  return report;
}

SwitchingGraph arbitrary_switching(int mode_count) {
  if (mode_count < 1) throw InputError("arbitrary_switching needs at least one mode");
  SwitchingGraph g;
  g.nodes = {"v1"};
  g.mode_count = mode_count;
  for (int l = 0; l < mode_count; ++l) g.edges.push_back({0, l, 0});
  return g;
}

bool is_admissible(const SwitchingGraph& g, const Walk& walk) {
  if (walk.start < 0 || walk.start >= static_cast<int>(g.nodes.size())) return false;
  int at = walk.start;
  for (const WalkStep& step : walk.steps) {
    bool found = false;
    for (const Edge& e : g.edges) {
      if (e.from == at && e.label == step.label && e.to == step.to) {
        found = true;
        break;
      }
    }
    if (!found) return false;
    at = step.to;
  }
  return true;
}

void for_each_walk(const SwitchingGraph& g, int start, int length,
                   const std::function<void(const Walk&)>& visit, std::size_t max_walks) {
  if (start < 0 || start >= static_cast<int>(g.nodes.size())) {
    throw InputError("walk start node out of range");
  }
  if (length < 0) throw InputError("walk length must be nonnegative");

  std::size_t emitted = 0;
  auto emit = [&](const Walk& w) {
    if (++emitted > max_walks) {
      throw NumericalError("walk enumeration exceeded the cap of " + std::to_string(max_walks) +
                           " walks; use a shorter horizon");
    }
    visit(w);
  };

  Walk walk;
  walk.start = start;
  if (length == 0) {
    emit(walk);
    return;
  }

  const auto outgoing = g.outgoing_by_node();

  // Depth-first with an explicit stack of out-edge cursors; visiting edges in
  // ascending index order yields walks in lexicographic edge-index order.
  std::vector<std::size_t> cursor(static_cast<std::size_t>(length), 0);
  walk.steps.reserve(length);
  int depth = 0;
  int at = start;
  while (depth >= 0) {
    const auto& out = outgoing[at];
    if (cursor[depth] < out.size()) {
      const Edge& e = g.edges[out[cursor[depth]]];
      ++cursor[depth];
      walk.steps.push_back({e.label, e.to});
      if (depth + 1 == length) {
        emit(walk);
        walk.steps.pop_back();
      } else {
        ++depth;
        cursor[depth] = 0;
        at = e.to;
      }
    } else {
      --depth;
      if (depth >= 0) {
        walk.steps.pop_back();
        at = walk.steps.empty() ? start : walk.steps.back().to;
      }
    }
  }
}

std::vector<Walk> enumerate_walks(const SwitchingGraph& g, int start, int length,
                                  std::size_t max_walks) {
  std::vector<Walk> walks;
  for_each_walk(g, start, length, [&](const Walk& w) { walks.push_back(w); }, max_walks);
  return walks;
}

Walk sample_walk(const SwitchingGraph& g, int start, int length, std::uint64_t seed) {
  if (start < 0 || start >= static_cast<int>(g.nodes.size())) {
    throw InputError("walk start node out of range");
  }
  if (length < 0) throw InputError("walk length must be nonnegative");

  const auto outgoing = g.outgoing_by_node();
  std::mt19937_64 rng(seed);

  Walk walk;
  walk.start = start;
  walk.steps.reserve(length);
  int at = start;
  for (int t = 0; t < length; ++t) {
    const auto& out = outgoing[at];
    if (out.empty()) {
      throw InputError("node " + g.nodes[at] + " has no outgoing edge; graph is invalid");
    }
    const Edge& e = g.edges[out[rng() % out.size()]];
    walk.steps.push_back({e.label, e.to});
    at = e.to;
  }
  return walk;
}

}  // namespace conecert
