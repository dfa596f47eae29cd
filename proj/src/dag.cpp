/*
Copyright 2026 The gbnlearn Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "gbnlearn/dag.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>

#include "gbnlearn/error.hpp"

namespace gbnlearn {

Dag::Dag(std::size_t n, std::span<const Edge> edges, std::vector<std::string> labels)
    : parents_(n), children_(n), labels_(std::move(labels)) {
  if (!labels_.empty() && labels_.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "label count " + std::to_string(labels_.size()) +
                                                  " does not match node count " + std::to_string(n));
  }
  for (const auto& [parent, child] : edges) {
    if (parent >= n || child >= n) {
      throw Error(ErrorCode::InvalidIndex, "edge (" + std::to_string(parent) + ", " +
                                               std::to_string(child) + ") outside [0, " +
                                               std::to_string(n) + ")");
    }
    if (parent == child) {
      throw Error(ErrorCode::SelfLoop, "self-loop on node " + std::to_string(parent));
    }
    parents_[child].push_back(parent);
    children_[parent].push_back(child);
  }
  for (NodeId i = 0; i < n; ++i) {
    auto& ps = parents_[i];
    std::sort(ps.begin(), ps.end());
    if (std::adjacent_find(ps.begin(), ps.end()) != ps.end()) {
      throw Error(ErrorCode::DuplicateEdge, "duplicate edge into node " + std::to_string(i));
    }
    std::sort(children_[i].begin(), children_[i].end());
  }
  edge_count_ = edges.size();

  // Kahn's algorithm; the min-heap fixes ties to the smallest ready index.
  std::vector<std::size_t> remaining(n);
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId i = 0; i < n; ++i) {
    remaining[i] = parents_[i].size();
    if (remaining[i] == 0) ready.push(i);
  }
  order_.reserve(n);
  while (!ready.empty()) {
    const NodeId v = ready.top();
    ready.pop();
    order_.push_back(v);
    for (NodeId c : children_[v]) {
      if (--remaining[c] == 0) ready.push(c);
    }
  }
  if (order_.size() != n) {
    throw Error(ErrorCode::CycleDetected,
                std::to_string(n - order_.size()) + " node(s) lie on or behind a directed cycle");
  }
}

std::size_t Dag::max_in_degree() const noexcept {
  std::size_t d = 0;
  for (const auto& ps : parents_) d = std::max(d, ps.size());
  return d;
}

double Dag::average_in_degree() const noexcept {
  if (parents_.empty()) return 0.0;
  return static_cast<double>(edge_count_) / static_cast<double>(parents_.size());
}

std::vector<Edge> Dag::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId p = 0; p < children_.size(); ++p) {
    for (NodeId c : children_[p]) out.emplace_back(p, c);
  }
  return out;
}

bool Dag::has_edge(NodeId parent, NodeId child) const {
  const auto& ps = parents_.at(child);
  return std::binary_search(ps.begin(), ps.end(), parent);
}

Dag build_dag(std::size_t n, std::span<const Edge> edges) { return Dag(n, edges); }

bool is_polytree(const Dag& dag) {
  const std::size_t n = dag.node_count();
  if (dag.edge_count() + 1 > n && dag.edge_count() > 0) return false;
  std::vector<NodeId> root(n);
  std::iota(root.begin(), root.end(), NodeId{0});
  std::function<NodeId(NodeId)> find = [&](NodeId x) {
    while (root[x] != x) {
      root[x] = root[root[x]];
      x = root[x];
    }
    return x;
  };
  for (const auto& [p, c] : dag.edges()) {
    const NodeId a = find(p);
    const NodeId b = find(c);
    if (a == b) return false;
    root[a] = b;
  }
  return true;
}

std::vector<Edge> pruefer_decode(std::span<const NodeId> sequence) {
  const std::size_t n = sequence.size() + 2;
  std::vector<std::size_t> degree(n, 1);
  for (NodeId v : sequence) {
    if (v >= n) throw Error(ErrorCode::InvalidIndex, "Pruefer entry out of range");
    ++degree[v];
  }
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> leaves;
  for (NodeId v = 0; v < n; ++v) {
    if (degree[v] == 1) leaves.push(v);
  }
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (NodeId v : sequence) {
    const NodeId leaf = leaves.top();
    leaves.pop();
    edges.emplace_back(leaf, v);
    if (--degree[v] == 1) leaves.push(v);
  }
  const NodeId u = leaves.top();
  leaves.pop();
  edges.emplace_back(u, leaves.top());
  return edges;
}

Dag random_tree_dag(std::size_t n, Rng& rng) {
  if (n < 2) throw Error(ErrorCode::InvalidSize, "random tree needs n >= 2, got " + std::to_string(n));
  std::vector<NodeId> sequence(n - 2);
  for (auto& v : sequence) v = static_cast<NodeId>(rng.uniform_index(n));
  const auto undirected = pruefer_decode(sequence);

  std::vector<std::vector<NodeId>> adjacency(n);
  for (const auto& [a, b] : undirected) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  for (auto& nbrs : adjacency) std::sort(nbrs.begin(), nbrs.end());

  // Breadth-first from node 0, directing every edge away from the root.
  std::vector<Edge> directed;
  directed.reserve(n - 1);
  std::vector<bool> seen(n, false);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = true;
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop();
    for (NodeId w : adjacency[v]) {
      if (seen[w]) continue;
      seen[w] = true;
      directed.emplace_back(v, w);
      frontier.push(w);
    }
  }
  return Dag(n, directed);
}

Dag random_er_dag(std::size_t n, double expected_degree, Rng& rng) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "ER graph needs n >= 1");
  if (!(expected_degree > 0.0) || expected_degree > static_cast<double>(n)) {
    throw Error(ErrorCode::InvalidParameter, "expected degree must lie in (0, n], got " +
                                                 std::to_string(expected_degree));
  }
  const double p = expected_degree / static_cast<double>(n);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  }
  return Dag(n, edges);
}

Dag remove_random_edges(const Dag& dag, std::size_t k, Rng& rng) {
  auto edges = dag.edges();
  if (k > edges.size()) {
    throw Error(ErrorCode::NotEnoughEdges, "cannot remove " + std::to_string(k) + " of " +
                                               std::to_string(edges.size()) + " edges");
  }
  // Partial Fisher-Yates: the last k slots hold the removed edges.
  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t last = edges.size() - 1 - r;
    const std::size_t pick = static_cast<std::size_t>(rng.uniform_index(last + 1));
    std::swap(edges[pick], edges[last]);
  }
  edges.resize(edges.size() - k);
  return Dag(dag.node_count(), edges, dag.labels());
}

}  // namespace gbnlearn
