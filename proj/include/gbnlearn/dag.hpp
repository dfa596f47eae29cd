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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gbnlearn/rng.hpp"

namespace gbnlearn {

using NodeId = std::size_t;
using Edge = std::pair<NodeId, NodeId>;  // (parent, child)

/// Immutable directed acyclic graph over nodes 0..n-1.
///
/// Parent lists are kept sorted ascending; coefficient vectors in the
/// model are aligned with them. A topological order (ties broken by the
/// smallest ready index) is computed once at construction.
class Dag {
 public:
  /// Validates the edge list. Throws InvalidIndex, SelfLoop, DuplicateEdge
  /// or CycleDetected.
  Dag(std::size_t n, std::span<const Edge> edges, std::vector<std::string> labels = {});

  std::size_t node_count() const noexcept { return parents_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const NodeId> parents(NodeId i) const { return parents_.at(i); }
  std::span<const NodeId> children(NodeId i) const { return children_.at(i); }
  std::size_t in_degree(NodeId i) const { return parents_.at(i).size(); }

  /// d = max_i p_i
  std::size_t max_in_degree() const noexcept;
  /// d_avg = (1/n) * sum_i p_i
  double average_in_degree() const noexcept;

  std::span<const NodeId> topological_order() const noexcept { return order_; }

  /// Edges sorted lexicographically by (parent, child).
  std::vector<Edge> edges() const;

  bool has_edge(NodeId parent, NodeId child) const;

  const std::vector<std::string>& labels() const noexcept { return labels_; }

  friend bool operator==(const Dag& a, const Dag& b) { return a.parents_ == b.parents_; }

 private:
  std::vector<std::vector<NodeId>> parents_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<NodeId> order_;
  std::vector<std::string> labels_;
  std::size_t edge_count_ = 0;
};

Dag build_dag(std::size_t n, std::span<const Edge> edges);

/// True iff the undirected skeleton is a forest.
bool is_polytree(const Dag& dag);

/// Uniform labelled tree decoded from a random Pruefer sequence, rooted
/// at node 0 with edges directed away from the root (in-degree <= 1).
Dag random_tree_dag(std::size_t n, Rng& rng);

/// G(n, d/n) with every edge oriented from the lower to the higher index.
Dag random_er_dag(std::size_t n, double expected_degree, Rng& rng);

/// Copy of `dag` with k uniformly chosen edges deleted.
Dag remove_random_edges(const Dag& dag, std::size_t k, Rng& rng);

/// Decodes a Pruefer sequence (entries in [0, n)) into the undirected
/// edge list of the corresponding labelled tree on n = seq.size() + 2 nodes.
std::vector<Edge> pruefer_decode(std::span<const NodeId> sequence);

}  // namespace gbnlearn
