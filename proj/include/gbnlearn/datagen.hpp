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

#include <cstdint>
#include <utility>

#include "gbnlearn/dag.hpp"
#include "gbnlearn/gbn.hpp"

namespace gbnlearn {

struct ContaminationSpec {
  double sample_fraction = 0.05;
  std::size_t node_count = 5;
  NoiseLaw noise_law = NoiseLaw::Gaussian;
  double location = 1000.0;
  double scale = 1.0;
  std::uint64_t seed = 0;

  /// Throws InvalidSpec.
  void validate(std::size_t n) const;
};

/// ceil(fraction * m) rows and node_count nodes, each drawn uniformly
/// without replacement and returned sorted. Replacement draws are seeded
/// from spec.seed.
ContaminationTargets choose_contamination_targets(const ContaminationSpec& spec, std::size_t n,
                                                  std::size_t m, Rng& rng);

SampleMatrix contaminated_sample(const GaussianBayesNet& gbn, std::size_t m,
                                 const ContaminationSpec& spec, Rng& rng);

struct AgnosticPair {
  Dag truth;
  Dag fit;
};

/// Truth DAG plus a copy with k random edges removed (the structure handed
/// to the learner in the misspecified setting).
AgnosticPair agnostic_pair(const Dag& truth, std::size_t removed_edges, Rng& rng);

/// k distinct values from [0, population), uniformly, sorted ascending.
std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t k, Rng& rng);

}  // namespace gbnlearn
