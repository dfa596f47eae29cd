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

#include "gbnlearn/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gbnlearn/error.hpp"

namespace gbnlearn {

void ContaminationSpec::validate(std::size_t n) const {
  if (!(sample_fraction >= 0.0 && sample_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "sample_fraction must lie in [0, 1]");
  }
  if (node_count > n) {
    throw Error(ErrorCode::InvalidSpec, "node_count " + std::to_string(node_count) + " exceeds n = " +
                                            std::to_string(n));
  }
  if (!(scale > 0.0) || !std::isfinite(location)) {
    throw Error(ErrorCode::InvalidSpec, "noise law needs finite location and positive scale");
  }
}

std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t k, Rng& rng) {
  std::vector<std::size_t> pool(population);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t r = 0; r < k; ++r) {
    const auto pick = r + static_cast<std::size_t>(rng.uniform_index(population - r));
    std::swap(pool[r], pool[pick]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

ContaminationTargets choose_contamination_targets(const ContaminationSpec& spec, std::size_t n,
                                                  std::size_t m, Rng& rng) {
  spec.validate(n);
  // The small epsilon keeps 0.05 * 1000 from rounding up to 51.
  const auto row_count = static_cast<std::size_t>(
      std::ceil(spec.sample_fraction * static_cast<double>(m) - 1e-9));
  ContaminationTargets targets;
  targets.rows = sample_without_replacement(m, std::min(row_count, m), rng);
  targets.nodes = sample_without_replacement(n, spec.node_count, rng);
  targets.law = spec.noise_law;
  targets.location = spec.location;
  targets.scale = spec.scale;
  targets.seed = spec.seed;
  return targets;
}

SampleMatrix contaminated_sample(const GaussianBayesNet& gbn, std::size_t m, const ContaminationSpec& spec,
                                 Rng& rng) {
  Rng chooser(derive_seed(spec.seed, 0x7461726765747331ULL));
  const auto targets = choose_contamination_targets(spec, gbn.node_count(), m, chooser);
  return sample(gbn, m, rng, &targets);
}

AgnosticPair agnostic_pair(const Dag& truth, std::size_t removed_edges, Rng& rng) {
  return AgnosticPair{truth, remove_random_edges(truth, removed_edges, rng)};
}

}  // namespace gbnlearn
