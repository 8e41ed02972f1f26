// Copyright 2026 The skillmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skillmix/disc/discriminator.hpp"

namespace skillmix::disc {

FakeReplayBuffer::FakeReplayBuffer(size_t capacity) : capacity_(capacity) {
  require(capacity > 0, "invalid_argument", "replay buffer capacity must be positive");
}

void FakeReplayBuffer::push(TransitionSample sample) {
  require(sample.provenance == Provenance::fake, "contract_violation", "replay buffer only holds fake transitions");
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(std::move(sample));
}

const TransitionSample& FakeReplayBuffer::sample(Rng& rng) const {
  require(!items_.empty(), "empty_buffer", "cannot sample from an empty replay buffer");
  return items_[static_cast<size_t>(uniform_index(rng, static_cast<int>(items_.size())))];
}

namespace {

TransitionSample real_sample(const sim::ReferenceDataset& dataset, Rng& rng) {
  const auto& index = dataset.transition_index();
  const sim::FrameRef ref = index[static_cast<size_t>(uniform_index(rng, static_cast<int>(index.size())))];
  return TransitionSample{dataset.frame(ref), dataset.next_frame(ref), dataset.skill_of(ref), Provenance::real};
}

}  // namespace

DiscriminatorBatch assemble_batch(const sim::ReferenceDataset& dataset, const FakeReplayBuffer& fakes, Rng& rng,
                                  BatchSizes sizes, const std::vector<TransitionSample>* current_rollout) {
  require(!dataset.transition_index().empty(), "empty_dataset", "reference dataset has no transitions");
  DiscriminatorBatch batch;
  batch.real.reserve(static_cast<size_t>(sizes.real));
  for (int i = 0; i < sizes.real; ++i) batch.real.push_back(real_sample(dataset, rng));

  if (!fakes.empty()) {
    for (int i = 0; i < sizes.fake; ++i) batch.fake.push_back(fakes.sample(rng));
  } else {
    require(current_rollout != nullptr && !current_rollout->empty(), "empty_buffer",
            "no fake transitions available (empty replay buffer and no current rollout)");
    for (int i = 0; i < sizes.fake; ++i) {
      batch.fake.push_back((*current_rollout)[static_cast<size_t>(
          uniform_index(rng, static_cast<int>(current_rollout->size())))]);
    }
  }

  const int K = dataset.num_skills();
  if (K >= 2) {
    for (int i = 0; i < sizes.mismatched; ++i) {
      TransitionSample s = real_sample(dataset, rng);
      const int truth = s.skill_id;
      // uniform over C \ {truth}
      int wrong = uniform_index(rng, K - 1);
      if (wrong >= truth) ++wrong;
      s.skill_id = wrong;
      batch.true_labels.push_back(truth);
      batch.mismatched.push_back(std::move(s));
    }
  }
  return batch;
}

}  // namespace skillmix::disc
