#pragma once

#include "ttc/rng.hpp"
#include "ttc/sampling.hpp"
#include "ttc/tensor_train.hpp"

#include <cstdint>

namespace ttc {

// Train with iid standard-normal core entries and the given bond ranks
// (clamped to the chain).
TensorTrain random_tt(const Dims& dims, const std::vector<Index>& bond_ranks,
                      rng::Engine& g);

DenseTensor random_tensor(const Dims& dims, rng::Engine& g);

struct SynthInstance {
  DenseTensor truth;
  ObservationSet observations;
  std::vector<Index> ranks;  // actual bond ranks of the generator
};

// Seeded low-TT-rank instance with an entry-level iid mask.
SynthInstance synth_instance(const Dims& dims,
                             const std::vector<Index>& bond_ranks,
                             double observed_fraction, std::uint64_t seed);

}  // namespace ttc
