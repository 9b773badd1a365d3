#pragma once

#include "ttc/sampling.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ttc {

enum class MaskMode {
  Iid,     // pixels (all modes but the last) sampled without replacement,
           // every channel of a kept pixel observed
  Sensor,  // one spatial (modes 1-2) mask replicated over all later modes
};

// Index skeleton of an observation set; values come from gather().
std::vector<MultiIndex> make_mask(const Dims& dims, double observed_fraction,
                                  MaskMode mode, std::uint64_t seed);

// Entry-level iid sampling (no channel grouping), used by synthetic
// instances.
std::vector<MultiIndex> sample_entries(const Dims& dims,
                                       double observed_fraction,
                                       std::uint64_t seed);

// One record per observation: i_1,i_2,...,i_d,value
void save_observations_csv(const ObservationSet& obs, const std::string& path);
ObservationSet load_observations_csv(const std::string& path,
                                     const Dims& dims);

}  // namespace ttc
