#pragma once

#include "ttc/sampling.hpp"
#include "ttc/tensor_train.hpp"

#include <vector>

namespace ttc {

struct InterpOptions {
  Index h = 0;                    // coarsening factor; 0 picks default_h
  std::vector<bool> resize_mode;  // per original mode; empty = spatial default
};

// h = max(2, round(sqrt(1/p))) for observed fraction p, so a coarse box
// expects about one observation.
Index default_h(double observed_fraction);

// Resize modes 1 and 2, leave channel/temporal modes alone.
std::vector<bool> default_resize_modes(Index order);

// Box downscale by h over the flagged modes, averaging observed entries only;
// a box with no observed entries takes the global observed mean. Leftover
// trailing indices fold into the last box.
DenseTensor box_downscale(const ObservationSet& obs, Index h,
                          const std::vector<bool>& resize_mode);

// Dense interpolation fill over the original dimensions: box_downscale, then
// upscale back with Keys cubic interpolation.
DenseTensor interp_fill(const ObservationSet& obs, const InterpOptions& opts);

// Observed values scattered onto zeros.
DenseTensor zero_fill_tensor(const ObservationSet& obs);

// interp_fill, reshaped to the factored dimensions and truncated with tt_svd.
// The result is site-d canonical.
TensorTrain interp_init(const ObservationSet& obs,
                        const std::vector<Dims>& mode_factors,
                        const std::vector<Index>& bond_ranks,
                        const InterpOptions& opts);

// tt_svd of the tensor with observed values and zeros elsewhere.
TensorTrain zero_fill_init(const ObservationSet& obs,
                           const std::vector<Dims>& mode_factors,
                           const std::vector<Index>& bond_ranks);

// Keys cubic-convolution resize matrix (a = -0.5) mapping length `from` to
// length `to`, with centre-aligned coordinates and edge clamping.
Eigen::MatrixXd cubic_resize_matrix(Index to, Index from);

}  // namespace ttc
