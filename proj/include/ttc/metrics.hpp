#pragma once

#include "ttc/dense_tensor.hpp"

namespace ttc {

// ||truth - estimate||_F / ||truth||_F
double rse(const DenseTensor& truth, const DenseTensor& estimate);

// 20 log10(max_value) - 10 log10(MSE) in dB, with
// MSE = ||truth - estimate||_F^2 / numel. A perfect estimate yields +inf.
double psnr(const DenseTensor& truth, const DenseTensor& estimate,
            double max_value);

}  // namespace ttc
