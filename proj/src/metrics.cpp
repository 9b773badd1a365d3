#include "ttc/metrics.hpp"

#include <cmath>
#include <limits>

namespace ttc {

namespace {
void check_shapes(const DenseTensor& a, const DenseTensor& b) {
  if (a.dims() != b.dims()) detail::fail("tensors have different shapes");
}
}  // namespace

double rse(const DenseTensor& truth, const DenseTensor& estimate) {
  check_shapes(truth, estimate);
  return (truth.data() - estimate.data()).norm() / truth.data().norm();
}

double psnr(const DenseTensor& truth, const DenseTensor& estimate,
            double max_value) {
  check_shapes(truth, estimate);
  const double mse =
      (truth.data() - estimate.data()).squaredNorm() / truth.size();
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(max_value) - 10.0 * std::log10(mse);
}

}  // namespace ttc
