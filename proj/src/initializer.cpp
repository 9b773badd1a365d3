#include "ttc/initializer.hpp"

#include <algorithm>
#include <cmath>

namespace ttc {

Index default_h(double observed_fraction) {
  if (!(observed_fraction > 0.0 && observed_fraction <= 1.0))
    detail::fail("observed fraction must lie in (0, 1]");
  return std::max<Index>(
      2, static_cast<Index>(std::llround(std::sqrt(1.0 / observed_fraction))));
}

std::vector<bool> default_resize_modes(Index order) {
  std::vector<bool> flags(order, false);
  for (Index k = 0; k < std::min<Index>(order, 2); ++k) flags[k] = true;
  return flags;
}

namespace {

double keys_kernel(double s) {  // a = -0.5
  const double a = -0.5;
  s = std::abs(s);
  if (s < 1.0) return (a + 2.0) * s * s * s - (a + 3.0) * s * s + 1.0;
  if (s < 2.0) return a * s * s * s - 5.0 * a * s * s + 8.0 * a * s - 4.0 * a;
  return 0.0;
}

Dims flatten_factors(const std::vector<Dims>& mode_factors) {
  Dims flat;
  for (const Dims& f : mode_factors)
    flat.insert(flat.end(), f.begin(), f.end());
  return flat;
}

void check_factors(const Dims& dims, const std::vector<Dims>& mode_factors) {
  if (mode_factors.size() != dims.size())
    detail::fail("one factor list per mode is required");
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (product(mode_factors[k]) != dims[k])
      detail::fail("mode factors do not multiply back to the dimension");
}

}  // namespace

Eigen::MatrixXd cubic_resize_matrix(Index to, Index from) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(to, from);
  const double scale = static_cast<double>(to) / static_cast<double>(from);
  for (Index x = 1; x <= to; ++x) {
    const double src = (x - 0.5) / scale + 0.5;
    const Index base = static_cast<Index>(std::floor(src));
    for (Index tap = base - 1; tap <= base + 2; ++tap) {
      const double wgt = keys_kernel(src - tap);
      if (wgt == 0.0) continue;
      const Index clamped = std::clamp<Index>(tap, 1, from);
      u(x - 1, clamped - 1) += wgt;
    }
  }
  return u;
}

DenseTensor box_downscale(const ObservationSet& obs, Index h,
                          const std::vector<bool>& resize_mode) {
  const Dims& dims = obs.dims();
  const Index d = static_cast<Index>(dims.size());
  if (obs.size() == 0) detail::fail("interpolation needs observed entries");
  if (static_cast<Index>(resize_mode.size()) != d)
    detail::fail("one resize flag per mode is required");
  if (h < 1) detail::fail("coarsening factor must be at least 1");

  Dims coarse(d);
  for (Index k = 0; k < d; ++k) {
    coarse[k] = resize_mode[k] ? dims[k] / h : dims[k];
    if (resize_mode[k] && coarse[k] < 2)
      detail::fail("mode too small for the requested coarsening factor");
  }

  DenseTensor sums(coarse);
  DenseTensor counts(coarse);
  MultiIndex cell(d);
  for (Index l = 0; l < obs.size(); ++l) {
    const MultiIndex& m = obs.index(l);
    for (Index k = 0; k < d; ++k)
      cell[k] = resize_mode[k] ? std::min((m[k] - 1) / h + 1, coarse[k]) : m[k];
    sums.at(cell) += obs.value(l);
    counts.at(cell) += 1.0;
  }
  const double global_mean = obs.values().mean();
  DenseTensor w(coarse);
  for (Index i = 0; i < w.size(); ++i)
    w[i] = counts[i] > 0.0 ? sums[i] / counts[i] : global_mean;
  return w;
}

DenseTensor interp_fill(const ObservationSet& obs, const InterpOptions& opts) {
  const Dims& dims = obs.dims();
  const Index d = static_cast<Index>(dims.size());
  std::vector<bool> resize = opts.resize_mode.empty()
                                 ? default_resize_modes(d)
                                 : opts.resize_mode;
  const Index h =
      opts.h > 0 ? opts.h
                 : default_h(static_cast<double>(obs.size()) / product(dims));
  DenseTensor w = box_downscale(obs, h, resize);
  for (Index k = 0; k < d; ++k)
    if (resize[k] && w.dims()[k] != dims[k])
      w = mode_product(w, cubic_resize_matrix(dims[k], w.dims()[k]), k + 1);
  return w;
}

DenseTensor zero_fill_tensor(const ObservationSet& obs) {
  DenseTensor v(obs.dims());
  for (Index l = 0; l < obs.size(); ++l) v.at(obs.index(l)) = obs.value(l);
  return v;
}

TensorTrain interp_init(const ObservationSet& obs,
                        const std::vector<Dims>& mode_factors,
                        const std::vector<Index>& bond_ranks,
                        const InterpOptions& opts) {
  check_factors(obs.dims(), mode_factors);
  DenseTensor w = interp_fill(obs, opts);
  return tt_svd(reshape(w, flatten_factors(mode_factors)), bond_ranks);
}

TensorTrain zero_fill_init(const ObservationSet& obs,
                           const std::vector<Dims>& mode_factors,
                           const std::vector<Index>& bond_ranks) {
  check_factors(obs.dims(), mode_factors);
  return tt_svd(reshape(zero_fill_tensor(obs), flatten_factors(mode_factors)),
                bond_ranks);
}

}  // namespace ttc
