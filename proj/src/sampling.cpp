#include "ttc/sampling.hpp"

#include "ttc/rng.hpp"

#include <algorithm>
#include <unordered_set>

namespace ttc {

ObservationSet::ObservationSet(Dims dims, std::vector<MultiIndex> indices,
                               Eigen::VectorXd values)
    : dims_(std::move(dims)),
      indices_(std::move(indices)),
      values_(std::move(values)) {
  if (static_cast<Index>(indices_.size()) != values_.size())
    detail::fail("observation indices and values differ in length");
  std::unordered_set<Index> seen;
  seen.reserve(indices_.size());
  for (const MultiIndex& m : indices_) {
    const Index i = linear_index(m, dims_);  // also validates m
    if (!seen.insert(i).second) detail::fail("duplicate observation index");
  }
}

Eigen::MatrixXd FactoredSelection::dense_factor(Index k) const {
  const Index n = observation_count();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dims[k - 1], n);
  for (Index l = 0; l < n; ++l) s(rows[k - 1][l] - 1, l) = 1.0;
  return s;
}

FactoredSelection build_selection(const ObservationSet& obs) {
  const Index d = static_cast<Index>(obs.dims().size());
  FactoredSelection sel;
  sel.dims = obs.dims();
  sel.rows.assign(d, std::vector<Index>(obs.size()));
  for (Index l = 0; l < obs.size(); ++l)
    for (Index k = 0; k < d; ++k) sel.rows[k][l] = obs.index(l)[k];
  return sel;
}

ObservationSet remap_observations(const ObservationSet& obs,
                                  const std::vector<Dims>& mode_factors) {
  const Dims& dims = obs.dims();
  if (mode_factors.size() != dims.size())
    detail::fail("one factor list per mode is required");
  Dims flat;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (product(mode_factors[k]) != dims[k])
      detail::fail("mode factors do not multiply back to the dimension");
    flat.insert(flat.end(), mode_factors[k].begin(), mode_factors[k].end());
  }
  std::vector<MultiIndex> remapped(obs.size());
  for (Index l = 0; l < obs.size(); ++l) {
    MultiIndex m;
    m.reserve(flat.size());
    for (std::size_t k = 0; k < dims.size(); ++k) {
      MultiIndex sub = multi_index(obs.index(l)[k], mode_factors[k]);
      m.insert(m.end(), sub.begin(), sub.end());
    }
    remapped[l] = std::move(m);
  }
  return ObservationSet(flat, std::move(remapped), obs.values());
}

std::pair<ObservationSet, ObservationSet> holdout_split(
    const ObservationSet& obs, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    detail::fail("holdout fraction must lie strictly between 0 and 1");
  const Index n = obs.size();
  const Index n_val = static_cast<Index>(std::llround(fraction * n));
  std::vector<std::int64_t> order =
      [&] {
        rng::Engine g = rng::make_engine(seed);
        return rng::sample_indices(n, n, g);
      }();
  auto take = [&](Index begin, Index end) {
    std::vector<MultiIndex> idx;
    Eigen::VectorXd vals(end - begin);
    idx.reserve(end - begin);
    for (Index p = begin; p < end; ++p) {
      idx.push_back(obs.index(order[p]));
      vals[p - begin] = obs.value(order[p]);
    }
    return ObservationSet(obs.dims(), std::move(idx), std::move(vals));
  };
  return {take(n_val, n), take(0, n_val)};
}

ObservationSet gather(const DenseTensor& t,
                      const std::vector<MultiIndex>& indices) {
  Eigen::VectorXd vals(static_cast<Index>(indices.size()));
  for (std::size_t l = 0; l < indices.size(); ++l)
    vals[static_cast<Index>(l)] = t.at(indices[l]);
  return ObservationSet(t.dims(), indices, std::move(vals));
}

}  // namespace ttc

namespace ttc::rng {

std::vector<std::int64_t> sample_indices(std::int64_t n, std::int64_t k,
                                         Engine& g) {
  std::vector<std::int64_t> all(n);
  for (std::int64_t i = 0; i < n; ++i) all[i] = i;
  shuffle(all, g);
  all.resize(k);
  return all;
}

}  // namespace ttc::rng
