#pragma once

#include "ttc/dense_tensor.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace ttc {

// Known entries of a tensor: multi-indices and their values. Indices must be
// valid for dims and duplicates are rejected (they would silently reweight
// the least-squares fit).
class ObservationSet {
 public:
  ObservationSet() = default;  // empty set
  ObservationSet(Dims dims, std::vector<MultiIndex> indices,
                 Eigen::VectorXd values);

  const Dims& dims() const { return dims_; }
  Index size() const { return values_.size(); }  // N

  const MultiIndex& index(Index l) const { return indices_[l]; }
  double value(Index l) const { return values_[l]; }

  const std::vector<MultiIndex>& indices() const { return indices_; }
  const Eigen::VectorXd& values() const { return values_; }

 private:
  Dims dims_;
  std::vector<MultiIndex> indices_;
  Eigen::VectorXd values_;
};

// The d factor matrices S^(k) of the selection operator, stored as the
// 1-based row position of each column's single nonzero. Column l of S^(k)
// is the standard basis vector picking observation l's k-th index.
struct FactoredSelection {
  Dims dims;
  std::vector<std::vector<Index>> rows;  // rows[k][l]

  Index mode_count() const { return static_cast<Index>(rows.size()); }
  Index observation_count() const {
    return rows.empty() ? 0 : static_cast<Index>(rows[0].size());
  }
  // Dense I_k x N binary factor, for oracles and small-scale checks.
  Eigen::MatrixXd dense_factor(Index k) const;
};

FactoredSelection build_selection(const ObservationSet& obs);

// Splits every index component through the per-mode factor lists, which must
// refine dims mode-by-mode in order. Values are unchanged and the global
// column-major linear index of each observation is preserved.
ObservationSet remap_observations(const ObservationSet& obs,
                                  const std::vector<Dims>& mode_factors);

// Deterministic disjoint split; the validation part has round(fraction * N)
// entries. Requires 0 < fraction < 1.
std::pair<ObservationSet, ObservationSet> holdout_split(
    const ObservationSet& obs, double fraction, std::uint64_t seed);

// Gathers values for the given index list from a dense tensor.
ObservationSet gather(const DenseTensor& t,
                      const std::vector<MultiIndex>& indices);

}  // namespace ttc
