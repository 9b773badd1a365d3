#pragma once

#include "ttc/dense_tensor.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ttc {

// Tensor train of a vector: d 3-way cores, core k stored as a DenseTensor of
// dims (R_k, I_k, R_{k+1}) with R_1 = R_{d+1} = 1. The represented entry at
// multi-index (i_1, ..., i_d) is the chain product of the core slices
// core_1(:, i_1, :) ... core_d(:, i_d, :).
//
// canonical_site is tracked metadata: when it equals k, cores 1..k-1 are
// left-orthogonal and cores k+1..d are right-orthogonal. Any core mutation
// outside the shift/solve operations must call invalidate_canonical().
struct TensorTrain {
  std::vector<DenseTensor> cores;
  std::optional<Index> canonical_site;  // 1-based

  Index order() const { return static_cast<Index>(cores.size()); }
  Dims mode_dims() const;
  Dims ranks() const;  // R_1 .. R_{d+1}
  void invalidate_canonical() { canonical_site.reset(); }

  // Throws if the rank chain is inconsistent or boundary ranks are not 1.
  void check_valid() const;
};

enum class Direction { Left, Right };

// View of core slice core(:, i, :) as an R_k x R_{k+1} matrix (i is 1-based).
Eigen::Map<const Eigen::MatrixXd, 0, Eigen::OuterStride<>> core_slice(
    const DenseTensor& core, Index i);

// TT-SVD truncated to the prescribed bond ranks R_2..R_d. Requested ranks are
// clamped to what the unfolding sizes admit; the returned train carries the
// actual ranks. Result is in site-d-mixed-canonical form.
TensorTrain tt_svd(const DenseTensor& t, const std::vector<Index>& bond_ranks);

DenseTensor contract_full(const TensorTrain& tt);

double tt_entry(const TensorTrain& tt, const MultiIndex& m);

// Moves the canonical site one core to the left or right via thin QR,
// absorbing the triangular factor into the neighbour. The represented tensor
// is unchanged. Requires canonical_site to be set; shifting past either end
// is an error.
void shift_canonical(TensorTrain& tt, Direction dir);

// Full re-canonicalization to the given site, making no assumption about the
// current orthogonality state.
void canonicalize(TensorTrain& tt, Index site);

// Frobenius norm of the represented tensor; requires canonical_site.
double tt_norm(const TensorTrain& tt);

// Largest admissible bond ranks for the dimension chain:
// R_{k+1} <= min(prod(dims[1..k]), prod(dims[k+1..d])).
std::vector<Index> max_bond_ranks(const Dims& dims);
std::vector<Index> clamp_bond_ranks(const Dims& dims, std::vector<Index> ranks);

// Tensor train matrix: core k has dims (R_k, J_k, I_k, R_{k+1}) where J_k is
// the output (row) dimension and I_k the input (column) dimension.
struct TTMatrix {
  std::vector<DenseTensor> cores;
  Dims row_dims;
  Dims col_dims;

  Index order() const { return static_cast<Index>(cores.size()); }
  Dims ranks() const;
};

TTMatrix ttm_identity(const Dims& dims);

// TT-SVD of a matrix with row/column indices paired up per core. Singular
// values below tol (relative to the largest of each unfolding) are dropped.
TTMatrix ttm_from_matrix(const Eigen::MatrixXd& m, const Dims& row_dims,
                         const Dims& col_dims, double tol);

// Applies a TT-matrix core-by-core; bond ranks multiply. The operator bond
// index runs fastest within each combined bond. canonical_site is dropped.
TensorTrain ttm_apply(const TTMatrix& w, const TensorTrain& tt);

Eigen::MatrixXd ttm_to_dense(const TTMatrix& w);

// Versioned binary serialization; round-trips losslessly.
void save_tt(const TensorTrain& tt, const std::string& path);
TensorTrain load_tt(const std::string& path);

}  // namespace ttc
