#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace ttc {

using Index = Eigen::Index;

// Dimension list (I_1, ..., I_d).
using Dims = std::vector<Index>;

// 1-based multi-index (i_1, ..., i_d).
using MultiIndex = std::vector<Index>;

Index product(const Dims& dims);

// Dense d-way tensor with column-major linearization: the first index runs
// fastest, so the flat position of (i_1, ..., i_d) is
//   i_1 + (i_2 - 1) I_1 + (i_3 - 1) I_1 I_2 + ...
// All multi-indices at the API surface are 1-based.
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(Dims dims);  // zero-initialized
  DenseTensor(Dims dims, Eigen::VectorXd data);

  static DenseTensor constant(Dims dims, double value);

  const Dims& dims() const { return dims_; }
  Index order() const { return static_cast<Index>(dims_.size()); }
  Index size() const { return data_.size(); }

  const Eigen::VectorXd& data() const { return data_; }
  Eigen::VectorXd& data() { return data_; }

  double at(const MultiIndex& m) const;
  double& at(const MultiIndex& m);

  // Flat 0-based access (internal convenience; the 1-based contract lives in
  // linear_index / multi_index).
  double operator[](Index flat) const { return data_[flat]; }
  double& operator[](Index flat) { return data_[flat]; }

  // View of the flat data as a rows x cols column-major matrix.
  Eigen::Map<const Eigen::MatrixXd> as_matrix(Index rows, Index cols) const;
  Eigen::Map<Eigen::MatrixXd> as_matrix(Index rows, Index cols);

  double frobenius_norm() const { return data_.norm(); }

 private:
  Dims dims_;
  Eigen::VectorXd data_;
};

// Multi-index <-> linear index conversion, both 1-based.
Index linear_index(const MultiIndex& m, const Dims& dims);
MultiIndex multi_index(Index i, const Dims& dims);

// Dims replaced, flat data untouched. prod(new_dims) must match.
DenseTensor reshape(const DenseTensor& t, Dims new_dims);

// Reorders modes: result mode j is input mode order[j] (1-based entries).
DenseTensor permute(const DenseTensor& t, const std::vector<Index>& order);

// k-mode product t x_k u with u of shape J x I_k; mode is 1-based.
DenseTensor mode_product(const DenseTensor& t, const Eigen::MatrixXd& u,
                         Index mode);

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c);

// Columnwise Kronecker product of two matrices with equal column counts.
Eigen::MatrixXd khatri_rao(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c);

namespace detail {
[[noreturn]] void fail(const std::string& what);
}

}  // namespace ttc
