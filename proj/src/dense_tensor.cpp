#include "ttc/dense_tensor.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <stdexcept>

namespace ttc {

namespace detail {
void fail(const std::string& what) { throw std::domain_error(what); }
}  // namespace detail

Index product(const Dims& dims) {
  Index p = 1;
  for (Index d : dims) p *= d;
  return p;
}

namespace {
void check_dims(const Dims& dims) {
  if (dims.empty()) detail::fail("tensor order must be at least 1");
  for (Index d : dims)
    if (d < 1) detail::fail("tensor dimensions must be positive");
}
}  // namespace

DenseTensor::DenseTensor(Dims dims) : dims_(std::move(dims)) {
  check_dims(dims_);
  data_ = Eigen::VectorXd::Zero(product(dims_));
}

DenseTensor::DenseTensor(Dims dims, Eigen::VectorXd data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  check_dims(dims_);
  if (data_.size() != product(dims_))
    detail::fail("data length does not match product of dims");
}

DenseTensor DenseTensor::constant(Dims dims, double value) {
  check_dims(dims);
  Index n = product(dims);
  return DenseTensor(std::move(dims), Eigen::VectorXd::Constant(n, value));
}

double DenseTensor::at(const MultiIndex& m) const {
  return data_[linear_index(m, dims_) - 1];
}

double& DenseTensor::at(const MultiIndex& m) {
  return data_[linear_index(m, dims_) - 1];
}

Eigen::Map<const Eigen::MatrixXd> DenseTensor::as_matrix(Index rows,
                                                         Index cols) const {
  if (rows * cols != data_.size())
    detail::fail("matrix view does not cover the tensor data");
  return {data_.data(), rows, cols};
}

Eigen::Map<Eigen::MatrixXd> DenseTensor::as_matrix(Index rows, Index cols) {
  if (rows * cols != data_.size())
    detail::fail("matrix view does not cover the tensor data");
  return {data_.data(), rows, cols};
}

Index linear_index(const MultiIndex& m, const Dims& dims) {
  if (m.size() != dims.size())
    detail::fail("multi-index order does not match dims");
  Index i = 0;
  Index stride = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (m[k] < 1 || m[k] > dims[k])
      detail::fail("multi-index component out of range");
    i += (m[k] - 1) * stride;
    stride *= dims[k];
  }
  return i + 1;
}

MultiIndex multi_index(Index i, const Dims& dims) {
  check_dims(dims);
  if (i < 1 || i > product(dims)) detail::fail("linear index out of range");
  MultiIndex m(dims.size());
  Index rem = i - 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    m[k] = rem % dims[k] + 1;
    rem /= dims[k];
  }
  return m;
}

DenseTensor reshape(const DenseTensor& t, Dims new_dims) {
  check_dims(new_dims);
  if (product(new_dims) != t.size())
    detail::fail("reshape changes the number of elements");
  return DenseTensor(std::move(new_dims), t.data());
}

DenseTensor permute(const DenseTensor& t, const std::vector<Index>& order) {
  const Dims& dims = t.dims();
  const Index d = t.order();
  if (static_cast<Index>(order.size()) != d)
    detail::fail("permutation order does not match tensor order");
  std::vector<bool> seen(d, false);
  Dims new_dims(d);
  for (Index j = 0; j < d; ++j) {
    Index src = order[j];
    if (src < 1 || src > d || seen[src - 1]) detail::fail("invalid permutation");
    seen[src - 1] = true;
    new_dims[j] = dims[src - 1];
  }

  // Strides of each source mode in the source layout.
  std::vector<Index> src_stride(d);
  Index s = 1;
  for (Index k = 0; k < d; ++k) {
    src_stride[k] = s;
    s *= dims[k];
  }

  DenseTensor out(new_dims);
  const Index n = t.size();
  std::vector<Index> counter(d, 0);  // 0-based index over new_dims
  Index src = 0;
  for (Index flat = 0; flat < n; ++flat) {
    out[flat] = t[src];
    for (Index j = 0; j < d; ++j) {
      ++counter[j];
      src += src_stride[order[j] - 1];
      if (counter[j] < new_dims[j]) break;
      src -= counter[j] * src_stride[order[j] - 1];
      counter[j] = 0;
    }
  }
  return out;
}

DenseTensor mode_product(const DenseTensor& t, const Eigen::MatrixXd& u,
                         Index mode) {
  const Dims& dims = t.dims();
  if (mode < 1 || mode > t.order()) detail::fail("mode out of range");
  const Index ik = dims[mode - 1];
  if (u.cols() != ik)
    detail::fail("matrix columns do not match the tensor mode dimension");
  const Index j = u.rows();

  Index left = 1, right = 1;
  for (Index k = 0; k < mode - 1; ++k) left *= dims[k];
  for (Index k = mode; k < t.order(); ++k) right *= dims[k];

  Dims new_dims = dims;
  new_dims[mode - 1] = j;
  DenseTensor out(new_dims);
  for (Index r = 0; r < right; ++r) {
    Eigen::Map<const Eigen::MatrixXd> slab(t.data().data() + r * left * ik,
                                           left, ik);
    Eigen::Map<Eigen::MatrixXd> dst(out.data().data() + r * left * j, left, j);
    dst = slab * u.transpose();
  }
  return out;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c) {
  return Eigen::kroneckerProduct(a, c);
}

Eigen::MatrixXd khatri_rao(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c) {
  if (a.cols() != c.cols())
    detail::fail("Khatri-Rao factors must have equal column counts");
  Eigen::MatrixXd out(a.rows() * c.rows(), a.cols());
  for (Index m = 0; m < a.cols(); ++m)
    out.col(m) = Eigen::kroneckerProduct(a.col(m), c.col(m)).eval();
  return out;
}

}  // namespace ttc
