#pragma once

#include "ttc/tensor_train.hpp"

#include <vector>

namespace ttc {

// Quadratic smoothness penalty lambda * ||A x_p D_p||_F^2 along one original
// tensor mode. D_p is the square first-difference matrix (last row zero) and
// tt_form is its TT-matrix over the mode's factored dimensions, spanning the
// chain positions [first_core, first_core + span - 1].
struct TVOperator {
  Index mode = 1;        // original tensor mode p
  Index first_core = 1;  // 1-based position of the first factor in the chain
  Eigen::MatrixXd dense;
  TTMatrix tt_form;
  double lambda = 1.0;

  Index span() const { return static_cast<Index>(tt_form.cores.size()); }
  Index last_core() const { return first_core + span() - 1; }
};

// D(i,i) = 1, D(i,i+1) = -1, bottom row zero.
Eigen::MatrixXd first_difference_matrix(Index n);

// Builds the dense and TT-matrix forms over the given factor list; the caller
// fills in mode / first_core / lambda for its chain layout.
TVOperator build_tv(Index mode_dim, const Dims& factors);

// Environment algebra for W_p^T W_p contractions. Environments are Gram
// matrices of the operator-applied chain to one side of a core; their
// combined bond index is (operator bond, train bond) with the operator bond
// running fastest. An identity-operator mode keeps the operator bond at 1.
namespace tv_env {

Eigen::MatrixXd initial();  // 1 x 1 ones, the boundary environment

// Absorbs one core (and its operator core, or nullptr for identity) into a
// left / right environment.
Eigen::MatrixXd extend_left(const Eigen::MatrixXd& env, const DenseTensor& core,
                            const DenseTensor* op_core);
Eigen::MatrixXd extend_right(const Eigen::MatrixXd& env,
                             const DenseTensor& core,
                             const DenseTensor* op_core);

// Assembles the (R_k I_k R_{k+1})^2 Gram matrix from the two environments and
// the centre operator core (nullptr for identity).
Eigen::MatrixXd gram(const Eigen::MatrixXd& left, const Eigen::MatrixXd& right,
                     Index r_left, Index phys, Index r_right,
                     const DenseTensor* op_core);

}  // namespace tv_env

// W_p^T W_p for the core at position k, computed by network contraction
// without forming W_p. Requires the train to be canonical at k; the
// identity-operator stretches on each canonical side collapse to identity
// environments and are skipped.
Eigen::MatrixXd gram_term(const TensorTrain& tt, const TVOperator& op,
                          Index k);

// ||A x_p D_p||_F^2 evaluated in train form.
double tv_value(const TensorTrain& tt, const TVOperator& op);

// Scales every weight by the current relative error on the observed entries;
// applied once per full iteration.
std::vector<double> adapt_lambda(const std::vector<double>& lambdas,
                                 double relative_observed_error);

}  // namespace ttc
