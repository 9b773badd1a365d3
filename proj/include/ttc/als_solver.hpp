#pragma once

#include "ttc/initializer.hpp"
#include "ttc/regularizers.hpp"
#include "ttc/sampling.hpp"
#include "ttc/tensor_train.hpp"

#include <optional>
#include <vector>

namespace ttc {

enum class InitMode { Interp, ZeroFill, Given };

struct SolverOptions {
  double gamma = 0.0;               // Tikhonov weight
  Index max_sweeps = 10;            // one sweep = backward + forward pass
  double residual_tolerance = 0.0;  // 0 disables early stopping
  bool lambda_adaptation = true;
  InitMode init_mode = InitMode::ZeroFill;
  InterpOptions interp;
};

// Completion of a tensor given observed entries, solved over the factored
// dimension chain under a fixed TT-rank schedule.
class CompletionProblem {
 public:
  CompletionProblem(ObservationSet observations,
                    std::vector<Dims> mode_factors,
                    std::vector<Index> bond_ranks, SolverOptions options = {});

  // Adds a TV penalty along an original tensor mode; the operator span on the
  // chain follows from the mode factor lists.
  void add_tv(Index mode, double lambda);

  // Use the supplied train as the starting point (sets InitMode::Given). Its
  // mode dimensions and ranks must match the problem.
  void set_initial(TensorTrain tt);

  const std::vector<Dims>& mode_factors() const { return mode_factors_; }
  const Dims& chain_dims() const { return chain_dims_; }
  const ObservationSet& observations() const { return chain_obs_; }
  const ObservationSet& original_observations() const { return original_obs_; }
  const std::vector<Index>& ranks() const { return ranks_; }  // R_2..R_d
  const std::vector<TVOperator>& tv() const { return tv_; }
  const SolverOptions& options() const { return options_; }
  SolverOptions& options() { return options_; }
  const std::optional<TensorTrain>& initial_tt() const { return initial_tt_; }

 private:
  std::vector<Dims> mode_factors_;
  Dims chain_dims_;
  ObservationSet original_obs_;
  ObservationSet chain_obs_;
  std::vector<Index> ranks_;
  std::vector<TVOperator> tv_;
  SolverOptions options_;
  std::optional<TensorTrain> initial_tt_;
};

// Matrix-output variant: the trailing n_grouped_modes share one observation
// pattern (a sensor mask), so their product C becomes the column dimension of
// a matrix right-hand side attached to the first chain core, whose dimension
// grows to f_1 * C. The ranks apply to the merged chain.
class GroupedProblem {
 public:
  GroupedProblem(ObservationSet observations, Index n_grouped_modes,
                 std::vector<Dims> spatial_mode_factors,
                 std::vector<Index> merged_bond_ranks,
                 SolverOptions options = {});

  const Dims& chain_dims() const { return chain_dims_; }
  const ObservationSet& expanded_observations() const { return expanded_; }
  const std::vector<Index>& ranks() const { return ranks_; }
  const SolverOptions& options() const { return options_; }
  Index group_size() const { return group_size_; }
  Index spatial_count() const { return n_spatial_; }
  const Eigen::MatrixXd& value_matrix() const { return y_; }
  const std::vector<Index>& first_mode_rows() const { return i1_; }
  double gamma() const { return options_.gamma; }

  // Initial train over the merged chain (dense fill, permute, tt_svd).
  TensorTrain initial_train() const;

  // Undoes the column merge: merged-chain tensor back to the original
  // (spatial..., grouped...) dimension order.
  DenseTensor ungroup(const DenseTensor& merged) const;

 private:
  Dims original_dims_;
  Dims spatial_dims_, grouped_dims_;
  std::vector<Dims> spatial_factors_;
  Index group_size_ = 1;   // C
  Index n_spatial_ = 0;    // N_sp
  Index f1_ = 1;           // first chain dimension before merging
  Dims chain_dims_;        // (f_1 * C, f_2, ..., f_M)
  std::vector<Index> ranks_;
  Eigen::MatrixXd y_;      // N_sp x C
  std::vector<Index> i1_;  // first chain index per spatial observation
  ObservationSet expanded_;
  ObservationSet original_;
  SolverOptions options_;
};

// Mid-sweep solver state: the train (canonical at `site`), the interface
// vectors a_{<k,l} / a_{>k,l} stored row-per-observation, the per-operator
// environment stacks, and the residual after every core update.
struct SweepState {
  TensorTrain tt;
  Index site = 1;
  std::vector<Eigen::MatrixXd> left;   // left[k-1]: N x R_k, valid for k <= site
  std::vector<Eigen::MatrixXd> right;  // right[k-1]: N x R_{k+1}, valid for k >= site
  std::vector<std::vector<Eigen::MatrixXd>> tv_left;   // [op][k-1]
  std::vector<std::vector<Eigen::MatrixXd>> tv_right;  // [op][k-1]
  std::vector<double> residual_history;  // ||S^T vec(A) - y||_2 per core update
  Index skipped_updates = 0;   // candidates rejected as numerical failures
  Index fallback_updates = 0;  // direct least-squares solves
};

struct HalfSweepRecord {
  Index sweep = 0;
  int half = 0;  // 0 backward, 1 forward
  double residual = 0.0;           // ||S^T vec(A) - y||_2
  double relative_residual = 0.0;  // divided by ||y||_2
  std::vector<double> lambdas;
  double seconds = 0.0;
};

struct Diagnostics {
  std::vector<HalfSweepRecord> half_sweeps;
  std::vector<double> core_update_residuals;
  Index sweeps_run = 0;
  bool converged = false;
  bool underdetermined = false;  // N below the smallest local system size
  Index skipped_updates = 0;
  Index fallback_updates = 0;
  std::vector<double> final_lambdas;
};

struct CompletionResult {
  TensorTrain tt;
  Diagnostics diagnostics;
};

struct CoreSolve {
  Eigen::VectorXd x;
  bool ok = false;
  bool used_lsq_fallback = false;
};

// Builds the initial train prescribed by the problem options (site-d form).
TensorTrain make_initial_tt(const CompletionProblem& p);

// Interface/environment stacks for a site-d canonical train.
SweepState make_state(const CompletionProblem& p, TensorTrain init);

// The N x (R_k I_k R_{k+1}) matrix of Eq-style rows
// a_{>k,l}^T kron s_l^{(k)T} kron a_{<k,l}^T; requires state canonical at k.
Eigen::MatrixXd build_local_matrix(const SweepState& s,
                                   const CompletionProblem& p, Index k);

// Normal-equation core solve: (B^T B + sum_p lambda_p G_p + gamma I + eps I)
// x = B^T y with eps = 1e-10 trace(B^T B) / n. Falls back to a direct
// least-squares solve when lambda = gamma = 0 and the Cholesky pivot ratio
// exceeds 1e8. ok = false flags a singular system (caller keeps the old core).
CoreSolve solve_core(const Eigen::MatrixXd& b, const Eigen::VectorXd& y,
                     const std::vector<Eigen::MatrixXd>& gram_terms,
                     const std::vector<double>& lambdas, double gamma);

// One full iteration: backward pass k = d..2, then forward pass k = 1..d-1,
// with QR re-canonicalization after every update.
void sweep(SweepState& s, const CompletionProblem& p);

CompletionResult complete(const CompletionProblem& p);
CompletionResult complete_grouped(const GroupedProblem& p);

}  // namespace ttc
