#pragma once

#include "ttc/als_solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ttc {

struct FactorizationReport {
  std::vector<Dims> mode_factors;
  std::vector<std::string> warnings;  // primes above max_factor, cap advice
};

// Greedy largest-first merge of each dimension's prime factors into chunks of
// at most max_factor. A prime above max_factor stays as its own (oversized)
// factor and is reported; zero-padding is left to the caller since it changes
// metric normalization. problem_cap only feeds the warning text for the
// implied R_k R_{k+1} budget.
FactorizationReport factorize_dims(const Dims& dims, Index max_factor = 10,
                                   Index problem_cap = 4000);

std::vector<Index> prime_factors(Index n);

// Plateau rank schedule over the chain: R_2 = r2, then
// R_{k+1} = min(R_k I_k, rmid) for the interior, with the last two bonds
// overridden by r_dm1 / rd when positive. Everything is clamped to chain
// feasibility afterwards.
std::vector<Index> rank_schedule(const Dims& chain_dims, Index r2, Index rmid,
                                 Index r_dm1 = 0, Index rd = 0);

struct RankCandidate {
  Index r2 = 0, rmid = 0, r_dm1 = 0, rd = 0;
};

struct CandidateScore {
  RankCandidate candidate;
  std::vector<Index> ranks;  // resolved schedule
  double mean_rse = 0.0;     // held-out, averaged over trials
  Index parameter_count = 0;
};

struct CrossValidationResult {
  std::size_t best = 0;  // index into scores
  std::vector<CandidateScore> scores;
};

// Averages the held-out RSE of each candidate over `trials` fresh splits and
// picks the argmin; ties break toward fewer parameters.
CrossValidationResult cross_validate(const ObservationSet& obs,
                                     const std::vector<Dims>& mode_factors,
                                     const std::vector<RankCandidate>& candidates,
                                     const SolverOptions& solver_options,
                                     Index trials, double holdout_fraction,
                                     std::uint64_t seed);

}  // namespace ttc
