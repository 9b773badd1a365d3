#include "ttc/rank_planner.hpp"

#include <algorithm>
#include <cmath>

namespace ttc {

std::vector<Index> prime_factors(Index n) {
  if (n < 1) detail::fail("cannot factor a nonpositive number");
  std::vector<Index> out;
  for (Index p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  if (n > 1) out.push_back(n);
  return out;
}

FactorizationReport factorize_dims(const Dims& dims, Index max_factor,
                                   Index problem_cap) {
  if (max_factor < 2) detail::fail("max_factor must be at least 2");
  FactorizationReport report;
  for (Index dim : dims) {
    std::vector<Index> primes = prime_factors(dim);
    std::sort(primes.rbegin(), primes.rend());
    Dims chunks;
    for (Index p : primes) {
      if (p > max_factor) {
        report.warnings.push_back(
            "dimension " + std::to_string(dim) + " has prime factor " +
            std::to_string(p) + " above " + std::to_string(max_factor) +
            "; consider zero-padding to a composite size");
        chunks.push_back(p);
        continue;
      }
      // largest-first into the fullest chunk that still fits
      Index best = -1;
      for (std::size_t c = 0; c < chunks.size(); ++c)
        if (chunks[c] * p <= max_factor &&
            (best < 0 || chunks[c] > chunks[best]))
          best = static_cast<Index>(c);
      if (best >= 0)
        chunks[best] *= p;
      else
        chunks.push_back(p);
    }
    std::sort(chunks.rbegin(), chunks.rend());
    if (chunks.empty()) chunks.push_back(1);  // dim == 1
    report.mode_factors.push_back(std::move(chunks));
  }
  Index largest = 1;
  for (const Dims& f : report.mode_factors)
    for (Index c : f) largest = std::max(largest, c);
  if (largest * 1 * 1 > problem_cap)
    report.warnings.push_back(
        "a single core dimension already exceeds the problem-size cap " +
        std::to_string(problem_cap));
  return report;
}

std::vector<Index> rank_schedule(const Dims& chain_dims, Index r2, Index rmid,
                                 Index r_dm1, Index rd) {
  const Index d = static_cast<Index>(chain_dims.size());
  if (d < 2) return {};
  if (r2 < 1 || rmid < 1) detail::fail("rank schedule needs positive ranks");
  std::vector<Index> ranks(d - 1);  // R_2 .. R_d
  ranks[0] = r2;
  for (Index k = 1; k < d - 1; ++k)
    ranks[k] = std::min(ranks[k - 1] * chain_dims[k], rmid);
  if (d >= 3 && r_dm1 > 0) ranks[d - 3] = r_dm1;
  if (rd > 0) ranks[d - 2] = rd;
  return clamp_bond_ranks(chain_dims, std::move(ranks));
}

namespace {

Index parameter_count(const Dims& chain_dims, const std::vector<Index>& ranks) {
  Index total = 0;
  const Index d = static_cast<Index>(chain_dims.size());
  for (Index k = 0; k < d; ++k) {
    const Index rl = k == 0 ? 1 : ranks[k - 1];
    const Index rr = k == d - 1 ? 1 : ranks[k];
    total += rl * chain_dims[k] * rr;
  }
  return total;
}

}  // namespace

CrossValidationResult cross_validate(
    const ObservationSet& obs, const std::vector<Dims>& mode_factors,
    const std::vector<RankCandidate>& candidates,
    const SolverOptions& solver_options, Index trials,
    double holdout_fraction, std::uint64_t seed) {
  if (candidates.empty()) detail::fail("cross-validation needs candidates");
  if (trials < 1) detail::fail("cross-validation needs at least one trial");

  Dims chain_dims;
  for (const Dims& f : mode_factors)
    chain_dims.insert(chain_dims.end(), f.begin(), f.end());

  CrossValidationResult result;
  for (const RankCandidate& cand : candidates) {
    CandidateScore score;
    score.candidate = cand;
    score.ranks = rank_schedule(chain_dims, cand.r2, cand.rmid, cand.r_dm1,
                                cand.rd);
    score.parameter_count = parameter_count(chain_dims, score.ranks);
    double total = 0.0;
    for (Index t = 0; t < trials; ++t) {
      auto [train, validate] =
          holdout_split(obs, holdout_fraction, seed + static_cast<std::uint64_t>(t));
      CompletionProblem problem(train, mode_factors, score.ranks,
                                solver_options);
      CompletionResult run = complete(problem);
      const ObservationSet chain_val =
          remap_observations(validate, mode_factors);
      double err_sq = 0.0;
      for (Index l = 0; l < chain_val.size(); ++l) {
        const double e =
            tt_entry(run.tt, chain_val.index(l)) - chain_val.value(l);
        err_sq += e * e;
      }
      const double ref = chain_val.values().norm();
      total += std::sqrt(err_sq) / (ref > 0.0 ? ref : 1.0);
    }
    score.mean_rse = total / static_cast<double>(trials);
    result.scores.push_back(std::move(score));
  }
  result.best = 0;
  for (std::size_t i = 1; i < result.scores.size(); ++i) {
    const CandidateScore& a = result.scores[i];
    const CandidateScore& b = result.scores[result.best];
    if (a.mean_rse < b.mean_rse ||
        (a.mean_rse == b.mean_rse && a.parameter_count < b.parameter_count))
      result.best = i;
  }
  return result;
}

}  // namespace ttc
