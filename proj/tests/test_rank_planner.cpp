#include "doctest.h"
#include "test_helpers.hpp"
#include "ttc/rank_planner.hpp"
#include "ttc/synth.hpp"

#include <algorithm>

using namespace ttc;

TEST_CASE("prime factorizations of the video dimensions") {
  CHECK(prime_factors(360) == std::vector<Index>{2, 2, 2, 3, 3, 5});
  CHECK(prime_factors(640) == std::vector<Index>{2, 2, 2, 2, 2, 2, 2, 5});
  CHECK(prime_factors(144) == std::vector<Index>{2, 2, 2, 2, 3, 3});
}

TEST_CASE("factorize_dims multiplies back and respects the factor bound") {
  for (Index max_factor : {Index(9), Index(10)}) {
    FactorizationReport r =
        factorize_dims({360, 640, 144, 3}, max_factor);
    REQUIRE(r.mode_factors.size() == 4);
    Index largest = 0;
    for (std::size_t m = 0; m < 4; ++m) {
      CHECK(product(r.mode_factors[m]) == Dims{360, 640, 144, 3}[m]);
      for (Index f : r.mode_factors[m]) largest = std::max(largest, f);
    }
    CHECK(largest <= max_factor);
    CHECK(r.warnings.empty());
  }
}

TEST_CASE("the published 11-core video split is admissible") {
  const Dims split{9, 8, 5, 4, 4, 5, 8, 4, 6, 6, 3};
  CHECK(9 * 8 * 5 == 360);
  CHECK(4 * 4 * 5 * 8 == 640);
  CHECK(4 * 6 * 6 == 144);
  for (Index f : split) CHECK(f <= 10);
}

TEST_CASE("small dimensions pass through unchanged") {
  FactorizationReport r = factorize_dims({7, 3});
  CHECK(r.mode_factors[0] == Dims{7});
  CHECK(r.mode_factors[1] == Dims{3});
}

TEST_CASE("oversized primes are kept and reported") {
  FactorizationReport r = factorize_dims({26});
  CHECK(!r.warnings.empty());
  CHECK(product(r.mode_factors[0]) == 26);
}

TEST_CASE("rank_schedule reproduces the published plateau") {
  const Dims chain{9, 8, 5, 4, 4, 5, 8, 4, 6, 6, 3};
  std::vector<Index> ranks = rank_schedule(chain, 5, 5, 5, 3);
  REQUIRE(ranks.size() == 10);
  for (int k = 0; k <= 7; ++k) CHECK(ranks[k] == 5);  // R_2..R_9
  CHECK(ranks[8] == 5);                               // R_10
  CHECK(ranks[9] == 3);                               // R_11
}

TEST_CASE("rank_schedule edge behavior") {
  CHECK(rank_schedule({4, 4, 4}, 1, 1) == std::vector<Index>{1, 1});
  CHECK(rank_schedule({2, 2, 2}, 100, 100) == std::vector<Index>{2, 2});
  // never exceeds R_k I_k going right or the chain product bound
  const Dims chain{3, 5, 2, 4};
  std::vector<Index> r = rank_schedule(chain, 2, 50);
  // R_3 = min(2*5, 50) = 10 then clamped to min(15, 2*4) = 8
  CHECK(r == std::vector<Index>{2, 8, 4});
}

TEST_CASE("cross_validate") {
  const Dims dims{4, 4, 4};
  SynthInstance inst = synth_instance(dims, {2, 2}, 0.8, 2024);
  SolverOptions opts;
  opts.max_sweeps = 10;

  SUBCASE("a single candidate is returned with its score") {
    CrossValidationResult r =
        cross_validate(inst.observations, {{4}, {4}, {4}},
                       {RankCandidate{2, 2, 0, 0}}, opts, 2, 0.1, 5);
    CHECK(r.best == 0);
    CHECK(r.scores.size() == 1);
    CHECK(std::isfinite(r.scores[0].mean_rse));
  }
  SUBCASE("the true rank schedule beats rank one") {
    CrossValidationResult r = cross_validate(
        inst.observations, {{4}, {4}, {4}},
        {RankCandidate{1, 1, 0, 0}, RankCandidate{2, 2, 0, 0}}, opts, 3, 0.1,
        5);
    CHECK(r.best == 1);
    CHECK(r.scores[1].mean_rse < r.scores[0].mean_rse);
  }
  SUBCASE("scores are reproducible under a fixed seed") {
    auto run = [&] {
      return cross_validate(inst.observations, {{4}, {4}, {4}},
                            {RankCandidate{2, 2, 0, 0}}, opts, 2, 0.1, 9);
    };
    CHECK(run().scores[0].mean_rse == run().scores[0].mean_rse);
  }
  SUBCASE("an empty candidate list is rejected") {
    CHECK_THROWS_AS(cross_validate(inst.observations, {{4}, {4}, {4}}, {},
                                   opts, 2, 0.1, 5),
                    std::domain_error);
  }
}
