#include "doctest.h"
#include "test_helpers.hpp"
#include "ttc/mask.hpp"
#include "ttc/rng.hpp"
#include "ttc/sampling.hpp"
#include "ttc/synth.hpp"

#include <set>

using namespace ttc;

TEST_CASE("selection matrices of the worked 3x4x2 example") {
  std::vector<MultiIndex> idx{{2, 1, 2}, {1, 3, 1}, {3, 4, 2}};
  ObservationSet obs({3, 4, 2}, idx, Eigen::VectorXd::Zero(3));
  FactoredSelection sel = build_selection(obs);
  CHECK(sel.rows[0] == std::vector<Index>{2, 1, 3});
  CHECK(sel.rows[1] == std::vector<Index>{1, 3, 4});
  CHECK(sel.rows[2] == std::vector<Index>{2, 1, 2});

  Eigen::MatrixXd s1 = sel.dense_factor(1);
  CHECK(s1.rows() == 3);
  CHECK(s1.cols() == 3);
  CHECK(s1(1, 0) == 1.0);
  CHECK(s1.col(0).sum() == 1.0);
}

TEST_CASE("single observation at the first corner") {
  ObservationSet obs({2, 3, 4}, {{1, 1, 1}}, Eigen::VectorXd::Ones(1));
  FactoredSelection sel = build_selection(obs);
  for (Index k = 1; k <= 3; ++k) {
    Eigen::MatrixXd s = sel.dense_factor(k);
    CHECK(s(0, 0) == 1.0);
    CHECK(s.col(0).sum() == 1.0);
  }
}

TEST_CASE("assembled Khatri-Rao selection gathers entries") {
  rng::Engine g = rng::make_engine(21);
  const Dims dims{2, 3, 2};
  DenseTensor a = random_tensor(dims, g);
  std::vector<MultiIndex> idx{{2, 3, 1}, {1, 1, 2}, {2, 2, 2}, {1, 3, 1}};
  ObservationSet obs = gather(a, idx);
  FactoredSelection sel = build_selection(obs);
  // reversed Kronecker order matches the column-major index map
  Eigen::MatrixXd s = khatri_rao(khatri_rao(sel.dense_factor(3),
                                            sel.dense_factor(2)),
                                 sel.dense_factor(1));
  Eigen::VectorXd picked = s.transpose() * a.data();
  CHECK((picked - obs.values()).norm() == 0.0);
}

TEST_CASE("selection gather property on random instances") {
  rng::Engine g = rng::make_engine(22);
  for (int rep = 0; rep < 10; ++rep) {
    const Dims dims{static_cast<Index>(2 + rng::next_below(g, 4)),
                    static_cast<Index>(2 + rng::next_below(g, 4)),
                    static_cast<Index>(2 + rng::next_below(g, 4))};
    DenseTensor a = random_tensor(dims, g);
    auto idx = sample_entries(dims, 0.3, 1000 + rep);
    ObservationSet obs = gather(a, idx);
    FactoredSelection sel = build_selection(obs);
    Eigen::MatrixXd s = sel.dense_factor(3);
    s = khatri_rao(s, sel.dense_factor(2));
    s = khatri_rao(s, sel.dense_factor(1));
    CHECK((s.transpose() * a.data() - obs.values()).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("duplicate observations are rejected") {
  std::vector<MultiIndex> idx{{1, 1}, {2, 1}, {1, 1}};
  CHECK_THROWS_AS(ObservationSet({2, 2}, idx, Eigen::VectorXd::Zero(3)),
                  std::domain_error);
}

TEST_CASE("remap_observations") {
  SUBCASE("trivial refinement is the identity") {
    ObservationSet obs({4, 3}, {{3, 2}}, Eigen::VectorXd::Ones(1));
    ObservationSet r = remap_observations(obs, {{4}, {3}});
    CHECK(r.dims() == Dims{4, 3});
    CHECK(r.index(0) == MultiIndex{3, 2});
  }
  SUBCASE("splitting a single mode") {
    ObservationSet obs({4}, {{3}}, Eigen::VectorXd::Ones(1));
    ObservationSet r = remap_observations(obs, {{2, 2}});
    CHECK(r.index(0) == MultiIndex{1, 2});
  }
  SUBCASE("remap preserves global linear indices") {
    rng::Engine g = rng::make_engine(23);
    const Dims dims{4, 6};
    DenseTensor a = random_tensor(dims, g);
    ObservationSet obs = gather(a, sample_entries(dims, 0.5, 77));
    ObservationSet r = remap_observations(obs, {{2, 2}, {3, 2}});
    CHECK(r.dims() == Dims{2, 2, 3, 2});
    for (Index l = 0; l < obs.size(); ++l)
      CHECK(linear_index(r.index(l), r.dims()) ==
            linear_index(obs.index(l), obs.dims()));
  }
  SUBCASE("bad refinement is rejected") {
    ObservationSet obs({4}, {{1}}, Eigen::VectorXd::Ones(1));
    CHECK_THROWS_AS(remap_observations(obs, {{3}}), std::domain_error);
  }
}

TEST_CASE("holdout_split") {
  rng::Engine g = rng::make_engine(24);
  DenseTensor a = random_tensor({5, 4}, g);
  ObservationSet obs = gather(a, sample_entries({5, 4}, 0.5, 3));
  REQUIRE(obs.size() == 10);

  CHECK_THROWS_AS(holdout_split(obs, 0.0, 1), std::domain_error);
  CHECK_THROWS_AS(holdout_split(obs, 1.0, 1), std::domain_error);

  auto [train, validate] = holdout_split(obs, 0.1, 42);
  CHECK(validate.size() == 1);
  CHECK(train.size() == 9);

  auto [train2, validate2] = holdout_split(obs, 0.1, 42);
  CHECK(validate2.index(0) == validate.index(0));
  CHECK((train2.values() - train.values()).norm() == 0.0);

  // disjoint union equals the input
  std::set<Index> seen;
  for (Index l = 0; l < train.size(); ++l)
    seen.insert(linear_index(train.index(l), obs.dims()));
  for (Index l = 0; l < validate.size(); ++l)
    seen.insert(linear_index(validate.index(l), obs.dims()));
  CHECK(seen.size() == 10);
}
