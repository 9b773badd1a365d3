#include "doctest.h"
#include "test_helpers.hpp"
#include "ttc/initializer.hpp"
#include "ttc/mask.hpp"
#include "ttc/rng.hpp"
#include "ttc/synth.hpp"

using namespace ttc;

TEST_CASE("constant image is reproduced exactly for any h") {
  const Dims dims{12, 12, 3};
  DenseTensor img = DenseTensor::constant(dims, 0.7);
  ObservationSet obs = gather(img, oracle::enumerate_positions(dims));
  for (Index h : {1, 2, 3}) {
    InterpOptions opts;
    opts.h = h;
    TensorTrain tt = interp_init(obs, {{3, 4}, {4, 3}, {3}}, {2, 2, 2, 2},
                                 opts);
    CHECK(*tt.canonical_site == tt.order());
    DenseTensor full = contract_full(tt);
    CHECK((full.data().array() - 0.7).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("h = 1 on fully observed data is tt_svd of the exact image") {
  rng::Engine g = rng::make_engine(31);
  const Dims dims{8, 8, 3};
  DenseTensor img = random_tensor(dims, g);
  ObservationSet obs = gather(img, oracle::enumerate_positions(dims));
  InterpOptions opts;
  opts.h = 1;
  TensorTrain tt = interp_init(obs, {{2, 4}, {4, 2}, {3}}, {2, 4, 4, 3}, opts);
  TensorTrain direct = tt_svd(reshape(img, {2, 4, 4, 2, 3}), {2, 4, 4, 3});
  CHECK(oracle::rel_error(contract_full(tt).data(),
                          contract_full(direct).data()) < 1e-12);
}

TEST_CASE("box downscale averages exactly the observed pixels per cell") {
  const Index n = 16, h = 4;
  DenseTensor img({n, n});
  for (Index i = 1; i <= n; ++i)
    for (Index j = 1; j <= n; ++j)
      img.at({i, j}) = static_cast<double>(i + 2 * j);  // synthetic gradient
  ObservationSet obs = gather(img, sample_entries({n, n}, 0.5, 5));
  DenseTensor w = box_downscale(obs, h, {true, true});
  REQUIRE(w.dims() == Dims{4, 4});

  for (Index ci = 1; ci <= 4; ++ci)
    for (Index cj = 1; cj <= 4; ++cj) {
      double sum = 0;
      Index count = 0;
      for (Index l = 0; l < obs.size(); ++l) {
        const MultiIndex& m = obs.index(l);
        if ((m[0] - 1) / h + 1 == ci && (m[1] - 1) / h + 1 == cj) {
          sum += obs.value(l);
          ++count;
        }
      }
      if (count > 0) CHECK(w.at({ci, cj}) == doctest::Approx(sum / count));
    }
}

TEST_CASE("empty boxes take the global observed mean") {
  // one observed pixel only: every other box must equal that value
  ObservationSet obs({8, 8}, {{1, 1}}, Eigen::VectorXd::Constant(1, 5.0));
  DenseTensor w = box_downscale(obs, 2, {true, true});
  CHECK((w.data().array() - 5.0).abs().maxCoeff() == 0.0);
}

TEST_CASE("too small modes are rejected") {
  ObservationSet obs({4, 4}, {{1, 1}}, Eigen::VectorXd::Ones(1));
  CHECK_THROWS_AS(box_downscale(obs, 3, {true, true}), std::domain_error);
}

TEST_CASE("default coarsening factor") {
  CHECK(default_h(1.0) == 2);
  CHECK(default_h(0.1) == 3);
  CHECK(default_h(0.01) == 10);
}

TEST_CASE("cubic resize preserves constants") {
  Eigen::MatrixXd u = cubic_resize_matrix(16, 4);
  CHECK((u.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("zero_fill_init") {
  const Dims dims{4, 4};
  SUBCASE("no observations give the zero train") {
    ObservationSet obs(dims, {}, Eigen::VectorXd(0));
    TensorTrain tt = zero_fill_init(obs, {{4}, {4}}, {2});
    CHECK(contract_full(tt).data().cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("fully observed equals tt_svd of the data") {
    rng::Engine g = rng::make_engine(33);
    DenseTensor t = random_tensor(dims, g);
    ObservationSet obs = gather(t, oracle::enumerate_positions(dims));
    TensorTrain tt = zero_fill_init(obs, {{4}, {4}}, {4});
    CHECK(oracle::rel_error(contract_full(tt).data(), t.data()) < 1e-12);
  }
  SUBCASE("half observed matches the dense construction") {
    rng::Engine g = rng::make_engine(34);
    DenseTensor t = random_tensor(dims, g);
    ObservationSet obs = gather(t, sample_entries(dims, 0.5, 8));
    DenseTensor filled(dims);
    for (Index l = 0; l < obs.size(); ++l)
      filled.at(obs.index(l)) = obs.value(l);
    TensorTrain tt = zero_fill_init(obs, {{2, 2}, {2, 2}}, {2, 4, 2});
    TensorTrain direct = tt_svd(reshape(filled, {2, 2, 2, 2}), {2, 4, 2});
    CHECK(oracle::rel_error(contract_full(tt).data(),
                            contract_full(direct).data()) < 1e-12);
  }
}
