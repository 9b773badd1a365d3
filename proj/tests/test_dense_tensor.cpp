#include "doctest.h"
#include "test_helpers.hpp"
#include "ttc/dense_tensor.hpp"
#include "ttc/rng.hpp"
#include "ttc/synth.hpp"

using namespace ttc;

TEST_CASE("linear_index matches column-major enumeration") {
  const Dims dims{3, 4, 2};
  CHECK(linear_index({1, 1, 1}, dims) == 1);
  CHECK(linear_index({3, 4, 2}, dims) == 24);

  auto positions = oracle::enumerate_positions(dims);
  Index expected = 0;
  for (std::size_t i = 0; i < positions.size(); ++i)
    if (positions[i] == MultiIndex{2, 1, 2}) expected = static_cast<Index>(i) + 1;
  CHECK(expected == 14);
  CHECK(linear_index({2, 1, 2}, dims) == 14);
}

TEST_CASE("multi_index inverts linear_index") {
  const Dims dims{3, 4, 2};
  CHECK(multi_index(1, dims) == MultiIndex{1, 1, 1});
  CHECK(multi_index(24, dims) == MultiIndex{3, 4, 2});
  CHECK(multi_index(14, dims) == MultiIndex{2, 1, 2});
  CHECK_THROWS_AS(multi_index(0, dims), std::domain_error);
  CHECK_THROWS_AS(multi_index(25, dims), std::domain_error);
  CHECK_THROWS_AS(linear_index({4, 1, 1}, dims), std::domain_error);
}

TEST_CASE("index maps are mutually inverse, exhaustively") {
  for (const Dims& dims :
       {Dims{7}, Dims{2, 3}, Dims{3, 4, 2}, Dims{2, 2, 2, 2, 2}, Dims{10, 10, 10}}) {
    auto positions = oracle::enumerate_positions(dims);
    for (Index i = 1; i <= product(dims); ++i) {
      CHECK(multi_index(i, dims) == positions[i - 1]);
      CHECK(linear_index(multi_index(i, dims), dims) == i);
    }
  }
}

TEST_CASE("reshape keeps the flat data") {
  rng::Engine g = rng::make_engine(11);
  DenseTensor t = random_tensor({3, 4}, g);
  DenseTensor v = reshape(t, {12});
  CHECK(v.data() == t.data());
  CHECK_THROWS_AS(reshape(t, Dims{5, 2}), std::domain_error);
  CHECK(reshape(t, t.dims()).data() == t.data());

  DenseTensor cube = random_tensor({2, 2, 2}, g);
  DenseTensor m = reshape(cube, {4, 2});
  CHECK(m.at({1, 1}) == cube.at({1, 1, 1}));
  CHECK(m.at({2, 1}) == cube.at({2, 1, 1}));
  CHECK(m.at({3, 1}) == cube.at({1, 2, 1}));
  CHECK(m.at({4, 1}) == cube.at({2, 2, 1}));
}

TEST_CASE("mode_product") {
  rng::Engine g = rng::make_engine(7);
  DenseTensor t = random_tensor({3, 4, 2}, g);

  SUBCASE("identity leaves the tensor unchanged") {
    for (Index k = 1; k <= 3; ++k) {
      DenseTensor u =
          mode_product(t, Eigen::MatrixXd::Identity(t.dims()[k - 1], t.dims()[k - 1]), k);
      CHECK((u.data() - t.data()).norm() == doctest::Approx(0.0));
    }
  }
  SUBCASE("summation definition on an all-ones tensor") {
    DenseTensor ones = DenseTensor::constant({2, 2}, 1.0);
    Eigen::MatrixXd u(1, 2);
    u << 1.0, 1.0;
    DenseTensor r = mode_product(ones, u, 1);
    CHECK(r.dims() == Dims{1, 2});
    CHECK(r.at({1, 1}) == doctest::Approx(2.0));
    CHECK(r.at({1, 2}) == doctest::Approx(2.0));
  }
  SUBCASE("vector case collapses to matrix-vector product") {
    DenseTensor v = random_tensor({4}, g);
    Eigen::MatrixXd u = Eigen::MatrixXd::Random(3, 4);
    DenseTensor r = mode_product(v, u, 1);
    CHECK((r.data() - u * v.data()).norm() < 1e-14);
  }
  SUBCASE("entrywise against the k-mode definition") {
    Eigen::MatrixXd u = Eigen::MatrixXd::Random(5, 4);
    DenseTensor r = mode_product(t, u, 2);
    CHECK(r.dims() == Dims{3, 5, 2});
    for (Index i = 1; i <= 3; ++i)
      for (Index j = 1; j <= 5; ++j)
        for (Index k = 1; k <= 2; ++k) {
          double sum = 0;
          for (Index q = 1; q <= 4; ++q) sum += u(j - 1, q - 1) * t.at({i, q, k});
          CHECK(r.at({i, j, k}) == doctest::Approx(sum));
        }
  }
  CHECK_THROWS_AS(mode_product(t, Eigen::MatrixXd::Identity(3, 3), 2),
                  std::domain_error);
}

TEST_CASE("kron") {
  CHECK((kron(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(3, 3)) -
         Eigen::MatrixXd::Identity(6, 6))
            .norm() == 0.0);
  Eigen::MatrixXd a(1, 2), c(2, 1);
  a << 1, 2;
  c << 3, 4;
  Eigen::MatrixXd k = kron(a, c);
  CHECK(k.rows() == 2);
  CHECK(k.cols() == 2);
  CHECK(k(0, 0) == 3);
  CHECK(k(1, 0) == 4);
  CHECK(k(0, 1) == 6);
  CHECK(k(1, 1) == 8);
  Eigen::MatrixXd one(1, 1);
  one << 2.5;
  CHECK((kron(one, c) - 2.5 * c).norm() == 0.0);
}

TEST_CASE("khatri_rao columns are columnwise Kronecker products") {
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd k = khatri_rao(id, id);
  Eigen::VectorXd e1(4), e4(4);
  e1 << 1, 0, 0, 0;
  e4 << 0, 0, 0, 1;
  CHECK((k.col(0) - e1).norm() == 0.0);
  CHECK((k.col(1) - e4).norm() == 0.0);

  Eigen::MatrixXd a = Eigen::MatrixXd::Random(2, 3);
  Eigen::MatrixXd c = Eigen::MatrixXd::Random(3, 3);
  Eigen::MatrixXd kr = khatri_rao(a, c);
  for (Index m = 0; m < 3; ++m)
    CHECK((kr.col(m) - kron(a.col(m), c.col(m)).col(0)).norm() < 1e-15);

  // single columns collapse to a plain Kronecker product
  Eigen::MatrixXd av = Eigen::MatrixXd::Random(4, 1);
  Eigen::MatrixXd cv = Eigen::MatrixXd::Random(2, 1);
  CHECK((khatri_rao(av, cv) - kron(av, cv)).norm() == 0.0);

  CHECK_THROWS_AS(khatri_rao(a, Eigen::MatrixXd::Random(3, 2)),
                  std::domain_error);
}

TEST_CASE("permute reorders modes") {
  rng::Engine g = rng::make_engine(3);
  DenseTensor t = random_tensor({2, 3, 4}, g);
  DenseTensor p = permute(t, {3, 1, 2});
  CHECK(p.dims() == Dims{4, 2, 3});
  for (Index i = 1; i <= 2; ++i)
    for (Index j = 1; j <= 3; ++j)
      for (Index k = 1; k <= 4; ++k) CHECK(p.at({k, i, j}) == t.at({i, j, k}));
  // round trip through the inverse permutation
  DenseTensor back = permute(p, {2, 3, 1});
  CHECK((back.data() - t.data()).norm() == 0.0);
}
