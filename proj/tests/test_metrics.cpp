#include "doctest.h"
#include "ttc/metrics.hpp"
#include "ttc/rng.hpp"
#include "ttc/synth.hpp"

#include <cmath>
#include <limits>

using namespace ttc;

namespace {
DenseTensor vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return DenseTensor({2}, v);
}
}  // namespace

TEST_CASE("rse unit examples") {
  DenseTensor truth = vec2(3, 4);
  CHECK(rse(truth, truth) == 0.0);
  CHECK(rse(truth, vec2(0, 0)) == doctest::Approx(1.0));
  CHECK(rse(truth, vec2(3, 0)) == doctest::Approx(4.0 / 5.0));
}

TEST_CASE("psnr unit examples") {
  // a single entry off by one gives MSE = 1
  DenseTensor truth({1}, Eigen::VectorXd::Constant(1, 10.0));
  DenseTensor est({1}, Eigen::VectorXd::Constant(1, 9.0));
  CHECK(psnr(truth, est, 255.0) == doctest::Approx(48.1308).epsilon(1e-5));
  CHECK(std::isinf(psnr(truth, truth, 255.0)));

  // doubling the MSE costs 10 log10(2) dB
  DenseTensor est2({1}, Eigen::VectorXd::Constant(1, 10.0 - std::sqrt(2.0)));
  CHECK(psnr(truth, est, 255.0) - psnr(truth, est2, 255.0) ==
        doctest::Approx(10.0 * std::log10(2.0)).epsilon(1e-10));
}

TEST_CASE("rse is scale invariant and psnr decreases with error") {
  rng::Engine g = rng::make_engine(61);
  for (int rep = 0; rep < 100; ++rep) {
    DenseTensor t = random_tensor({3, 3}, g);
    DenseTensor e = random_tensor({3, 3}, g);
    const double c = 0.1 + 5.0 * rng::uniform(g);
    DenseTensor tc({3, 3}, c * t.data());
    DenseTensor ec({3, 3}, c * e.data());
    CHECK(rse(tc, ec) == doctest::Approx(rse(t, e)).epsilon(1e-12));

    // inflate the error and expect a strictly lower psnr
    DenseTensor worse({3, 3}, t.data() + 2.0 * (e.data() - t.data()));
    CHECK(psnr(t, worse, 1.0) < psnr(t, e, 1.0));
  }
}
