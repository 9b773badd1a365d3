#include "ttc/regularizers.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace ttc {

Eigen::MatrixXd first_difference_matrix(Index n) {
  if (n < 1) detail::fail("difference matrix needs a positive dimension");
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) {
    d(i, i) = 1.0;
    d(i, i + 1) = -1.0;
  }
  return d;
}

TVOperator build_tv(Index mode_dim, const Dims& factors) {
  if (product(factors) != mode_dim)
    detail::fail("factors do not multiply back to the mode dimension");
  TVOperator op;
  op.dense = first_difference_matrix(mode_dim);
  op.tt_form = ttm_from_matrix(op.dense, factors, factors, 1e-12);
  return op;
}

namespace tv_env {

namespace {

// Operator-applied core: E((rho, r), o, (rho', r')) with the operator bond
// fastest in each combined index. For an identity operator this is the core
// itself.
DenseTensor applied_core(const DenseTensor& core, const DenseTensor* op_core) {
  if (!op_core) return core;
  const Index p = op_core->dims()[0], out = op_core->dims()[1],
              in = op_core->dims()[2], pn = op_core->dims()[3];
  const Index r = core.dims()[0], rn = core.dims()[2];
  if (core.dims()[1] != in) detail::fail("operator core dimension mismatch");
  DenseTensor e(Dims{p * r, out, pn * rn});
  const double* vd = op_core->data().data();
  const double* ad = core.data().data();
  double* ed = e.data().data();
  for (Index rr2 = 0; rr2 < rn; ++rr2)
    for (Index pp2 = 0; pp2 < pn; ++pp2)
      for (Index o = 0; o < out; ++o)
        for (Index rr = 0; rr < r; ++rr)
          for (Index pp = 0; pp < p; ++pp) {
            double sum = 0.0;
            for (Index i = 0; i < in; ++i)
              sum += vd[pp + p * (o + out * (i + in * pp2))] *
                     ad[rr + r * (i + in * rr2)];
            ed[(pp + p * rr) + (p * r) * (o + out * (pp2 + pn * rr2))] = sum;
          }
  return e;
}

Eigen::Map<const Eigen::MatrixXd, 0, Eigen::OuterStride<>> applied_slice(
    const DenseTensor& e, Index o) {  // o is 0-based here
  return {e.data().data() + o * e.dims()[0], e.dims()[0], e.dims()[2],
          Eigen::OuterStride<>(e.dims()[0] * e.dims()[1])};
}

// Block of an environment for fixed operator-bond values.
Eigen::MatrixXd bond_block(const Eigen::MatrixXd& env, Index p, Index rho1,
                           Index rho2) {
  const Index r = env.rows() / p;
  Eigen::MatrixXd b(r, r);
  for (Index s = 0; s < r; ++s)
    for (Index t = 0; t < r; ++t) b(s, t) = env(rho1 + s * p, rho2 + t * p);
  return b;
}

}  // namespace

Eigen::MatrixXd initial() { return Eigen::MatrixXd::Ones(1, 1); }

Eigen::MatrixXd extend_left(const Eigen::MatrixXd& env,
                            const DenseTensor& core,
                            const DenseTensor* op_core) {
  DenseTensor e = applied_core(core, op_core);
  if (env.rows() != e.dims()[0]) detail::fail("environment size mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(e.dims()[2], e.dims()[2]);
  for (Index o = 0; o < e.dims()[1]; ++o) {
    auto slice = applied_slice(e, o);
    out.noalias() += slice.transpose() * env * slice;
  }
  return out;
}

Eigen::MatrixXd extend_right(const Eigen::MatrixXd& env,
                             const DenseTensor& core,
                             const DenseTensor* op_core) {
  DenseTensor e = applied_core(core, op_core);
  if (env.rows() != e.dims()[2]) detail::fail("environment size mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(e.dims()[0], e.dims()[0]);
  for (Index o = 0; o < e.dims()[1]; ++o) {
    auto slice = applied_slice(e, o);
    out.noalias() += slice * env * slice.transpose();
  }
  return out;
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& left, const Eigen::MatrixXd& right,
                     Index r_left, Index phys, Index r_right,
                     const DenseTensor* op_core) {
  const Index n = r_left * phys * r_right;
  const Index p = left.rows() / r_left;    // operator bond entering the core
  const Index pn = right.rows() / r_right; // operator bond leaving the core
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  if (!op_core) {
    if (p != 1 || pn != 1) detail::fail("dangling operator bond at the core");
    Eigen::MatrixXd mid =
        kroneckerProduct(Eigen::MatrixXd::Identity(phys, phys), left);
    g = kroneckerProduct(right, mid);
    return g;
  }
  const Index out = op_core->dims()[1];
  const double* vd = op_core->data().data();
  auto half = [&](Index rho, Index sig) {
    // V(rho, :, :, sig) as an out x phys matrix
    return Eigen::Map<const Eigen::MatrixXd, 0,
                      Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>(
        vd + rho + p * out * phys * sig, out, phys,
        Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(p * out, p));
  };
  for (Index rho1 = 0; rho1 < p; ++rho1)
    for (Index rho2 = 0; rho2 < p; ++rho2) {
      Eigen::MatrixXd lb = bond_block(left, p, rho1, rho2);
      for (Index sig1 = 0; sig1 < pn; ++sig1)
        for (Index sig2 = 0; sig2 < pn; ++sig2) {
          Eigen::MatrixXd k = half(rho1, sig1).transpose() * half(rho2, sig2);
          Eigen::MatrixXd rb = bond_block(right, pn, sig1, sig2);
          Eigen::MatrixXd mid = kroneckerProduct(k, lb);
          g.noalias() += kroneckerProduct(rb, mid).eval();
        }
    }
  return g;
}

}  // namespace tv_env

Eigen::MatrixXd gram_term(const TensorTrain& tt, const TVOperator& op,
                          Index k) {
  tt.check_valid();
  if (!tt.canonical_site || *tt.canonical_site != k)
    detail::fail("gram_term requires the train canonical at the update core");
  const Index d = tt.order();
  const Index a = op.first_core, b = op.last_core();
  if (a < 1 || b > d) detail::fail("operator span exceeds the chain");
  const Dims ranks = tt.ranks();

  auto op_core_at = [&](Index j) -> const DenseTensor* {
    return (j >= a && j <= b) ? &op.tt_form.cores[j - a] : nullptr;
  };

  // Identity-operator stretches on the canonical sides are exact identities.
  Eigen::MatrixXd left;
  if (a > k - 1) {
    left = Eigen::MatrixXd::Identity(ranks[k - 1], ranks[k - 1]);
  } else {
    left = Eigen::MatrixXd::Identity(ranks[a - 1], ranks[a - 1]);
    for (Index j = a; j <= k - 1; ++j)
      left = tv_env::extend_left(left, tt.cores[j - 1], op_core_at(j));
  }
  Eigen::MatrixXd right;
  if (b < k + 1) {
    right = Eigen::MatrixXd::Identity(ranks[k], ranks[k]);
  } else {
    right = Eigen::MatrixXd::Identity(ranks[b], ranks[b]);
    for (Index j = b; j >= k + 1; --j)
      right = tv_env::extend_right(right, tt.cores[j - 1], op_core_at(j));
  }
  const Dims& cd = tt.cores[k - 1].dims();
  return tv_env::gram(left, right, cd[0], cd[1], cd[2], op_core_at(k));
}

double tv_value(const TensorTrain& tt, const TVOperator& op) {
  TensorTrain work = tt;
  if (!work.canonical_site) canonicalize(work, 1);
  const Index k = *work.canonical_site;
  Eigen::MatrixXd g = gram_term(work, op, k);
  const Eigen::VectorXd& v = work.cores[k - 1].data();
  return v.dot(g * v);
}

std::vector<double> adapt_lambda(const std::vector<double>& lambdas,
                                 double relative_observed_error) {
  std::vector<double> out = lambdas;
  for (double& l : out) l *= relative_observed_error;
  return out;
}

}  // namespace ttc
