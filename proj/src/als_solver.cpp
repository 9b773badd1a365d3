#include "ttc/als_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace ttc {

namespace {

Dims flatten(const std::vector<Dims>& mode_factors) {
  Dims flat;
  for (const Dims& f : mode_factors)
    flat.insert(flat.end(), f.begin(), f.end());
  return flat;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

CompletionProblem::CompletionProblem(ObservationSet observations,
                                     std::vector<Dims> mode_factors,
                                     std::vector<Index> bond_ranks,
                                     SolverOptions options)
    : mode_factors_(std::move(mode_factors)), options_(options) {
  original_obs_ = std::move(observations);
  if (original_obs_.size() == 0) detail::fail("completion needs observations");
  chain_dims_ = flatten(mode_factors_);
  chain_obs_ = remap_observations(original_obs_, mode_factors_);
  ranks_ = clamp_bond_ranks(chain_dims_, std::move(bond_ranks));
}

void CompletionProblem::add_tv(Index mode, double lambda) {
  const Dims& dims = original_obs_.dims();
  if (mode < 1 || mode > static_cast<Index>(dims.size()))
    detail::fail("TV mode out of range");
  if (lambda < 0.0) detail::fail("TV weight must be nonnegative");
  TVOperator op = build_tv(dims[mode - 1], mode_factors_[mode - 1]);
  op.mode = mode;
  op.lambda = lambda;
  op.first_core = 1;
  for (Index m = 0; m + 1 < mode; ++m)
    op.first_core += static_cast<Index>(mode_factors_[m].size());
  tv_.push_back(std::move(op));
}

void CompletionProblem::set_initial(TensorTrain tt) {
  tt.check_valid();
  if (tt.mode_dims() != chain_dims_)
    detail::fail("initial train dimensions do not match the problem");
  const Dims r = tt.ranks();
  for (std::size_t k = 0; k < ranks_.size(); ++k)
    if (r[k + 1] != ranks_[k])
      detail::fail("initial train ranks do not match the problem");
  initial_tt_ = std::move(tt);
  options_.init_mode = InitMode::Given;
}

TensorTrain make_initial_tt(const CompletionProblem& p) {
  switch (p.options().init_mode) {
    case InitMode::ZeroFill:
      return zero_fill_init(p.original_observations(), p.mode_factors(),
                            p.ranks());
    case InitMode::Interp:
      return interp_init(p.original_observations(), p.mode_factors(),
                         p.ranks(), p.options().interp);
    case InitMode::Given: {
      if (!p.initial_tt()) detail::fail("no initial train supplied");
      TensorTrain tt = *p.initial_tt();
      const Index d = tt.order();
      if (!tt.canonical_site) {
        canonicalize(tt, d);
      } else {
        while (*tt.canonical_site < d) shift_canonical(tt, Direction::Right);
      }
      return tt;
    }
  }
  detail::fail("unknown init mode");
}

// ---------------------------------------------------------------------------
// Sweep machinery
// ---------------------------------------------------------------------------

namespace {

// Everything one core update needs, shared by the plain and grouped drivers.
struct Ctx {
  const Dims* chain = nullptr;
  const ObservationSet* obs = nullptr;
  std::vector<std::vector<Index>> sel;  // selection rows per chain mode
  const std::vector<TVOperator>* tv = nullptr;
  std::vector<double> lambdas;
  double gamma = 0.0;
  const GroupedProblem* grouped = nullptr;
};

const DenseTensor* op_core_at(const TVOperator& op, Index k) {
  return (k >= op.first_core && k <= op.last_core())
             ? &op.tt_form.cores[k - op.first_core]
             : nullptr;
}

Eigen::MatrixXd extend_left_iface(const Eigen::MatrixXd& prev,
                                  const DenseTensor& core,
                                  const std::vector<Index>& rows) {
  Eigen::MatrixXd out(prev.rows(), core.dims()[2]);
  for (Index l = 0; l < prev.rows(); ++l)
    out.row(l) = prev.row(l) * core_slice(core, rows[l]);
  return out;
}

Eigen::MatrixXd extend_right_iface(const Eigen::MatrixXd& prev,
                                   const DenseTensor& core,
                                   const std::vector<Index>& rows) {
  Eigen::MatrixXd out(prev.rows(), core.dims()[0]);
  for (Index l = 0; l < prev.rows(); ++l)
    out.row(l) = prev.row(l) * core_slice(core, rows[l]).transpose();
  return out;
}

double residual_at(const SweepState& s, const Ctx& ctx, Index k) {
  const DenseTensor& core = s.tt.cores[k - 1];
  const Eigen::MatrixXd& lif = s.left[k - 1];
  const Eigen::MatrixXd& rif = s.right[k - 1];
  const std::vector<Index>& rows = ctx.sel[k - 1];
  double sq = 0.0;
  for (Index l = 0; l < ctx.obs->size(); ++l) {
    const double pred =
        lif.row(l) * core_slice(core, rows[l]) * rif.row(l).transpose();
    const double e = pred - ctx.obs->value(l);
    sq += e * e;
  }
  return std::sqrt(sq);
}

SweepState make_state_impl(TensorTrain tt, const Ctx& ctx) {
  tt.check_valid();
  if (!tt.canonical_site) detail::fail("initial train must be canonical");
  const Index d = tt.order();
  const Index n = ctx.obs->size();
  const Index site = *tt.canonical_site;
  const Index n_ops = static_cast<Index>(ctx.tv->size());

  SweepState s;
  s.site = site;
  s.left.resize(d);
  s.right.resize(d);
  s.tv_left.assign(n_ops, std::vector<Eigen::MatrixXd>(d));
  s.tv_right.assign(n_ops, std::vector<Eigen::MatrixXd>(d));

  s.left[0] = Eigen::MatrixXd::Ones(n, 1);
  for (Index k = 1; k < site; ++k)
    s.left[k] = extend_left_iface(s.left[k - 1], tt.cores[k - 1],
                                  ctx.sel[k - 1]);
  s.right[d - 1] = Eigen::MatrixXd::Ones(n, 1);
  for (Index k = d - 1; k >= site; --k)
    s.right[k - 1] = extend_right_iface(s.right[k], tt.cores[k],
                                        ctx.sel[k]);
  for (Index p = 0; p < n_ops; ++p) {
    const TVOperator& op = (*ctx.tv)[p];
    s.tv_left[p][0] = tv_env::initial();
    for (Index k = 1; k < site; ++k)
      s.tv_left[p][k] = tv_env::extend_left(s.tv_left[p][k - 1],
                                            tt.cores[k - 1], op_core_at(op, k));
    s.tv_right[p][d - 1] = tv_env::initial();
    for (Index k = d - 1; k >= site; --k)
      s.tv_right[p][k - 1] = tv_env::extend_right(
          s.tv_right[p][k], tt.cores[k], op_core_at(op, k + 1));
  }
  s.tt = std::move(tt);
  return s;
}

bool ldlt_ill_conditioned(const Eigen::LDLT<Eigen::MatrixXd>& ldlt) {
  const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
  const double dmax = d.maxCoeff();
  const double dmin = d.minCoeff();
  return !(dmin > 0.0) || dmax / dmin > 1e8;
}

// Rank-thresholded direct least squares; truncating the numerically
// undetermined directions keeps the solution bounded on deficient blocks.
Eigen::MatrixXd thresholded_lsq(const Eigen::MatrixXd& a,
                                const Eigen::MatrixXd& b) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-8);
  return qr.solve(b);
}

// Matrix right-hand-side update of the merged first core (grouped problems).
void grouped_core1_update(SweepState& s, const Ctx& ctx) {
  const GroupedProblem& gp = *ctx.grouped;
  const Index c_cols = gp.group_size();
  const Index n_sp = gp.spatial_count();
  DenseTensor& core = s.tt.cores[0];
  const Index merged = core.dims()[1], r2 = core.dims()[2];
  const Index f1 = merged / c_cols;
  const Eigen::MatrixXd& rif = s.right[0];  // rows 0..n_sp-1 form one c-block
  const Eigen::MatrixXd& y = gp.value_matrix();
  const std::vector<Index>& i1 = gp.first_mode_rows();

  std::vector<std::vector<Index>> buckets(f1);
  for (Index l = 0; l < n_sp; ++l) buckets[i1[l] - 1].push_back(l);

  double trace = 0.0;
  std::vector<Eigen::MatrixXd> a(f1), yb(f1), m(f1), rhs(f1);
  for (Index i0 = 0; i0 < f1; ++i0) {
    const Index ni = static_cast<Index>(buckets[i0].size());
    a[i0].resize(ni, r2);
    yb[i0].resize(ni, c_cols);
    for (Index t = 0; t < ni; ++t) {
      a[i0].row(t) = rif.row(buckets[i0][t]);
      yb[i0].row(t) = y.row(buckets[i0][t]);
    }
    m[i0] = a[i0].transpose() * a[i0];
    rhs[i0] = a[i0].transpose() * yb[i0];
    trace += m[i0].trace();
  }
  const double eps = 1e-10 * trace / static_cast<double>(f1 * r2);

  double* cd = core.data().data();
  for (Index i0 = 0; i0 < f1; ++i0) {
    Eigen::MatrixXd h = m[i0];
    h.diagonal().array() += ctx.gamma + eps;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    Eigen::MatrixXd x = ldlt.solve(rhs[i0]);
    if (ctx.gamma == 0.0 && ldlt_ill_conditioned(ldlt) &&
        buckets[i0].size() > 0)
      x = thresholded_lsq(a[i0], yb[i0]);
    if (!x.allFinite()) {
      ++s.skipped_updates;
      continue;  // keep the previous slice
    }
    Eigen::MatrixXd old(r2, c_cols);
    for (Index c = 0; c < c_cols; ++c)
      for (Index r = 0; r < r2; ++r) old(r, c) = cd[(i0 + c * f1) + r * merged];
    const double res_new = (a[i0] * x - yb[i0]).squaredNorm() +
                           ctx.gamma * x.squaredNorm();
    const double res_old = (a[i0] * old - yb[i0]).squaredNorm() +
                           ctx.gamma * old.squaredNorm();
    if (res_new > res_old) {  // numerical failure: keep the previous slice
      ++s.skipped_updates;
      continue;
    }
    for (Index c = 0; c < c_cols; ++c)
      for (Index r = 0; r < r2; ++r) cd[(i0 + c * f1) + r * merged] = x(r, c);
  }
}

void update_core(SweepState& s, const Ctx& ctx, Index k) {
  if (ctx.grouped && k == 1) {
    grouped_core1_update(s, ctx);
    s.residual_history.push_back(residual_at(s, ctx, k));
    return;
  }
  const Dims cd = s.tt.cores[k - 1].dims();
  const Index r = cd[0], phys = cd[1], rn = cd[2];
  const Index rr = r * rn, n = r * phys * rn;
  const Eigen::MatrixXd& lif = s.left[k - 1];
  const Eigen::MatrixXd& rif = s.right[k - 1];
  const std::vector<Index>& rows = ctx.sel[k - 1];

  // Per-slice row blocks; B^T B is block diagonal over the physical index
  // because each row of B selects a single slice.
  std::vector<std::vector<Index>> buckets(phys);
  for (Index l = 0; l < ctx.obs->size(); ++l)
    buckets[rows[l] - 1].push_back(l);

  std::vector<Eigen::MatrixXd> v(phys), m(phys);
  std::vector<Eigen::VectorXd> yb(phys), g(phys);
  double trace = 0.0;
  for (Index i0 = 0; i0 < phys; ++i0) {
    const Index ni = static_cast<Index>(buckets[i0].size());
    v[i0].resize(ni, rr);
    yb[i0].resize(ni);
    for (Index t = 0; t < ni; ++t) {
      const Index l = buckets[i0][t];
      for (Index r2 = 0; r2 < rn; ++r2)
        for (Index r1 = 0; r1 < r; ++r1)
          v[i0](t, r1 + r2 * r) = lif(l, r1) * rif(l, r2);
      yb[i0][t] = ctx.obs->value(l);
    }
    m[i0] = v[i0].transpose() * v[i0];
    g[i0] = v[i0].transpose() * yb[i0];
    trace += m[i0].trace();
  }
  const double eps = 1e-10 * trace / static_cast<double>(n);

  auto core_slice_vec = [&](Index i0) {
    Eigen::VectorXd out(rr);
    const double* src = s.tt.cores[k - 1].data().data();
    for (Index r2 = 0; r2 < rn; ++r2)
      for (Index r1 = 0; r1 < r; ++r1)
        out[r1 + r2 * r] = src[r1 + i0 * r + r2 * r * phys];
    return out;
  };

  bool all_zero_weights = ctx.gamma == 0.0;
  for (double l : ctx.lambdas) all_zero_weights = all_zero_weights && l == 0.0;

  if (all_zero_weights) {
    // Plain path: the normal equations decouple per slice.
    DenseTensor& core = s.tt.cores[k - 1];
    for (Index i0 = 0; i0 < phys; ++i0) {
      Eigen::MatrixXd h = m[i0];
      h.diagonal().array() += eps;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
      Eigen::VectorXd xi = ldlt.solve(g[i0]);
      if (ldlt_ill_conditioned(ldlt)) {
        if (buckets[i0].empty())
          xi.setZero();
        else
          xi = thresholded_lsq(v[i0], yb[i0]);
        ++s.fallback_updates;
      }
      const bool improves =
          xi.allFinite() && (v[i0] * xi - yb[i0]).squaredNorm() <=
                                (v[i0] * core_slice_vec(i0) - yb[i0]).squaredNorm();
      if (!improves) {  // numerical failure: keep the previous slice
        ++s.skipped_updates;
        continue;
      }
      for (Index r2 = 0; r2 < rn; ++r2)
        for (Index r1 = 0; r1 < r; ++r1)
          core.data()[r1 + i0 * r + r2 * r * phys] = xi[r1 + r2 * r];
    }
  } else {
    // Regularized path: the gram terms couple the slices.
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    auto col = [&](Index r1, Index i0, Index r2) {
      return r1 + i0 * r + r2 * r * phys;
    };
    for (Index i0 = 0; i0 < phys; ++i0)
      for (Index r2 = 0; r2 < rn; ++r2)
        for (Index r1 = 0; r1 < r; ++r1) {
          rhs[col(r1, i0, r2)] = g[i0][r1 + r2 * r];
          for (Index s2 = 0; s2 < rn; ++s2)
            for (Index s1 = 0; s1 < r; ++s1)
              h(col(r1, i0, r2), col(s1, i0, s2)) =
                  m[i0](r1 + r2 * r, s1 + s2 * r);
        }
    std::vector<Eigen::MatrixXd> grams(ctx.tv->size());
    for (std::size_t p = 0; p < ctx.tv->size(); ++p) {
      grams[p] = tv_env::gram(s.tv_left[p][k - 1], s.tv_right[p][k - 1], r,
                              phys, rn, op_core_at((*ctx.tv)[p], k));
      h.noalias() += ctx.lambdas[p] * grams[p];
    }
    h.diagonal().array() += ctx.gamma + eps;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    Eigen::VectorXd x = ldlt.solve(rhs);

    // Regularized objective (residual^2 + sum lambda x'Gx + gamma |x|^2).
    auto objective = [&](const Eigen::VectorXd& cand) {
      double out = ctx.gamma * cand.squaredNorm();
      for (std::size_t p = 0; p < grams.size(); ++p)
        out += ctx.lambdas[p] * cand.dot(grams[p] * cand);
      for (Index i0 = 0; i0 < phys; ++i0) {
        Eigen::VectorXd xi(rr);
        for (Index r2 = 0; r2 < rn; ++r2)
          for (Index r1 = 0; r1 < r; ++r1)
            xi[r1 + r2 * r] = cand[col(r1, i0, r2)];
        out += (v[i0] * xi - yb[i0]).squaredNorm();
      }
      return out;
    };
    const bool improves = ldlt.info() == Eigen::Success && x.allFinite() &&
                          objective(x) <= objective(s.tt.cores[k - 1].data());
    if (improves)
      s.tt.cores[k - 1] = DenseTensor(cd, std::move(x));
    else
      ++s.skipped_updates;
  }
  s.residual_history.push_back(residual_at(s, ctx, k));
}

void run_backward(SweepState& s, const Ctx& ctx) {
  const Index d = s.tt.order();
  for (Index k = d; k >= 2; --k) {
    update_core(s, ctx, k);
    shift_canonical(s.tt, Direction::Left);
    s.site = k - 1;
    s.right[k - 2] =
        extend_right_iface(s.right[k - 1], s.tt.cores[k - 1], ctx.sel[k - 1]);
    for (std::size_t p = 0; p < ctx.tv->size(); ++p)
      s.tv_right[p][k - 2] = tv_env::extend_right(
          s.tv_right[p][k - 1], s.tt.cores[k - 1],
          op_core_at((*ctx.tv)[p], k));
  }
}

void run_forward(SweepState& s, const Ctx& ctx) {
  const Index d = s.tt.order();
  if (d == 1) {  // single-core chain: the local system is a pure gather
    update_core(s, ctx, 1);
    return;
  }
  for (Index k = 1; k <= d - 1; ++k) {
    update_core(s, ctx, k);
    shift_canonical(s.tt, Direction::Right);
    s.site = k + 1;
    s.left[k] =
        extend_left_iface(s.left[k - 1], s.tt.cores[k - 1], ctx.sel[k - 1]);
    for (std::size_t p = 0; p < ctx.tv->size(); ++p)
      s.tv_left[p][k] = tv_env::extend_left(s.tv_left[p][k - 1],
                                            s.tt.cores[k - 1],
                                            op_core_at((*ctx.tv)[p], k));
  }
}

CompletionResult drive(Ctx& ctx, TensorTrain init, const SolverOptions& opts) {
  CompletionResult out;
  Diagnostics& diag = out.diagnostics;

  Index smallest_system = std::numeric_limits<Index>::max();
  for (const DenseTensor& c : init.cores)
    smallest_system = std::min(smallest_system, c.size());
  diag.underdetermined = ctx.obs->size() < smallest_system;

  SweepState s = make_state_impl(std::move(init), ctx);
  const double y_norm = ctx.obs->values().norm();
  const double y_scale = y_norm > 0.0 ? y_norm : 1.0;
  const double tol = opts.residual_tolerance;

  double rel_prev = std::numeric_limits<double>::infinity();
  for (Index it = 1; it <= opts.max_sweeps; ++it) {
    auto t0 = std::chrono::steady_clock::now();
    run_backward(s, ctx);
    double res = s.residual_history.empty() ? 0.0 : s.residual_history.back();
    diag.half_sweeps.push_back({it, 0, res, res / y_scale, ctx.lambdas,
                                seconds_since(t0)});
    t0 = std::chrono::steady_clock::now();
    run_forward(s, ctx);
    res = s.residual_history.back();
    const double rel = res / y_scale;
    diag.half_sweeps.push_back({it, 1, res, rel, ctx.lambdas,
                                seconds_since(t0)});
    diag.sweeps_run = it;
    if (opts.lambda_adaptation && !ctx.lambdas.empty())
      ctx.lambdas = adapt_lambda(ctx.lambdas, rel);
    if (tol > 0.0 &&
        (rel <= tol || std::abs(rel_prev - rel) <= tol)) {
      diag.converged = true;
      break;
    }
    rel_prev = rel;
  }
  diag.core_update_residuals = s.residual_history;
  diag.skipped_updates = s.skipped_updates;
  diag.fallback_updates = s.fallback_updates;
  diag.final_lambdas = ctx.lambdas;
  out.tt = std::move(s.tt);
  return out;
}

Ctx make_ctx(const CompletionProblem& p) {
  Ctx ctx;
  ctx.chain = &p.chain_dims();
  ctx.obs = &p.observations();
  ctx.sel = build_selection(p.observations()).rows;
  ctx.tv = &p.tv();
  ctx.lambdas.reserve(p.tv().size());
  for (const TVOperator& op : p.tv()) ctx.lambdas.push_back(op.lambda);
  ctx.gamma = p.options().gamma;
  return ctx;
}

}  // namespace

SweepState make_state(const CompletionProblem& p, TensorTrain init) {
  Ctx ctx = make_ctx(p);
  return make_state_impl(std::move(init), ctx);
}

Eigen::MatrixXd build_local_matrix(const SweepState& s,
                                   const CompletionProblem& p, Index k) {
  if (!s.tt.canonical_site || *s.tt.canonical_site != k)
    detail::fail("state must be canonical at the update core");
  const ObservationSet& obs = p.observations();
  const Dims cd = s.tt.cores[k - 1].dims();
  const Index r = cd[0], phys = cd[1], rn = cd[2];
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(obs.size(), r * phys * rn);
  for (Index l = 0; l < obs.size(); ++l) {
    const Index i0 = obs.index(l)[k - 1] - 1;
    for (Index r2 = 0; r2 < rn; ++r2)
      for (Index r1 = 0; r1 < r; ++r1)
        b(l, r1 + i0 * r + r2 * r * phys) =
            s.left[k - 1](l, r1) * s.right[k - 1](l, r2);
  }
  return b;
}

CoreSolve solve_core(const Eigen::MatrixXd& b, const Eigen::VectorXd& y,
                     const std::vector<Eigen::MatrixXd>& gram_terms,
                     const std::vector<double>& lambdas, double gamma) {
  if (gram_terms.size() != lambdas.size())
    detail::fail("one weight per gram term is required");
  const Index n = b.cols();
  Eigen::MatrixXd h = b.transpose() * b;
  const double eps = 1e-10 * h.trace() / static_cast<double>(n);
  for (std::size_t p = 0; p < gram_terms.size(); ++p)
    h.noalias() += lambdas[p] * gram_terms[p];
  h.diagonal().array() += gamma + eps;

  CoreSolve out;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
  out.x = ldlt.solve(b.transpose() * y);
  bool regularized = gamma != 0.0;
  for (double l : lambdas) regularized = regularized || l != 0.0;
  if (!regularized && ldlt_ill_conditioned(ldlt)) {
    out.x = b.colPivHouseholderQr().solve(y);
    out.used_lsq_fallback = true;
  }
  out.ok = (ldlt.info() == Eigen::Success || out.used_lsq_fallback) &&
           out.x.allFinite();
  return out;
}

void sweep(SweepState& s, const CompletionProblem& p) {
  Ctx ctx = make_ctx(p);
  if (s.site != s.tt.order())
    detail::fail("a sweep starts from site-d canonical form");
  run_backward(s, ctx);
  run_forward(s, ctx);
}

CompletionResult complete(const CompletionProblem& p) {
  Ctx ctx = make_ctx(p);
  return drive(ctx, make_initial_tt(p), p.options());
}

// ---------------------------------------------------------------------------
// Grouped (matrix output) variant
// ---------------------------------------------------------------------------

GroupedProblem::GroupedProblem(ObservationSet observations,
                               Index n_grouped_modes,
                               std::vector<Dims> spatial_mode_factors,
                               std::vector<Index> merged_bond_ranks,
                               SolverOptions options)
    : original_(std::move(observations)), options_(options) {
  original_dims_ = original_.dims();
  const Index d = static_cast<Index>(original_dims_.size());
  if (n_grouped_modes < 1 || n_grouped_modes >= d)
    detail::fail("grouped mode count must leave at least one spatial mode");
  if (options_.init_mode == InitMode::Given)
    detail::fail("grouped completion has no given-train initializer");
  const Index n_spatial_modes = d - n_grouped_modes;
  spatial_dims_.assign(original_dims_.begin(),
                       original_dims_.begin() + n_spatial_modes);
  grouped_dims_.assign(original_dims_.begin() + n_spatial_modes,
                       original_dims_.end());
  group_size_ = product(grouped_dims_);
  spatial_factors_ = std::move(spatial_mode_factors);
  if (static_cast<Index>(spatial_factors_.size()) != n_spatial_modes)
    detail::fail("one factor list per spatial mode is required");
  Dims flat = flatten(spatial_factors_);
  for (Index k = 0; k < n_spatial_modes; ++k)
    if (product(spatial_factors_[k]) != spatial_dims_[k])
      detail::fail("mode factors do not multiply back to the dimension");
  f1_ = flat[0];
  chain_dims_ = flat;
  chain_dims_[0] = f1_ * group_size_;
  ranks_ = clamp_bond_ranks(chain_dims_, std::move(merged_bond_ranks));

  // Group the observations: every observed spatial position must carry all
  // group_size_ trailing combinations (the sensor-mask precondition).
  std::unordered_map<Index, Index> row_of;
  std::vector<MultiIndex> spatial_multis;
  std::vector<std::pair<Index, Index>> placed(original_.size());
  for (Index l = 0; l < original_.size(); ++l) {
    const MultiIndex& m = original_.index(l);
    MultiIndex sp(m.begin(), m.begin() + n_spatial_modes);
    MultiIndex gr(m.begin() + n_spatial_modes, m.end());
    const Index key = linear_index(sp, spatial_dims_);
    auto [it, inserted] = row_of.try_emplace(key, row_of.size());
    if (inserted) spatial_multis.push_back(std::move(sp));
    placed[l] = {it->second, linear_index(gr, grouped_dims_) - 1};
  }
  n_spatial_ = static_cast<Index>(row_of.size());
  if (original_.size() != n_spatial_ * group_size_)
    detail::fail("observations do not share one mask across grouped modes");
  y_.setZero(n_spatial_, group_size_);
  Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(n_spatial_, group_size_);
  for (Index l = 0; l < original_.size(); ++l) {
    auto [row, c] = placed[l];
    if (seen(row, c)++)
      detail::fail("observations do not share one mask across grouped modes");
    y_(row, c) = original_.value(l);
  }

  // Chain indices of each spatial row and the expanded observation set over
  // the merged layout, ordered column-block by column-block.
  std::vector<MultiIndex> chain_multis(n_spatial_);
  i1_.resize(n_spatial_);
  for (Index row = 0; row < n_spatial_; ++row) {
    MultiIndex m;
    for (Index k = 0; k < n_spatial_modes; ++k) {
      MultiIndex sub = multi_index(spatial_multis[row][k],
                                   spatial_factors_[k]);
      m.insert(m.end(), sub.begin(), sub.end());
    }
    i1_[row] = m[0];
    chain_multis[row] = std::move(m);
  }
  std::vector<MultiIndex> expanded_idx;
  expanded_idx.reserve(n_spatial_ * group_size_);
  Eigen::VectorXd expanded_val(n_spatial_ * group_size_);
  for (Index c = 0; c < group_size_; ++c)
    for (Index row = 0; row < n_spatial_; ++row) {
      MultiIndex m = chain_multis[row];
      m[0] = i1_[row] + c * f1_;
      expanded_idx.push_back(std::move(m));
      expanded_val[row + c * n_spatial_] = y_(row, c);
    }
  expanded_ = ObservationSet(chain_dims_, std::move(expanded_idx),
                             std::move(expanded_val));
}

TensorTrain GroupedProblem::initial_train() const {
  DenseTensor dense = options_.init_mode == InitMode::Interp
                          ? interp_fill(original_, options_.interp)
                          : zero_fill_tensor(original_);
  Dims flat = flatten(spatial_factors_);
  const Index m = static_cast<Index>(flat.size());
  const Index g = static_cast<Index>(grouped_dims_.size());
  Dims refined = flat;
  refined.insert(refined.end(), grouped_dims_.begin(), grouped_dims_.end());
  DenseTensor t = reshape(dense, refined);
  std::vector<Index> order;
  order.push_back(1);
  for (Index j = 0; j < g; ++j) order.push_back(m + 1 + j);
  for (Index j = 2; j <= m; ++j) order.push_back(j);
  t = permute(t, order);
  return tt_svd(reshape(t, chain_dims_), ranks_);
}

DenseTensor GroupedProblem::ungroup(const DenseTensor& merged) const {
  if (merged.dims() != chain_dims_)
    detail::fail("tensor does not match the merged chain layout");
  Dims flat = flatten(spatial_factors_);
  const Index m = static_cast<Index>(flat.size());
  const Index g = static_cast<Index>(grouped_dims_.size());
  Dims split;
  split.push_back(f1_);
  split.insert(split.end(), grouped_dims_.begin(), grouped_dims_.end());
  split.insert(split.end(), flat.begin() + 1, flat.end());
  DenseTensor t = reshape(merged, split);
  std::vector<Index> order;
  order.push_back(1);
  for (Index j = 2; j <= m; ++j) order.push_back(g + j);
  for (Index j = 0; j < g; ++j) order.push_back(2 + j);
  t = permute(t, order);
  return reshape(t, original_dims_);
}

CompletionResult complete_grouped(const GroupedProblem& p) {
  static const std::vector<TVOperator> no_tv;
  Ctx ctx;
  ctx.chain = &p.chain_dims();
  ctx.obs = &p.expanded_observations();
  ctx.sel = build_selection(p.expanded_observations()).rows;
  ctx.tv = &no_tv;
  ctx.gamma = p.options().gamma;
  ctx.grouped = &p;
  return drive(ctx, p.initial_train(), p.options());
}

}  // namespace ttc
