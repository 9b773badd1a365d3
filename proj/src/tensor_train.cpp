#include "ttc/tensor_train.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace ttc {

Dims TensorTrain::mode_dims() const {
  Dims out(cores.size());
  for (std::size_t k = 0; k < cores.size(); ++k) out[k] = cores[k].dims()[1];
  return out;
}

Dims TensorTrain::ranks() const {
  Dims out(cores.size() + 1, 1);
  for (std::size_t k = 0; k < cores.size(); ++k) out[k] = cores[k].dims()[0];
  if (!cores.empty()) out[cores.size()] = cores.back().dims()[2];
  return out;
}

void TensorTrain::check_valid() const {
  if (cores.empty()) detail::fail("tensor train has no cores");
  for (const DenseTensor& c : cores)
    if (c.order() != 3) detail::fail("tensor train core is not 3-way");
  if (cores.front().dims()[0] != 1 || cores.back().dims()[2] != 1)
    detail::fail("boundary TT-ranks must be 1");
  for (std::size_t k = 0; k + 1 < cores.size(); ++k)
    if (cores[k].dims()[2] != cores[k + 1].dims()[0])
      detail::fail("adjacent TT-ranks are inconsistent");
  if (canonical_site && (*canonical_site < 1 || *canonical_site > order()))
    detail::fail("canonical site out of range");
}

Eigen::Map<const Eigen::MatrixXd, 0, Eigen::OuterStride<>> core_slice(
    const DenseTensor& core, Index i) {
  const Dims& d = core.dims();
  if (i < 1 || i > d[1]) detail::fail("core slice index out of range");
  return {core.data().data() + (i - 1) * d[0], d[0], d[2],
          Eigen::OuterStride<>(d[0] * d[1])};
}

std::vector<Index> max_bond_ranks(const Dims& dims) {
  const Index d = static_cast<Index>(dims.size());
  std::vector<Index> out;
  if (d < 2) return out;
  std::vector<Index> left(d), right(d);
  Index p = 1;
  for (Index k = 0; k < d; ++k) left[k] = (p *= dims[k]);
  p = 1;
  for (Index k = d - 1; k >= 0; --k) right[k] = (p *= dims[k]);
  out.resize(d - 1);
  for (Index k = 0; k < d - 1; ++k) out[k] = std::min(left[k], right[k + 1]);
  return out;
}

std::vector<Index> clamp_bond_ranks(const Dims& dims,
                                    std::vector<Index> ranks) {
  std::vector<Index> cap = max_bond_ranks(dims);
  if (ranks.size() != cap.size())
    detail::fail("rank list must have d-1 entries");
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    if (ranks[k] < 1) detail::fail("TT-ranks must be positive");
    ranks[k] = std::min(ranks[k], cap[k]);
  }
  return ranks;
}

namespace {

struct TruncatedSvd {
  Eigen::MatrixXd u;       // m x r
  Eigen::MatrixXd sv;      // r x n, equal to diag(s) * v^T
};

TruncatedSvd truncated_svd(const Eigen::MatrixXd& m, Index max_rank,
                           double tol) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU |
                                            Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  Index r = std::min<Index>(max_rank, s.size());
  if (tol > 0.0 && s.size() > 0) {
    const double cutoff = tol * s(0);
    Index kept = 0;
    while (kept < r && s(kept) > cutoff) ++kept;
    r = kept;
  }
  r = std::max<Index>(r, 1);  // a zero tensor keeps one (zero) direction
  TruncatedSvd out;
  out.u = svd.matrixU().leftCols(r);
  out.sv = s.head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();
  return out;
}

TensorTrain tt_svd_impl(const DenseTensor& t,
                        const std::vector<Index>* bond_ranks, double tol) {
  if (t.size() == 0) detail::fail("cannot decompose an empty tensor");
  const Dims& dims = t.dims();
  const Index d = t.order();
  if (bond_ranks && static_cast<Index>(bond_ranks->size()) != d - 1)
    detail::fail("rank list must have d-1 entries");

  TensorTrain tt;
  tt.cores.reserve(d);
  Eigen::VectorXd work = t.data();
  Index r_prev = 1;
  for (Index k = 0; k + 1 < d; ++k) {
    const Index rows = r_prev * dims[k];
    const Index cols = work.size() / rows;
    Eigen::Map<const Eigen::MatrixXd> m(work.data(), rows, cols);
    Index want = bond_ranks ? (*bond_ranks)[k]
                            : std::numeric_limits<Index>::max();
    if (want < 1) detail::fail("TT-ranks must be positive");
    TruncatedSvd svd = truncated_svd(m, want, tol);
    const Index r = svd.u.cols();
    tt.cores.emplace_back(Dims{r_prev, dims[k], r},
                          Eigen::Map<const Eigen::VectorXd>(
                              svd.u.data(), svd.u.size()));
    work = Eigen::Map<const Eigen::VectorXd>(svd.sv.data(), svd.sv.size());
    r_prev = r;
  }
  tt.cores.emplace_back(Dims{r_prev, dims[d - 1], 1}, std::move(work));
  tt.canonical_site = d;
  return tt;
}

}  // namespace

TensorTrain tt_svd(const DenseTensor& t,
                   const std::vector<Index>& bond_ranks) {
  return tt_svd_impl(t, &bond_ranks, 0.0);
}

DenseTensor contract_full(const TensorTrain& tt) {
  tt.check_valid();
  const Index d = tt.order();
  Eigen::MatrixXd acc = tt.cores[0].as_matrix(
      tt.cores[0].dims()[1], tt.cores[0].dims()[2]);  // R_1 = 1
  for (Index k = 1; k < d; ++k) {
    const Dims& cd = tt.cores[k].dims();
    Eigen::MatrixXd grown =
        acc * tt.cores[k].as_matrix(cd[0], cd[1] * cd[2]);
    acc = Eigen::Map<const Eigen::MatrixXd>(grown.data(),
                                            acc.rows() * cd[1], cd[2]);
  }
  return DenseTensor(tt.mode_dims(), Eigen::Map<const Eigen::VectorXd>(
                                         acc.data(), acc.size()));
}

double tt_entry(const TensorTrain& tt, const MultiIndex& m) {
  const Index d = tt.order();
  if (static_cast<Index>(m.size()) != d)
    detail::fail("multi-index order does not match tensor train");
  Eigen::RowVectorXd v = core_slice(tt.cores[0], m[0]);
  for (Index k = 1; k < d; ++k) v = v * core_slice(tt.cores[k], m[k]);
  return v(0);
}

namespace {

// Thin QR helpers shared by the canonical-site moves. Both assume the bond
// being orthogonalized is feasible (rank not exceeding the unfolding size),
// which holds for every train produced by tt_svd or clamp_bond_ranks.

void right_step(TensorTrain& tt, Index k) {  // site k -> k+1, 1-based k
  DenseTensor& core = tt.cores[k - 1];
  const Dims cd = core.dims();
  const Index m = cd[0] * cd[1], n = cd[2];
  if (n > m) detail::fail("bond rank exceeds unfolding size");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(core.as_matrix(m, n));
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, n);
  Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  core = DenseTensor(cd, Eigen::Map<const Eigen::VectorXd>(q.data(), q.size()));

  DenseTensor& next = tt.cores[k];
  const Dims nd = next.dims();
  Eigen::MatrixXd grown = r * next.as_matrix(nd[0], nd[1] * nd[2]);
  next = DenseTensor(nd, Eigen::Map<const Eigen::VectorXd>(grown.data(),
                                                           grown.size()));
}

void left_step(TensorTrain& tt, Index k) {  // site k -> k-1
  DenseTensor& core = tt.cores[k - 1];
  const Dims cd = core.dims();
  const Index m = cd[1] * cd[2], n = cd[0];
  if (n > m) detail::fail("bond rank exceeds unfolding size");
  Eigen::MatrixXd at = core.as_matrix(n, m).transpose();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(at);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, n);
  Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  Eigen::MatrixXd qt = q.transpose();
  core = DenseTensor(cd, Eigen::Map<const Eigen::VectorXd>(qt.data(),
                                                           qt.size()));

  DenseTensor& prev = tt.cores[k - 2];
  const Dims pd = prev.dims();
  Eigen::MatrixXd grown = prev.as_matrix(pd[0] * pd[1], pd[2]) * r.transpose();
  prev = DenseTensor(pd, Eigen::Map<const Eigen::VectorXd>(grown.data(),
                                                           grown.size()));
}

}  // namespace

void shift_canonical(TensorTrain& tt, Direction dir) {
  tt.check_valid();
  if (!tt.canonical_site) detail::fail("canonical site is not set");
  const Index k = *tt.canonical_site;
  if (dir == Direction::Right) {
    if (k == tt.order()) detail::fail("cannot shift past the last core");
    right_step(tt, k);
    tt.canonical_site = k + 1;
  } else {
    if (k == 1) detail::fail("cannot shift past the first core");
    left_step(tt, k);
    tt.canonical_site = k - 1;
  }
}

void canonicalize(TensorTrain& tt, Index site) {
  tt.check_valid();
  const Index d = tt.order();
  if (site < 1 || site > d) detail::fail("canonical site out of range");
  for (Index k = d; k > 1; --k) left_step(tt, k);
  tt.canonical_site = 1;
  while (*tt.canonical_site < site) shift_canonical(tt, Direction::Right);
}

double tt_norm(const TensorTrain& tt) {
  if (!tt.canonical_site) detail::fail("canonical site is not set");
  return tt.cores[*tt.canonical_site - 1].frobenius_norm();
}

Dims TTMatrix::ranks() const {
  Dims out(cores.size() + 1, 1);
  for (std::size_t k = 0; k < cores.size(); ++k) out[k] = cores[k].dims()[0];
  if (!cores.empty()) out[cores.size()] = cores.back().dims()[3];
  return out;
}

TTMatrix ttm_identity(const Dims& dims) {
  TTMatrix w;
  w.row_dims = dims;
  w.col_dims = dims;
  for (Index n : dims) {
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    w.cores.emplace_back(Dims{1, n, n, 1}, Eigen::Map<const Eigen::VectorXd>(
                                               id.data(), id.size()));
  }
  return w;
}

TTMatrix ttm_from_matrix(const Eigen::MatrixXd& m, const Dims& row_dims,
                         const Dims& col_dims, double tol) {
  if (row_dims.size() != col_dims.size() || row_dims.empty())
    detail::fail("row and column dimension lists must pair up");
  if (m.rows() != product(row_dims) || m.cols() != product(col_dims))
    detail::fail("matrix shape does not match the dimension lists");
  const Index d = static_cast<Index>(row_dims.size());

  // Interleave row/column digits so each (J_k, I_k) pair is contiguous.
  Dims inter(2 * d);
  for (Index k = 0; k < d; ++k) {
    inter[2 * k] = row_dims[k];
    inter[2 * k + 1] = col_dims[k];
  }
  std::vector<Index> stride(2 * d);
  Index s = 1;
  for (Index k = 0; k < 2 * d; ++k) {
    stride[k] = s;
    s *= inter[k];
  }
  DenseTensor t(inter);
  std::vector<Index> jd(d), id(d);
  for (Index col = 0; col < m.cols(); ++col) {
    Index rem = col;
    for (Index k = 0; k < d; ++k) {
      id[k] = rem % col_dims[k];
      rem /= col_dims[k];
    }
    Index col_off = 0;
    for (Index k = 0; k < d; ++k) col_off += id[k] * stride[2 * k + 1];
    for (Index row = 0; row < m.rows(); ++row) {
      rem = row;
      Index off = col_off;
      for (Index k = 0; k < d; ++k) {
        off += (rem % row_dims[k]) * stride[2 * k];
        rem /= row_dims[k];
      }
      t[off] = m(row, col);
    }
  }

  Dims grouped(d);
  for (Index k = 0; k < d; ++k) grouped[k] = row_dims[k] * col_dims[k];
  TensorTrain tt = tt_svd_impl(reshape(t, grouped), nullptr, tol);

  TTMatrix w;
  w.row_dims = row_dims;
  w.col_dims = col_dims;
  for (Index k = 0; k < d; ++k) {
    const Dims& cd = tt.cores[k].dims();
    w.cores.push_back(reshape(tt.cores[k],
                              Dims{cd[0], row_dims[k], col_dims[k], cd[2]}));
  }
  return w;
}

TensorTrain ttm_apply(const TTMatrix& w, const TensorTrain& tt) {
  tt.check_valid();
  if (w.order() != tt.order()) detail::fail("operator/train order mismatch");
  TensorTrain out;
  out.cores.reserve(tt.order());
  for (Index k = 0; k < tt.order(); ++k) {
    const DenseTensor& v = w.cores[k];
    const DenseTensor& a = tt.cores[k];
    const Index p = v.dims()[0], jn = v.dims()[1], in = v.dims()[2],
                pn = v.dims()[3];
    const Index r = a.dims()[0], rn = a.dims()[2];
    if (a.dims()[1] != in) detail::fail("operator input dimension mismatch");
    DenseTensor e(Dims{p * r, jn, pn * rn});
    const double* vd = v.data().data();
    const double* ad = a.data().data();
    double* ed = e.data().data();
    for (Index rpn = 0; rpn < rn; ++rpn)
      for (Index ppn = 0; ppn < pn; ++ppn)
        for (Index o = 0; o < jn; ++o)
          for (Index rr = 0; rr < r; ++rr)
            for (Index pp = 0; pp < p; ++pp) {
              double sum = 0.0;
              for (Index i = 0; i < in; ++i)
                sum += vd[pp + p * (o + jn * (i + in * ppn))] *
                       ad[rr + r * (i + in * rpn)];
              ed[(pp + p * rr) + (p * r) * (o + jn * (ppn + pn * rpn))] = sum;
            }
    out.cores.push_back(std::move(e));
  }
  return out;
}

Eigen::MatrixXd ttm_to_dense(const TTMatrix& w) {
  const Index d = w.order();
  TensorTrain grouped;
  for (Index k = 0; k < d; ++k) {
    const Dims& cd = w.cores[k].dims();
    grouped.cores.push_back(
        reshape(w.cores[k], Dims{cd[0], cd[1] * cd[2], cd[3]}));
  }
  DenseTensor full = contract_full(grouped);
  Dims inter(2 * d);
  for (Index k = 0; k < d; ++k) {
    inter[2 * k] = w.row_dims[k];
    inter[2 * k + 1] = w.col_dims[k];
  }
  std::vector<Index> order(2 * d);
  for (Index k = 0; k < d; ++k) {
    order[k] = 2 * k + 1;          // row digits first
    order[d + k] = 2 * k + 2;      // then column digits
  }
  DenseTensor sorted = permute(reshape(full, inter), order);
  const Index rows = product(w.row_dims), cols = product(w.col_dims);
  return reshape(sorted, Dims{rows, cols}).as_matrix(rows, cols);
}

namespace {
constexpr char kMagic[4] = {'T', 'T', 'C', 'B'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated tensor train file");
  return v;
}
}  // namespace

void save_tt(const TensorTrain& tt, const std::string& path) {
  tt.check_valid();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write(kMagic, 4);
  write_pod(os, kVersion);
  write_pod<std::int64_t>(os, tt.order());
  for (Index i : tt.mode_dims()) write_pod<std::int64_t>(os, i);
  for (Index r : tt.ranks()) write_pod<std::int64_t>(os, r);
  write_pod<std::int64_t>(os, tt.canonical_site ? *tt.canonical_site : 0);
  for (const DenseTensor& c : tt.cores)
    os.write(reinterpret_cast<const char*>(c.data().data()),
             sizeof(double) * c.size());
  if (!os) throw std::runtime_error("write failed: " + path);
}

TensorTrain load_tt(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a tensor train file: " + path);
  if (read_pod<std::uint32_t>(is) != kVersion)
    throw std::runtime_error("unsupported tensor train file version");
  const auto d = read_pod<std::int64_t>(is);
  if (d < 1 || d > 1024) throw std::runtime_error("corrupt tensor train file");
  Dims dims(d);
  for (auto& v : dims) v = read_pod<std::int64_t>(is);
  Dims ranks(d + 1);
  for (auto& v : ranks) v = read_pod<std::int64_t>(is);
  const auto site = read_pod<std::int64_t>(is);
  TensorTrain tt;
  for (Index k = 0; k < d; ++k) {
    DenseTensor core(Dims{ranks[k], dims[k], ranks[k + 1]});
    is.read(reinterpret_cast<char*>(core.data().data()),
            sizeof(double) * core.size());
    if (!is) throw std::runtime_error("truncated tensor train file");
    tt.cores.push_back(std::move(core));
  }
  if (site > 0) tt.canonical_site = site;
  tt.check_valid();
  return tt;
}

}  // namespace ttc
