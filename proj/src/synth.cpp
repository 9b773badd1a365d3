#include "ttc/synth.hpp"

#include "ttc/mask.hpp"

namespace ttc {

TensorTrain random_tt(const Dims& dims, const std::vector<Index>& bond_ranks,
                      rng::Engine& g) {
  std::vector<Index> ranks = clamp_bond_ranks(dims, bond_ranks);
  const Index d = static_cast<Index>(dims.size());
  TensorTrain tt;
  for (Index k = 0; k < d; ++k) {
    const Index rl = k == 0 ? 1 : ranks[k - 1];
    const Index rr = k == d - 1 ? 1 : ranks[k];
    DenseTensor core(Dims{rl, dims[k], rr});
    for (Index i = 0; i < core.size(); ++i) core[i] = rng::normal(g);
    tt.cores.push_back(std::move(core));
  }
  return tt;
}

DenseTensor random_tensor(const Dims& dims, rng::Engine& g) {
  DenseTensor t(dims);
  for (Index i = 0; i < t.size(); ++i) t[i] = rng::normal(g);
  return t;
}

SynthInstance synth_instance(const Dims& dims,
                             const std::vector<Index>& bond_ranks,
                             double observed_fraction, std::uint64_t seed) {
  rng::Engine g = rng::make_engine(seed);
  TensorTrain tt = random_tt(dims, bond_ranks, g);
  SynthInstance out;
  out.truth = contract_full(tt);
  const Dims r = tt.ranks();
  out.ranks.assign(r.begin() + 1, r.end() - 1);
  out.observations = gather(
      out.truth, sample_entries(dims, observed_fraction, seed ^ 0x9e3779b9ull));
  return out;
}

}  // namespace ttc
