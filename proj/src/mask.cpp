#include "ttc/mask.hpp"

#include "ttc/rng.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ttc {

namespace {

// Sampled 1-based positions within a sub-grid of the given dims.
std::vector<MultiIndex> sample_grid(const Dims& grid, double fraction,
                                    std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    detail::fail("observed fraction must lie in (0, 1]");
  const Index total = product(grid);
  const Index keep = std::min<Index>(
      total, static_cast<Index>(std::llround(fraction * total)));
  if (keep < 1) detail::fail("observed fraction keeps no entries");
  rng::Engine g = rng::make_engine(seed);
  std::vector<std::int64_t> picks = rng::sample_indices(total, keep, g);
  std::vector<MultiIndex> out;
  out.reserve(keep);
  for (std::int64_t p : picks) out.push_back(multi_index(p + 1, grid));
  return out;
}

}  // namespace

std::vector<MultiIndex> make_mask(const Dims& dims, double observed_fraction,
                                  MaskMode mode, std::uint64_t seed) {
  const Index d = static_cast<Index>(dims.size());
  if (d < 1) detail::fail("mask needs at least one mode");

  Dims head;     // sampled modes
  Dims tail;     // replicated modes
  if (mode == MaskMode::Iid) {
    if (d == 1) {
      head = dims;
    } else {
      head.assign(dims.begin(), dims.end() - 1);
      tail.assign(dims.end() - 1, dims.end());
    }
  } else {
    if (d < 3) detail::fail("sensor masks need spatial plus trailing modes");
    head.assign(dims.begin(), dims.begin() + 2);
    tail.assign(dims.begin() + 2, dims.end());
  }

  std::vector<MultiIndex> base = sample_grid(head, observed_fraction, seed);
  if (tail.empty()) return base;

  const Index reps = product(tail);
  std::vector<MultiIndex> out;
  out.reserve(base.size() * reps);
  for (const MultiIndex& m : base)
    for (Index t = 1; t <= reps; ++t) {
      MultiIndex full = m;
      MultiIndex sub = multi_index(t, tail);
      full.insert(full.end(), sub.begin(), sub.end());
      out.push_back(std::move(full));
    }
  return out;
}

std::vector<MultiIndex> sample_entries(const Dims& dims,
                                       double observed_fraction,
                                       std::uint64_t seed) {
  return sample_grid(dims, observed_fraction, seed);
}

void save_observations_csv(const ObservationSet& obs,
                           const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.precision(17);
  for (Index l = 0; l < obs.size(); ++l) {
    for (Index v : obs.index(l)) os << v << ",";
    os << obs.value(l) << "\n";
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

ObservationSet load_observations_csv(const std::string& path,
                                     const Dims& dims) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  const std::size_t d = dims.size();
  std::vector<MultiIndex> indices;
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    MultiIndex m(d);
    std::string tok;
    for (std::size_t k = 0; k < d; ++k) {
      if (!std::getline(ss, tok, ','))
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": expected " + std::to_string(d + 1) +
                                 " fields");
      m[k] = std::stoll(tok);
    }
    if (!std::getline(ss, tok, ','))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": missing value field");
    indices.push_back(std::move(m));
    values.push_back(std::stod(tok));
  }
  Eigen::VectorXd v =
      Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
  return ObservationSet(dims, std::move(indices), std::move(v));
}

}  // namespace ttc
