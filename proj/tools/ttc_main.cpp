// Command-line driver for tensor-train completion: build observation sets
// from images or CSV files, plan dimension factorizations and rank
// schedules, run the sweep solver, and report quality metrics.

#include "CLI11.hpp"
#include "json.hpp"

#include "ttc/als_solver.hpp"
#include "ttc/image_io.hpp"
#include "ttc/mask.hpp"
#include "ttc/metrics.hpp"
#include "ttc/rank_planner.hpp"
#include "ttc/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ttc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Dims parse_dims(const std::string& text) {
  Dims out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, 'x')) {
    if (tok.empty()) throw ConfigError("bad dims: " + text);
    out.push_back(std::stoll(tok));
  }
  if (out.empty()) throw ConfigError("bad dims: " + text);
  return out;
}

std::vector<Index> parse_int_list(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoll(tok));
  return out;
}

std::string dims_to_string(const Dims& dims) {
  std::string out;
  for (std::size_t i = 0; i < dims.size(); ++i)
    out += (i ? "x" : "") + std::to_string(dims[i]);
  return out;
}

// Run settings merged from the config file and command-line overrides.
struct RunSettings {
  std::optional<std::vector<Dims>> factorization;
  std::optional<std::vector<Index>> ranks;  // explicit R_2..R_d
  Index r2 = 0, rmid = 0, rdm1 = 0, rd = 0;
  double lambda = 0.0;
  double gamma = 0.0;
  Index h = 0;
  Index sweeps = 10;
  double tolerance = 0.0;
  std::string init = "interp";
  std::uint64_t seed = 0;
  double mask_fraction = 0.0;
  std::string mask_mode = "iid";
  bool adapt = true;
};

void apply_config_file(RunSettings& s, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
  if (j.contains("factorization")) {
    std::vector<Dims> f;
    for (const auto& mode : j["factorization"]) {
      Dims m;
      for (const auto& v : mode) m.push_back(v.get<Index>());
      f.push_back(std::move(m));
    }
    s.factorization = std::move(f);
  }
  if (j.contains("ranks"))
    s.ranks = std::vector<Index>(j["ranks"].begin(), j["ranks"].end());
  if (j.contains("schedule")) {
    const auto& sc = j["schedule"];
    s.r2 = sc.value("r2", 0);
    s.rmid = sc.value("rmid", 0);
    s.rdm1 = sc.value("rdm1", 0);
    s.rd = sc.value("rd", 0);
  }
  s.lambda = j.value("lambda", s.lambda);
  s.gamma = j.value("gamma", s.gamma);
  s.h = j.value("h", s.h);
  s.sweeps = j.value("sweeps", s.sweeps);
  s.tolerance = j.value("tolerance", s.tolerance);
  s.init = j.value("init", s.init);
  s.seed = j.value("seed", s.seed);
  s.adapt = j.value("lambda_adaptation", s.adapt);
  if (j.contains("mask")) {
    s.mask_fraction = j["mask"].value("fraction", s.mask_fraction);
    s.mask_mode = j["mask"].value("mode", s.mask_mode);
  }
}

DenseTensor load_tensor_any(const std::string& path) {
  const std::string ext = fs::path(path).extension().string();
  if (ext == ".dt") return load_dense(path);
  return load_image(path).tensor;
}

// Frames of a video directory stacked into H x W x F x 3.
DenseTensor load_frames(const std::string& dir) {
  std::vector<std::string> paths;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string ext = e.path().extension().string();
    if (ext == ".ppm" || ext == ".pgm") paths.push_back(e.path().string());
  }
  if (paths.empty()) throw ConfigError("no frames in " + dir);
  std::sort(paths.begin(), paths.end());
  DenseTensor first = load_image(paths[0]).tensor;
  const Index h = first.dims()[0], w = first.dims()[1];
  const Index f = static_cast<Index>(paths.size());
  DenseTensor out(Dims{h, w, f, 3});
  for (Index t = 0; t < f; ++t) {
    DenseTensor frame = t == 0 ? first : load_image(paths[t]).tensor;
    if (frame.dims() != first.dims())
      throw ConfigError("frame sizes differ in " + dir);
    for (Index c = 0; c < 3; ++c)
      for (Index j = 0; j < w; ++j)
        for (Index i = 0; i < h; ++i)
          out[i + h * (j + w * (t + f * c))] = frame[i + h * (j + w * c)];
  }
  return out;
}

// A dense mask image marks a pixel observed when all its channels are
// nonzero; the spatial pattern is replicated over any trailing modes.
std::vector<MultiIndex> mask_from_image(const std::string& path,
                                        const Dims& dims) {
  Image mask = load_image(path);
  if (mask.tensor.dims()[0] != dims[0] || mask.tensor.dims()[1] != dims[1])
    throw ConfigError("mask image size does not match the data");
  const Index h = dims[0], w = dims[1];
  Dims tail(dims.begin() + 2, dims.end());
  const Index reps = tail.empty() ? 1 : product(tail);
  std::vector<MultiIndex> out;
  for (Index j = 1; j <= w; ++j)
    for (Index i = 1; i <= h; ++i) {
      bool on = true;
      for (Index c = 1; c <= 3; ++c) on = on && mask.tensor.at({i, j, c}) > 0;
      if (!on) continue;
      for (Index t = 1; t <= reps; ++t) {
        MultiIndex m{i, j};
        if (!tail.empty()) {
          MultiIndex sub = multi_index(t, tail);
          m.insert(m.end(), sub.begin(), sub.end());
        }
        out.push_back(std::move(m));
      }
    }
  if (out.empty()) throw ConfigError("mask image keeps no pixels");
  return out;
}

void write_diag_csv(const std::string& path, const Diagnostics& diag) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path + " for writing");
  os << "sweep,half,residual,rse_train,lambda_1,lambda_2,seconds\n";
  os.precision(12);
  for (const HalfSweepRecord& r : diag.half_sweeps) {
    const double l1 = r.lambdas.size() > 0 ? r.lambdas[0] : 0.0;
    const double l2 = r.lambdas.size() > 1 ? r.lambdas[1] : 0.0;
    os << r.sweep << "," << r.half << "," << r.residual << ","
       << r.relative_residual << "," << l1 << "," << l2 << "," << r.seconds
       << "\n";
  }
}

std::vector<Dims> resolve_factorization(const RunSettings& s,
                                        const Dims& dims) {
  if (s.factorization) {
    if (s.factorization->size() != dims.size())
      throw ConfigError("factorization must list every mode");
    return *s.factorization;
  }
  FactorizationReport rep = factorize_dims(dims);
  for (const std::string& w : rep.warnings)
    std::cerr << "warning: " << w << "\n";
  return rep.mode_factors;
}

std::vector<Index> resolve_ranks(const RunSettings& s, const Dims& chain) {
  if (s.ranks) return clamp_bond_ranks(chain, *s.ranks);
  if (s.r2 > 0 && s.rmid > 0)
    return rank_schedule(chain, s.r2, s.rmid, s.rdm1, s.rd);
  // modest default plateau
  return rank_schedule(chain, std::min<Index>(chain.front(), 8), 8, 0,
                       chain.back() == 3 ? 3 : 0);
}

SolverOptions make_solver_options(const RunSettings& s) {
  SolverOptions o;
  o.gamma = s.gamma;
  o.max_sweeps = s.sweeps;
  o.residual_tolerance = s.tolerance;
  o.lambda_adaptation = s.adapt;
  o.interp.h = s.h;
  if (s.init == "interp")
    o.init_mode = InitMode::Interp;
  else if (s.init == "zero")
    o.init_mode = InitMode::ZeroFill;
  else
    throw ConfigError("unknown init mode: " + s.init);
  return o;
}

struct LoadedProblem {
  Dims dims;
  ObservationSet observations;
  std::optional<DenseTensor> truth;  // for metrics when available
};

LoadedProblem load_problem(const std::string& image, const std::string& frames,
                           const std::string& observations,
                           const std::string& mask, const std::string& dims_flag,
                           const RunSettings& s) {
  LoadedProblem out;
  if (!image.empty() || !frames.empty()) {
    DenseTensor data =
        !image.empty() ? load_tensor_any(image) : load_frames(frames);
    out.dims = data.dims();
    out.truth = data;
    std::vector<MultiIndex> idx;
    if (!mask.empty()) {
      const std::string ext = fs::path(mask).extension().string();
      if (ext == ".csv") {
        out.observations = load_observations_csv(mask, out.dims);
        return out;
      }
      idx = mask_from_image(mask, out.dims);
    } else if (s.mask_fraction > 0.0) {
      idx = make_mask(out.dims, s.mask_fraction,
                      s.mask_mode == "sensor" ? MaskMode::Sensor : MaskMode::Iid,
                      s.seed);
    } else {
      throw ConfigError("need --mask or a mask fraction in the config");
    }
    out.observations = gather(data, idx);
    return out;
  }
  if (!observations.empty()) {
    if (dims_flag.empty())
      throw ConfigError("--observations needs --dims");
    out.dims = parse_dims(dims_flag);
    out.observations = load_observations_csv(observations, out.dims);
    return out;
  }
  throw ConfigError("need --image, --frames or --observations");
}

int cmd_complete(const std::string& image, const std::string& frames,
                 const std::string& observations, const std::string& mask,
                 const std::string& dims_flag, const std::string& truth_path,
                 const RunSettings& s, Index grouped, bool dry_run,
                 const std::string& out, const std::string& diag_path,
                 const std::string& metrics_path, const std::string& tt_path) {
  LoadedProblem lp =
      load_problem(image, frames, observations, mask, dims_flag, s);
  if (!truth_path.empty()) lp.truth = load_tensor_any(truth_path);

  std::vector<Dims> factors = resolve_factorization(s, lp.dims);
  const Index spatial_modes =
      static_cast<Index>(lp.dims.size()) - (grouped > 0 ? grouped : 0);
  Dims chain;
  if (grouped > 0) {
    Index c = 1;
    for (Index m = spatial_modes; m < static_cast<Index>(lp.dims.size()); ++m)
      c *= lp.dims[m];
    for (Index m = 0; m < spatial_modes; ++m)
      chain.insert(chain.end(), factors[m].begin(), factors[m].end());
    chain[0] *= c;
  } else {
    for (const Dims& f : factors) chain.insert(chain.end(), f.begin(), f.end());
  }
  std::vector<Index> ranks = resolve_ranks(s, chain);

  std::printf("dims: %s\n", dims_to_string(lp.dims).c_str());
  std::printf("chain: %s\n", dims_to_string(chain).c_str());
  std::printf("ranks:");
  for (Index r : ranks) std::printf(" %lld", static_cast<long long>(r));
  std::printf("\nobservations: %lld\n",
              static_cast<long long>(lp.observations.size()));
  if (dry_run) return 0;

  SolverOptions opts = make_solver_options(s);
  CompletionResult result;
  DenseTensor completed;
  if (grouped > 0) {
    std::vector<Dims> spatial(factors.begin(), factors.begin() + spatial_modes);
    GroupedProblem gp(lp.observations, grouped, spatial, ranks, opts);
    result = complete_grouped(gp);
    completed = gp.ungroup(contract_full(result.tt));
  } else {
    CompletionProblem p(lp.observations, factors, ranks, opts);
    if (s.lambda > 0.0)
      for (Index m = 1; m <= std::min<Index>(2, spatial_modes); ++m)
        p.add_tv(m, s.lambda);
    result = complete(p);
    completed = reshape(contract_full(result.tt), lp.dims);
  }

  const double final_residual =
      result.diagnostics.half_sweeps.empty()
          ? 0.0
          : result.diagnostics.half_sweeps.back().residual;
  if (!std::isfinite(final_residual) || !completed.data().allFinite()) {
    std::cerr << "numerical failure: non-finite result\n";
    return kExitNumerical;
  }

  if (!out.empty()) {
    const std::string ext = fs::path(out).extension().string();
    if (ext == ".dt")
      save_dense(completed, out);
    else if (completed.order() == 4) {  // video: one frame per file
      fs::create_directories(out);
      const Index h = completed.dims()[0], w = completed.dims()[1],
                  f = completed.dims()[2];
      for (Index t = 0; t < f; ++t) {
        DenseTensor frame(Dims{h, w, 3});
        for (Index c = 0; c < 3; ++c)
          for (Index j = 0; j < w; ++j)
            for (Index i = 0; i < h; ++i)
              frame[i + h * (j + w * c)] =
                  completed[i + h * (j + w * (t + f * c))];
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%04lld.ppm",
                      static_cast<long long>(t));
        save_image(frame, (fs::path(out) / name).string());
      }
    } else {
      save_image(completed, out);
    }
  }
  if (!tt_path.empty()) save_tt(result.tt, tt_path);
  if (!diag_path.empty()) write_diag_csv(diag_path, result.diagnostics);

  json metrics;
  metrics["residual"] = final_residual;
  metrics["relative_residual"] =
      result.diagnostics.half_sweeps.back().relative_residual;
  metrics["sweeps"] = result.diagnostics.sweeps_run;
  metrics["converged"] = result.diagnostics.converged;
  if (lp.truth) {
    metrics["rse"] = rse(*lp.truth, completed);
    metrics["psnr"] = psnr(*lp.truth, completed, 1.0);
  }
  std::printf("residual: %.6e (relative %.6e), sweeps: %lld\n", final_residual,
              result.diagnostics.half_sweeps.back().relative_residual,
              static_cast<long long>(result.diagnostics.sweeps_run));
  if (lp.truth) std::printf("rse: %.12e\n", metrics["rse"].get<double>());
  if (!metrics_path.empty()) {
    std::ofstream os(metrics_path);
    os << metrics.dump(2) << "\n";
  }
  return 0;
}

int cmd_cv(const std::string& image, const std::string& observations,
           const std::string& mask, const std::string& dims_flag,
           const RunSettings& s, const std::string& candidates_flag,
           Index trials, double holdout, const std::string& out) {
  LoadedProblem lp = load_problem(image, "", observations, mask, dims_flag, s);
  std::vector<Dims> factors = resolve_factorization(s, lp.dims);

  std::vector<RankCandidate> candidates;
  std::stringstream ss(candidates_flag);
  std::string group;
  while (std::getline(ss, group, ';')) {
    std::vector<Index> v = parse_int_list(group);
    if (v.size() != 4)
      throw ConfigError("each candidate needs r2,rmid,rdm1,rd");
    candidates.push_back({v[0], v[1], v[2], v[3]});
  }
  if (candidates.empty()) throw ConfigError("no rank candidates given");

  SolverOptions opts = make_solver_options(s);
  CrossValidationResult cv = cross_validate(lp.observations, factors,
                                            candidates, opts, trials, holdout,
                                            s.seed);
  std::vector<std::size_t> order(cv.scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cv.scores[a].mean_rse < cv.scores[b].mean_rse;
  });

  std::ostringstream table;
  table << "r2,rmid,rdm1,rd,mean_rse,parameters,selected\n";
  for (std::size_t i : order) {
    const CandidateScore& c = cv.scores[i];
    table << c.candidate.r2 << "," << c.candidate.rmid << ","
          << c.candidate.r_dm1 << "," << c.candidate.rd << "," << c.mean_rse
          << "," << c.parameter_count << "," << (i == cv.best ? 1 : 0) << "\n";
  }
  std::fputs(table.str().c_str(), stdout);
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw ConfigError("cannot open " + out + " for writing");
    os << table.str();
  }
  return 0;
}

int cmd_mask(const std::string& dims_flag, const std::string& image,
             double fraction, const std::string& mode, std::uint64_t seed,
             const std::string& out) {
  DenseTensor source;
  Dims dims;
  if (!image.empty()) {
    source = load_tensor_any(image);
    dims = source.dims();
  } else if (!dims_flag.empty()) {
    dims = parse_dims(dims_flag);
  } else {
    throw ConfigError("need --dims or --image");
  }
  MaskMode m = mode == "sensor" ? MaskMode::Sensor : MaskMode::Iid;
  std::vector<MultiIndex> idx = make_mask(dims, fraction, m, seed);

  const std::string ext = fs::path(out).extension().string();
  if (ext == ".csv") {
    if (image.empty())
      throw ConfigError("CSV masks carry values; pass --image");
    save_observations_csv(gather(source, idx), out);
  } else {
    if (dims.size() < 2) throw ConfigError("mask images need 2 spatial modes");
    DenseTensor maskimg(Dims{dims[0], dims[1], 3});
    for (const MultiIndex& mi : idx)
      for (Index c = 1; c <= 3; ++c) maskimg.at({mi[0], mi[1], c}) = 1.0;
    save_image(maskimg, out);
  }
  std::printf("kept %lld observations\n", static_cast<long long>(idx.size()));
  return 0;
}

int cmd_metrics(const std::string& truth_path, const std::string& est_path,
                double max_value, const std::string& out) {
  DenseTensor truth = load_tensor_any(truth_path);
  DenseTensor est = load_tensor_any(est_path);
  const double r = rse(truth, est);
  const double p = psnr(truth, est, max_value);
  std::printf("rse: %.12e\npsnr: %.6f dB\n", r, p);
  if (!out.empty()) {
    json j;
    j["rse"] = r;
    j["psnr"] = p;
    std::ofstream os(out);
    os << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_synth(const std::string& dims_flag, const std::string& ranks_flag,
              double fraction, std::uint64_t seed, const std::string& out_dir) {
  Dims dims = parse_dims(dims_flag);
  std::vector<Index> ranks = parse_int_list(ranks_flag);
  SynthInstance inst = synth_instance(dims, ranks, fraction, seed);
  fs::create_directories(out_dir);
  save_dense(inst.truth, (fs::path(out_dir) / "truth.dt").string());
  save_observations_csv(inst.observations,
                        (fs::path(out_dir) / "observations.csv").string());
  json meta;
  meta["dims"] = dims;
  meta["ranks"] = inst.ranks;
  meta["fraction"] = fraction;
  meta["seed"] = seed;
  meta["observations"] = inst.observations.size();
  std::ofstream os((fs::path(out_dir) / "meta.json").string());
  os << meta.dump(2) << "\n";
  std::printf("wrote %s (%lld observations)\n", out_dir.c_str(),
              static_cast<long long>(inst.observations.size()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor-train tensor completion"};
  app.require_subcommand(1);

  std::string config_path, image, frames, observations, mask, dims_flag,
      truth_path, out, diag_path, metrics_path, tt_path, candidates_flag,
      ranks_flag, factors_flag, est_path;
  RunSettings settings;
  Index grouped = 0, trials = 10;
  double holdout = 0.1, fraction = 0.1, max_value = 1.0;
  bool dry_run = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--seed", settings.seed, "RNG seed");
  };
  auto add_problem_inputs = [&](CLI::App* cmd) {
    cmd->add_option("--image", image, "input image (PPM/PGM) or tensor (.dt)");
    cmd->add_option("--observations", observations, "observation CSV");
    cmd->add_option("--mask", mask, "mask file (.csv with values, or image)");
    cmd->add_option("--dims", dims_flag, "dimensions, e.g. 32x32x3");
    cmd->add_option("--fraction", settings.mask_fraction,
                    "observed fraction when sampling a mask");
    cmd->add_option("--mask-mode", settings.mask_mode, "iid or sensor");
  };
  auto add_solver_flags = [&](CLI::App* cmd) {
    cmd->add_option("--ranks", ranks_flag, "explicit bond ranks R_2..R_d");
    cmd->add_option("--r2", settings.r2, "first bond rank");
    cmd->add_option("--rmid", settings.rmid, "plateau rank");
    cmd->add_option("--rdm1", settings.rdm1, "second-to-last bond rank");
    cmd->add_option("--rd", settings.rd, "last bond rank");
    cmd->add_option("--factors", factors_flag,
                    "factorization, e.g. 6,4,4;6,4,4;3");
    cmd->add_option("--lambda", settings.lambda, "TV weight (modes 1 and 2)");
    cmd->add_option("--gamma", settings.gamma, "Tikhonov weight");
    cmd->add_option("--coarsen", settings.h, "interpolation coarsening factor");
    cmd->add_option("--sweeps", settings.sweeps, "maximum sweeps");
    cmd->add_option("--tol", settings.tolerance, "residual tolerance");
    cmd->add_option("--init", settings.init, "interp or zero");
    cmd->add_flag("!--no-adapt", settings.adapt, "disable lambda adaptation");
  };

  CLI::App* c_complete = app.add_subcommand("complete", "run a completion");
  add_common(c_complete);
  add_problem_inputs(c_complete);
  add_solver_flags(c_complete);
  c_complete->add_option("--frames", frames, "directory of video frames");
  c_complete->add_option("--truth", truth_path, "ground truth for metrics");
  c_complete->add_option("--grouped", grouped,
                         "trailing modes solved as matrix columns");
  c_complete->add_flag("--dry-run", dry_run,
                       "print the planned factorization and ranks only");
  c_complete->add_option("--out", out, "completed output (image, dir or .dt)");
  c_complete->add_option("--diag", diag_path, "per-sweep diagnostics CSV");
  c_complete->add_option("--metrics-out", metrics_path, "metrics JSON");
  c_complete->add_option("--save-tt", tt_path, "serialized train output");

  CLI::App* c_cv = app.add_subcommand("cv", "cross-validate rank schedules");
  add_common(c_cv);
  add_problem_inputs(c_cv);
  add_solver_flags(c_cv);
  c_cv->add_option("--candidates", candidates_flag,
                   "schedules r2,rmid,rdm1,rd separated by ';'");
  c_cv->add_option("--trials", trials, "trials per candidate");
  c_cv->add_option("--holdout", holdout, "held-out fraction");
  c_cv->add_option("--out", out, "score table CSV");

  CLI::App* c_mask = app.add_subcommand("mask", "generate an observation mask");
  add_common(c_mask);
  c_mask->add_option("--dims", dims_flag, "dimensions, e.g. 32x32x3");
  c_mask->add_option("--image", image, "source for gathered values");
  c_mask->add_option("--fraction", fraction, "observed fraction")->required();
  c_mask->add_option("--mode", settings.mask_mode, "iid or sensor");
  c_mask->add_option("--out", out, "output (.csv or mask image)")->required();

  CLI::App* c_metrics = app.add_subcommand("metrics", "RSE/PSNR of files");
  c_metrics->add_option("--truth", truth_path)->required();
  c_metrics->add_option("--estimate", est_path)->required();
  c_metrics->add_option("--max", max_value, "peak value for PSNR");
  c_metrics->add_option("--out", out, "metrics JSON");

  CLI::App* c_synth = app.add_subcommand("synth",
                                         "emit a synthetic instance + mask");
  add_common(c_synth);
  c_synth->add_option("--dims", dims_flag)->required();
  c_synth->add_option("--ranks", ranks_flag, "bond ranks R_2..R_d")->required();
  c_synth->add_option("--fraction", fraction, "observed fraction");
  c_synth->add_option("--out-dir", out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) apply_config_file(settings, config_path);
    // explicit flags win over the config file
    for (CLI::App* cmd : {c_complete, c_cv}) {
      if (!cmd->parsed()) continue;
      if (!ranks_flag.empty()) settings.ranks = parse_int_list(ranks_flag);
      if (!factors_flag.empty()) {
        std::vector<Dims> f;
        std::stringstream ss(factors_flag);
        std::string group;
        while (std::getline(ss, group, ';'))
          f.push_back(parse_int_list(group));
        settings.factorization = std::move(f);
      }
    }

    if (c_complete->parsed())
      return cmd_complete(image, frames, observations, mask, dims_flag,
                          truth_path, settings, grouped, dry_run, out,
                          diag_path, metrics_path, tt_path);
    if (c_cv->parsed())
      return cmd_cv(image, observations, mask, dims_flag, settings,
                    candidates_flag, trials, holdout, out);
    if (c_mask->parsed())
      return cmd_mask(dims_flag, image, fraction, settings.mask_mode,
                      settings.seed, out);
    if (c_metrics->parsed())
      return cmd_metrics(truth_path, est_path, max_value, out);
    if (c_synth->parsed())
      return cmd_synth(dims_flag, ranks_flag, fraction, settings.seed, out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
