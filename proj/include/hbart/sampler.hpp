#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hbart/data.hpp"
#include "hbart/moves.hpp"
#include "hbart/priors.hpp"
#include "hbart/rng.hpp"
#include "hbart/tree.hpp"

namespace hbart {

enum class ModelKind { hbart, bart };

struct ChainSettings {
  long n_iter = 3000;
  long burn_in = 1000;
  long thin = 1;
  std::uint64_t seed = 1;
  ModelKind model = ModelKind::hbart;
  MoveWeights weights;
  int min_node_size = 5;
  int max_depth = 15;
  bool mean_moves = true;
  bool var_moves = true;
  long refresh_every = 100;   // full cache recomputation cadence
  long forest_every = 0;      // 0: keep no forests; k>0: every kth kept draw
  bool reverse_mean_sweep = false;  // update order within each block; the
  bool reverse_var_sweep = false;   // stationary law must not depend on it

  long kept() const { return (n_iter - burn_in) / thin; }
  void validate() const;
};

struct AcceptStats {
  long proposed = 0;
  long accepted = 0;
  long auto_rejected = 0;  // node-size guard trips
};

struct AcceptSummary {
  AcceptStats mean[3];  // birth, death, perturb
  AcceptStats var[3];
  long mean_skipped = 0;  // sweeps where no move was available
  long var_skipped = 0;
};

struct ForestSnapshot {
  long kept_index = 0;
  std::vector<Tree> mean_trees;
  std::vector<Tree> var_trees;
  double sigma2 = 0.0;  // baseline mode only
};

// Per kept draw: f(x) and s(x) at the evaluation points (response units,
// centering offset restored), plus optional forest snapshots.
struct PosteriorDraws {
  Matrix f;  // kept x points
  Matrix s;  // kept x points, s(x) = sqrt of the variance product
  double offset = 0.0;
  ModelKind model = ModelKind::hbart;
  PriorConfig prior;
  ChainSettings settings;
  CutpointGrid grid;
  AcceptSummary accept;
  std::vector<double> mean_split_counts;  // per variable, summed over kept draws
  std::vector<double> var_split_counts;
  std::vector<ForestSnapshot> forests;

  long n_kept() const { return static_cast<long>(f.rows); }
  long n_points() const { return static_cast<long>(f.cols); }
};

// One MCMC chain over the m mean trees and m' variance trees. The response
// is centered internally; fhat/s2hat caches are updated incrementally and
// recomputed from scratch every refresh_every iterations.
class Sampler {
 public:
  Sampler(const DataSet& ds, const CutpointGrid& grid, const PriorConfig& prior,
          const ChainSettings& settings);

  void iterate(Rng& rng);  // one full sweep (all mean trees, then all variance trees)

  double offset() const { return offset_; }
  long iteration() const { return iteration_; }
  const std::vector<Tree>& mean_forest() const { return mean_forest_; }
  const std::vector<Tree>& var_forest() const { return var_forest_; }
  double sigma2() const { return sigma2_; }
  const std::vector<double>& fhat() const { return fhat_; }
  const std::vector<double>& s2hat() const { return s2hat_; }
  const AcceptSummary& accept() const { return accept_; }

  // evaluate the current forests at one point (response units)
  double eval_f(std::span<const double> xrow) const;
  double eval_s2(std::span<const double> xrow) const;

  // recompute caches from the forests and fail if the incremental values
  // drifted beyond rel_tol
  void refresh_caches(double rel_tol = 1e-8);

 private:
  void mean_tree_step(std::size_t j, Rng& rng);
  void var_tree_step(std::size_t l, Rng& rng);
  void apply_accepted(Proposal& prop, std::vector<int>& leaf_of);

  const DataSet& ds_;
  const CutpointGrid& grid_;
  PriorConfig prior_;
  ChainSettings st_;
  MoveContext mean_ctx_, var_ctx_;

  std::vector<double> yc_;  // centered response
  double offset_ = 0.0;

  std::vector<Tree> mean_forest_, var_forest_;
  std::vector<std::vector<int>> mean_leaf_of_, var_leaf_of_;
  std::vector<double> fhat_, s2hat_;
  double sigma2_ = 1.0;
  long iteration_ = 0;
  AcceptSummary accept_;

  // scratch
  std::vector<double> g_, r_, comp_, e2_;
};

// Run a chain and record f and s at eval_points for every kept draw.
PosteriorDraws run_chain(const DataSet& ds, const CutpointGrid& grid,
                         const PriorConfig& prior, const ChainSettings& settings,
                         const Matrix& eval_points);

// --- prediction -----------------------------------------------------------

struct PredictionSummary {
  std::vector<double> f_mean, f_lo, f_hi;
  std::vector<double> s_mean, s_lo, s_hi;
  double level = 0.95;
};

PredictionSummary summarize_draws(const PosteriorDraws& draws, double level = 0.95);

// one predictive response draw f + s*z per kept draw and point
Matrix predictive_samples(const PosteriorDraws& draws, Rng& rng);

// plug-in approximation: n_samples draws per point from N(f_mean, s_mean^2)
Matrix plugin_samples(const PosteriorDraws& draws, long n_samples, Rng& rng);

// evaluate stored forest snapshots at new points (draws.forests must be
// nonempty); f/s of the result have one row per snapshot
PosteriorDraws draws_at_points(const PosteriorDraws& fitted, const Matrix& x_new);

// --- snapshot file ----------------------------------------------------------

void save_forests(const PosteriorDraws& draws, const std::string& path);
PosteriorDraws load_forests(const std::string& path);

// draw matrices as CSV: iter,f@p1..f@pk,s@p1..s@pk
void write_draws_csv(const PosteriorDraws& draws, const std::string& path);
PosteriorDraws read_draws_csv(const std::string& path);

}  // namespace hbart
