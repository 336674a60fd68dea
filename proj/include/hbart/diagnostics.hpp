#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hbart/data.hpp"
#include "hbart/sampler.hpp"

namespace hbart {

// Sorted posterior intervals for s(x_i) against a homoscedastic reference.
struct HEvidence {
  std::vector<std::size_t> order;  // original point index, ascending in shat
  std::vector<double> shat;        // posterior mean of s(x_i), sorted order
  std::vector<double> lo, hi;      // equal-tailed gamma interval, sorted order
  double gamma = 0.9;
  double sigma_ref = 0.0;
  double exclusion_fraction = 0.0;  // intervals not containing sigma_ref
};

HEvidence h_evidence(const PosteriorDraws& draws, double gamma, double sigma_ref);

// Predictive percentile of each observed response among its predictive
// samples, midrank rule for ties: p = (#below + 0.5 #equal) / N.
std::vector<double> predictive_percentiles(const Matrix& samples,
                                           std::span<const double> y);

// One-sample energy distance between the percentiles and U(0,1):
//   E = 2/n sum (p^2 - p + 1/2) - 1/n^2 sum |p_i - p_j| - 1/3
// using E|p-U| = p^2 - p + 1/2 and E|U-U'| = 1/3. Nonnegative, zero only in
// the uniform limit; used comparatively, so left unscaled by n.
double energy_statistic(std::span<const double> p);

// Deterministic balanced k-fold assignment from (seed, n, k).
std::vector<std::vector<std::size_t>> cv_folds(std::size_t n, int k,
                                               std::uint64_t seed);

struct CvCell {
  double kappa = 0.0;
  int fold = 0;
  double estat = 0.0;
};

struct CvResult {
  std::vector<CvCell> cells;      // kappa-major, fold-minor order
  double selected_kappa = 0.0;    // minimizes the median e-statistic
  std::vector<double> median_estat;  // per kappa
};

// Cross-validate kappa: refit on each k-1 fold split, score held-out
// predictive percentiles with the energy statistic. Cells run in parallel
// on `threads` threads with independent substreams; results are identical
// for any thread count.
CvResult cv_kappa(const DataSet& ds, const std::vector<double>& kappa_grid,
                  int folds, const PriorConfig& base_prior,
                  const ChainSettings& settings, int max_cuts, int threads = 1);

// Draw-by-draw trace series: sigma for the baseline model, otherwise the
// mean of s(x_i) over eval points, plus s(x) at five rank-spaced points.
struct TraceData {
  bool is_sigma = false;
  std::vector<double> summary;       // per kept draw
  std::vector<std::size_t> point_idx;  // up to 5 eval-point indices
  Matrix s_at;                       // kept draws x point_idx.size()
};

TraceData trace_data(const PosteriorDraws& draws);

// Proportion of internal-node splits per variable, each ensemble separately.
struct VariableActivity {
  std::vector<double> mean_prop;
  std::vector<double> var_prop;
};

VariableActivity variable_activity(const PosteriorDraws& draws);

// CSV emitters used by the CLI (deterministic formatting).
void write_hevidence_csv(const HEvidence& h, const std::string& path);
void write_percentiles_csv(std::span<const double> p, const std::string& path);
void write_cv_csv(const CvResult& r, const std::string& path);
void write_trace_csv(const TraceData& t, const std::string& path);
void write_variable_activity_csv(const VariableActivity& a,
                                 const std::vector<std::string>& names,
                                 const std::string& path);

}  // namespace hbart
