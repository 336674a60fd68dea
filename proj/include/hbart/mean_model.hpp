#pragma once

#include <span>

#include "hbart/rng.hpp"

namespace hbart {

// Sufficient statistics of one mean-tree leaf under heteroscedastic noise:
// residuals r_i with per-observation variances s2_i enter only through
//   wsum_r = sum r_i / s2_i   and   wsum_1 = sum 1 / s2_i.
struct MeanLeafStats {
  double wsum_r = 0.0;
  double wsum_1 = 0.0;
  long count = 0;

  void add(double r, double s2) {
    wsum_r += r / s2;
    wsum_1 += 1.0 / s2;
    ++count;
  }
};

// Residuals for one tree against the cached total fit:
// r_i = y_i - fhat_i + g_i, where g_i is this tree's own contribution.
void mean_residuals(std::span<const double> y, std::span<const double> fhat,
                    std::span<const double> g, std::span<double> r_out);

// Log integrated likelihood of a leaf with prior mu ~ N(0, tau^2), up to an
// additive constant that is common to the node sets compared in one MH step
// (the product of N(r_i | 0, s2_i) factors, fixed while mean trees move):
//   -0.5*log(tau^2*wsum_1 + 1) + 0.5*tau^2*wsum_r^2 / (tau^2*wsum_1 + 1)
double mean_log_marginal(const MeanLeafStats& stats, double tau);

// Full-conditional draw of a leaf mean:
//   N( wsum_r / (1/tau^2 + wsum_1), 1 / (1/tau^2 + wsum_1) )
// With empty stats this is exactly the prior N(0, tau^2).
double draw_mean_leaf(const MeanLeafStats& stats, double tau, Rng& rng);

}  // namespace hbart
