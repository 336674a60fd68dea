#include "hbart/mean_model.hpp"

#include <cmath>

#include "hbart/errors.hpp"

namespace hbart {

void mean_residuals(std::span<const double> y, std::span<const double> fhat,
                    std::span<const double> g, std::span<double> r_out) {
  for (std::size_t i = 0; i < y.size(); ++i) r_out[i] = y[i] - fhat[i] + g[i];
}

double mean_log_marginal(const MeanLeafStats& stats, double tau) {
  if (!std::isfinite(stats.wsum_r) || !std::isfinite(stats.wsum_1))
    throw NumericError("mean_log_marginal: non-finite sufficient statistics");
  const double t2 = tau * tau;
  const double denom = t2 * stats.wsum_1;  // log1p keeps this stable when
  return -0.5 * std::log1p(denom)          // wsum_1 spans many magnitudes
         + 0.5 * t2 * stats.wsum_r * stats.wsum_r / (denom + 1.0);
}

double draw_mean_leaf(const MeanLeafStats& stats, double tau, Rng& rng) {
  const double prec = 1.0 / (tau * tau) + stats.wsum_1;
  const double mean = stats.wsum_r / prec;
  return mean + std::sqrt(1.0 / prec) * rng.normal();
}

}  // namespace hbart
