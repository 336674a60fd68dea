#include "hbart/variance_model.hpp"

#include <cmath>

#include "hbart/errors.hpp"

namespace hbart {

void var_complement(std::span<const double> s2hat, std::span<const double> h,
                    std::span<double> comp_out) {
  for (std::size_t i = 0; i < s2hat.size(); ++i) {
    if (!(s2hat[i] > 0.0))
      throw NumericError("var_complement: non-positive variance cache entry");
    comp_out[i] = s2hat[i] / h[i];
  }
}

double var_log_marginal(const VarLeafStats& stats, double nu_p, double lambda_p) {
  if (!std::isfinite(stats.sum_e2))
    throw NumericError("var_log_marginal: non-finite sufficient statistic");
  if (stats.count == 0) return 0.0;
  const double n = static_cast<double>(stats.count);
  const double a = nu_p * lambda_p;
  return std::lgamma(0.5 * (nu_p + n)) - std::lgamma(0.5 * nu_p) +
         0.5 * nu_p * std::log(0.5 * a) -
         0.5 * (nu_p + n) * std::log(0.5 * (a + stats.sum_e2));
}

double draw_var_leaf(const VarLeafStats& stats, double nu_p, double lambda_p,
                     Rng& rng) {
  const double n = static_cast<double>(stats.count);
  const double scale = (nu_p * lambda_p + stats.sum_e2) / (nu_p + n);
  return rng.scaled_inv_chi_squared(nu_p + n, scale);
}

double draw_sigma2_homoscedastic(std::span<const double> resid, double nu,
                                 double lambda, Rng& rng) {
  double ss = 0.0;
  for (double r : resid) ss += r * r;
  const double n = static_cast<double>(resid.size());
  const double scale = (nu * lambda + ss) / (nu + n);
  return rng.scaled_inv_chi_squared(nu + n, scale);
}

}  // namespace hbart
