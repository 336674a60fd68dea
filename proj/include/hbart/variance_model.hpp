#pragma once

#include <span>

#include "hbart/rng.hpp"

namespace hbart {

// Sufficient statistics of one variance-tree leaf: normalized squared
// residuals e2_i = (y_i - fhat_i)^2 / s2_comp_i enter only through their sum,
// where s2_comp_i is the product of the other variance trees at x_i.
struct VarLeafStats {
  double sum_e2 = 0.0;
  long count = 0;

  void add(double e2) {
    sum_e2 += e2;
    ++count;
  }
};

// Complement variance for one tree by division from the cached total
// product: s2_comp_i = s2hat_i / h_i. Aborts on a non-positive cache entry.
void var_complement(std::span<const double> s2hat, std::span<const double> h,
                    std::span<double> comp_out);

// Log integrated likelihood of a leaf with prior s2 ~ scaled-inv-chi2(nu, lambda),
// keeping only the node-varying factors:
//   lgamma((nu+n)/2) - lgamma(nu/2) + (nu/2) log(nu*lambda/2)
//   - ((nu+n)/2) log((nu*lambda + sum_e2)/2)
// The dropped (2*pi)^(-n/2) and complement-product factors are common to the
// node sets compared within one MH step (the observation set is fixed and the
// complement is held fixed while this tree moves), so they cancel. n = 0
// yields exactly 0.
double var_log_marginal(const VarLeafStats& stats, double nu_p, double lambda_p);

// Full-conditional draw of a leaf variance:
//   scaled-inv-chi2( nu + n, (nu*lambda + sum_e2) / (nu + n) )
// With empty stats this is exactly the prior.
double draw_var_leaf(const VarLeafStats& stats, double nu_p, double lambda_p,
                     Rng& rng);

// Homoscedastic baseline update: one global variance with prior
// scaled-inv-chi2(nu, lambda) given mean-fit residuals.
double draw_sigma2_homoscedastic(std::span<const double> resid, double nu,
                                 double lambda, Rng& rng);

}  // namespace hbart
