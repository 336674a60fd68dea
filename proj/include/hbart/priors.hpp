#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "hbart/data.hpp"

namespace hbart {

// All model hyperparameters plus provenance: derived fields are recomputed
// from their inputs by finalize() unless explicitly pinned.
struct PriorConfig {
  int m = 200;        // mean trees
  int m_prime = 40;   // variance trees

  double kappa = 5.0;
  double tau = 0.0;  // derived: (ymax - ymin) / (2 sqrt(m) kappa)
  bool tau_pinned = false;

  double nu = 10.0;
  double lambda = 0.0;  // derived: sample variance of y
  bool lambda_pinned = false;

  double nu_prime = 0.0;     // derived from (nu, m_prime)
  double lambda_prime = 0.0; // derived from (lambda, m_prime)
  bool var_prior_pinned = false;

  double alpha = 0.95;
  double beta = 2.0;
  double alpha_prime = 0.95;
  double beta_prime = 2.0;

  void validate() const;
};

// tau = (y_max - y_min) / (2 sqrt(m) kappa)
double calibrate_tau(double y_min, double y_max, int m, double kappa);

// Match the product-of-components prior mean to a single-variance prior
// scaled-inv-chi2(nu, lambda):
//   lambda' = lambda^(1/m'),   nu' = 2 / (1 - (1 - 2/nu)^(1/m'))
// so that E[prod s2_l] = (lambda')^m' (nu'/(nu'-2))^m' = lambda nu/(nu-2).
std::pair<double, double> calibrate_variance_prior(double nu, double lambda,
                                                   int m_prime);

// Defaults for a dataset: m=200, m'=40, kappa=5, nu=10, lambda=var(y),
// alpha=alpha'=0.95, beta=beta'=2, derived tau and (nu', lambda').
PriorConfig default_config(const DataSet& ds);

// Recompute all non-pinned derived fields from the response summaries.
void finalize(PriorConfig& cfg, double y_min, double y_max, double y_var);

// Plain-text key=value config file; unknown keys are an error. Setting a
// derived field (tau, nu_prime, lambda_prime, lambda) pins it.
void apply_config_file(PriorConfig& cfg, const std::string& path);
void apply_config_entries(PriorConfig& cfg,
                          const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> config_entries(const PriorConfig& cfg);

}  // namespace hbart
