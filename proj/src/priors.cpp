#include "hbart/priors.hpp"

#include <cmath>
#include <fstream>

#include "hbart/errors.hpp"
#include "hbart/io_util.hpp"

namespace hbart {

double calibrate_tau(double y_min, double y_max, int m, double kappa) {
  if (!(y_max > y_min)) throw DataError("calibrate_tau: y_max must exceed y_min");
  if (m < 1 || !(kappa > 0.0)) throw DataError("calibrate_tau: bad m or kappa");
  return (y_max - y_min) / (2.0 * std::sqrt(static_cast<double>(m)) * kappa);
}

std::pair<double, double> calibrate_variance_prior(double nu, double lambda,
                                                   int m_prime) {
  if (!(nu > 2.0))
    throw DataError("calibrate_variance_prior: nu must exceed 2 (prior mean undefined)");
  if (!(lambda > 0.0) || m_prime < 1)
    throw DataError("calibrate_variance_prior: bad lambda or m_prime");
  const double inv_mp = 1.0 / static_cast<double>(m_prime);
  const double lambda_p = std::pow(lambda, inv_mp);
  // nu' = 2 / (1 - (1 - 2/nu)^(1/m')), via expm1/log1p for large m'
  const double nu_p = 2.0 / -std::expm1(inv_mp * std::log1p(-2.0 / nu));
  return {nu_p, lambda_p};
}

void PriorConfig::validate() const {
  if (m < 1 || m_prime < 1) throw DataError("prior config: tree counts must be >= 1");
  if (!(kappa > 0.0)) throw DataError("prior config: kappa must be > 0");
  if (!(tau > 0.0)) throw DataError("prior config: tau must be > 0");
  if (!(nu > 2.0)) throw DataError("prior config: nu must be > 2");
  if (!(lambda > 0.0)) throw DataError("prior config: lambda must be > 0");
  if (!(nu_prime > 2.0)) throw DataError("prior config: nu' must be > 2");
  if (!(lambda_prime > 0.0)) throw DataError("prior config: lambda' must be > 0");
  for (double a : {alpha, alpha_prime})
    if (!(a > 0.0 && a < 1.0)) throw DataError("prior config: alpha must be in (0,1)");
  for (double b : {beta, beta_prime})
    if (!(b >= 0.0)) throw DataError("prior config: beta must be >= 0");
}

void finalize(PriorConfig& cfg, double y_min, double y_max, double y_var) {
  if (!cfg.lambda_pinned) {
    if (!(y_var > 0.0)) throw DataError("prior config: response variance is zero");
    cfg.lambda = y_var;
  }
  if (!cfg.tau_pinned) cfg.tau = calibrate_tau(y_min, y_max, cfg.m, cfg.kappa);
  if (!cfg.var_prior_pinned)
    std::tie(cfg.nu_prime, cfg.lambda_prime) =
        calibrate_variance_prior(cfg.nu, cfg.lambda, cfg.m_prime);
  cfg.validate();
}

PriorConfig default_config(const DataSet& ds) {
  if (ds.n() < 2) throw DataError("default_config: need at least 2 rows");
  double ymin = ds.y[0], ymax = ds.y[0], mean = 0.0;
  for (double v : ds.y) {
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
    mean += v;
  }
  mean /= static_cast<double>(ds.n());
  double ss = 0.0;
  for (double v : ds.y) ss += (v - mean) * (v - mean);
  const double y_var = ss / static_cast<double>(ds.n() - 1);

  PriorConfig cfg;
  finalize(cfg, ymin, ymax, y_var);
  return cfg;
}

std::map<std::string, std::string> config_entries(const PriorConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["m"] = std::to_string(cfg.m);
  kv["mprime"] = std::to_string(cfg.m_prime);
  kv["kappa"] = format_double(cfg.kappa);
  kv["tau"] = format_double(cfg.tau);
  kv["nu"] = format_double(cfg.nu);
  kv["lambda"] = format_double(cfg.lambda);
  kv["nu_prime"] = format_double(cfg.nu_prime);
  kv["lambda_prime"] = format_double(cfg.lambda_prime);
  kv["alpha"] = format_double(cfg.alpha);
  kv["beta"] = format_double(cfg.beta);
  kv["alpha_prime"] = format_double(cfg.alpha_prime);
  kv["beta_prime"] = format_double(cfg.beta_prime);
  return kv;
}

void apply_config_entries(PriorConfig& cfg,
                          const std::map<std::string, std::string>& kv) {
  for (const auto& [key, val] : kv) {
    try {
      if (key == "m")
        cfg.m = std::stoi(val);
      else if (key == "mprime")
        cfg.m_prime = std::stoi(val);
      else if (key == "kappa")
        cfg.kappa = std::stod(val);
      else if (key == "tau") {
        cfg.tau = std::stod(val);
        cfg.tau_pinned = true;
      } else if (key == "nu")
        cfg.nu = std::stod(val);
      else if (key == "lambda") {
        cfg.lambda = std::stod(val);
        cfg.lambda_pinned = true;
      } else if (key == "nu_prime") {
        cfg.nu_prime = std::stod(val);
        cfg.var_prior_pinned = true;
      } else if (key == "lambda_prime") {
        cfg.lambda_prime = std::stod(val);
        cfg.var_prior_pinned = true;
      } else if (key == "alpha")
        cfg.alpha = std::stod(val);
      else if (key == "beta")
        cfg.beta = std::stod(val);
      else if (key == "alpha_prime")
        cfg.alpha_prime = std::stod(val);
      else if (key == "beta_prime")
        cfg.beta_prime = std::stod(val);
      else
        throw DataError("config: unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw DataError("config: bad value for '" + key + "': " + val);
    }
  }
}

void apply_config_file(PriorConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(path + ": line " + std::to_string(lineno) +
                      " is not key=value");
    auto strip = [](std::string s) {
      const std::size_t a = s.find_first_not_of(" \t");
      const std::size_t z = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, z - a + 1);
    };
    kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  apply_config_entries(cfg, kv);
}

}  // namespace hbart
