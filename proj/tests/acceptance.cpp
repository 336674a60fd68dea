// Acceptance suite: one numbered criterion per function, each printing a
// PASS/FAIL line (and the measured values) so a run reads as a checklist.
// Run with no arguments for all criteria or with a list of numbers.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "enum_oracle.hpp"
#include "hbart/data.hpp"
#include "hbart/diagnostics.hpp"
#include "hbart/io_util.hpp"
#include "hbart/mean_model.hpp"
#include "hbart/priors.hpp"
#include "hbart/sampler.hpp"
#include "hbart/simulate.hpp"
#include "hbart/stats_util.hpp"
#include "hbart/variance_model.hpp"
#include "testutil.hpp"

namespace fs = std::filesystem;
using namespace hbart;

namespace {

bool g_all_pass = true;

void report(int crit, bool pass, const std::string& what) {
  std::printf("[criterion %d] %s: %s\n", crit, pass ? "PASS" : "FAIL",
              what.c_str());
  if (!pass) g_all_pass = false;
}

void detail(const std::string& line) { std::printf("    %s\n", line.c_str()); }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HBART_CLI_PATH) + " " + args +
                          " >/dev/null 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- shared experiment: the single-predictor benchmark fit -----------------

struct BenchmarkFits {
  SimData train, test;
  PosteriorDraws het;  // product-variance model at the test points
  PosteriorDraws hom;  // constant-variance baseline at the test points
};

BenchmarkFits benchmark_fits() {
  BenchmarkFits b;
  b.train = simulate_quadratic(500, 20250801);
  b.test = simulate_quadratic(500, 20250802);
  const DataSet ds = sim_to_dataset(b.train);
  const CutpointGrid grid = make_cutpoints(ds, 100);
  Matrix pts(b.test.x.size(), 1);
  for (std::size_t i = 0; i < b.test.x.size(); ++i) pts.at(i, 0) = b.test.x[i];

  PriorConfig het_prior = default_config(ds);  // m=200, m'=40, kappa=5
  ChainSettings st;
  st.n_iter = 3000;
  st.burn_in = 1000;
  st.thin = 1;
  st.seed = 7;
  st.forest_every = 0;
  b.het = run_chain(ds, grid, het_prior, st, pts);

  PriorConfig hom_prior = default_config(ds);
  hom_prior.kappa = 2.0;  // constant-variance convention
  hom_prior.tau_pinned = false;
  double ymin = ds.y[0], ymax = ds.y[0];
  for (double v : ds.y) {
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
  }
  finalize(hom_prior, ymin, ymax, sample_variance(ds.y));
  ChainSettings st2 = st;
  st2.model = ModelKind::bart;
  st2.seed = 8;
  b.hom = run_chain(ds, grid, hom_prior, st2, pts);
  return b;
}

// ---- criteria ----------------------------------------------------------------

bool criterion1() {
  const auto [nu_p, lambda_p] =
      calibrate_variance_prior(10.0, 26000.0 * 26000.0, 40);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "nu'=%.4f in [359,360], lambda'=%.5f in [1.655,1.670]",
                nu_p, lambda_p);
  detail(buf);
  const bool ok =
      nu_p >= 359.0 && nu_p <= 360.0 && lambda_p >= 1.655 && lambda_p <= 1.670;
  report(1, ok, "variance-prior calibration matches the worked example");
  return ok;
}

bool criterion2(const BenchmarkFits& b) {
  const PredictionSummary sum = summarize_draws(b.het, 0.95);
  const std::size_t k = b.test.x.size();

  const double corr = pearson_correlation(sum.s_mean, b.test.s_true);

  std::size_t fcov = 0;
  for (std::size_t p = 0; p < k; ++p)
    if (b.test.f_true[p] >= sum.f_lo[p] && b.test.f_true[p] <= sum.f_hi[p])
      ++fcov;
  const double fcov_frac = static_cast<double>(fcov) / static_cast<double>(k);

  std::size_t band = 0;
  for (std::size_t p = 0; p < k; ++p) {
    const double lo = sum.f_mean[p] - 2.0 * sum.s_mean[p];
    const double hi = sum.f_mean[p] + 2.0 * sum.s_mean[p];
    if (b.test.y[p] >= lo && b.test.y[p] <= hi) ++band;
  }
  const double band_frac = static_cast<double>(band) / static_cast<double>(k);

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "corr(s_hat, s_true)=%.4f (>=0.9); f coverage=%.3f (>=0.85); "
                "+/-2s band=%.3f (in [0.92,0.98])",
                corr, fcov_frac, band_frac);
  detail(buf);
  const bool ok = corr >= 0.9 && fcov_frac >= 0.85 && band_frac >= 0.92 &&
                  band_frac <= 0.98;
  report(2, ok, "simulated-example recovery at default settings");
  return ok;
}

bool criterion3(const BenchmarkFits& b) {
  // reference sigma from the constant-variance fit
  double sigma_ref = 0.0;
  for (double v : b.hom.s.v) sigma_ref += v;
  sigma_ref /= static_cast<double>(b.hom.s.v.size());

  const HEvidence h = h_evidence(b.het, 0.9, sigma_ref);

  Rng rng_a(41), rng_b(42);
  const std::vector<double> p_het =
      predictive_percentiles(predictive_samples(b.het, rng_a), b.test.y);
  const std::vector<double> p_hom =
      predictive_percentiles(predictive_samples(b.hom, rng_b), b.test.y);
  const double e_het = energy_statistic(p_het);
  const double e_hom = energy_statistic(p_hom);
  const double ratio = e_hom / e_het;

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "exclusion=%.3f (>=0.5) vs sigma_ref=%.4f; e-stat %.3g vs %.3g, "
                "ratio=%.1f (>=5)",
                h.exclusion_fraction, sigma_ref, e_het, e_hom, ratio);
  detail(buf);
  const bool ok = h.exclusion_fraction >= 0.5 && ratio >= 5.0;
  report(3, ok, "H-evidence and predictive-quantile separation");
  return ok;
}

bool criterion4() {
  bool ok = true;
  Rng rng(424242);

  // mean marginal vs adaptive quadrature, 20 random configurations
  double worst_mean = 0.0;
  for (int cfg = 0; cfg < 20; ++cfg) {
    const std::size_t n = 1 + rng.uniform_int(6);
    const double tau = 0.2 + 2.0 * rng.uniform();
    std::vector<double> r(n), s2(n);
    MeanLeafStats st;
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = 2.5 * rng.normal();
      s2[i] = std::exp(rng.normal());
      st.add(r[i], s2[i]);
    }
    auto logint = [&](double mu) {
      double lp = testutil::normal_logpdf(mu, 0.0, tau * tau);
      for (std::size_t i = 0; i < n; ++i)
        lp += testutil::normal_logpdf(r[i], mu, s2[i]);
      return lp;
    };
    const double prec = 1.0 / (tau * tau) + st.wsum_1;
    const double center = st.wsum_r / prec;
    const double width = 12.0 / std::sqrt(prec);
    const double shift = logint(center);
    const double oracle =
        shift + std::log(testutil::integrate(
                    [&](double mu) { return std::exp(logint(mu) - shift); },
                    center - width, center + width, 1e-14));
    double dropped = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      dropped += testutil::normal_logpdf(r[i], 0.0, s2[i]);
    worst_mean = std::max(worst_mean,
                          std::abs(mean_log_marginal(st, tau) + dropped - oracle));
  }
  ok = ok && worst_mean < 1e-8;

  // variance marginal vs quadrature on the log scale
  double worst_var = 0.0;
  for (int cfg = 0; cfg < 20; ++cfg) {
    const std::size_t n = 1 + rng.uniform_int(6);
    const double nu = 2.5 + 8.0 * rng.uniform();
    const double lambda = std::exp(rng.normal());
    VarLeafStats st;
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = 1.5 * rng.normal();
      st.add(e[i] * e[i]);
    }
    auto logdens = [&](double t) {
      const double s2 = std::exp(t);
      double lp = enum_oracle::sic2_logpdf(s2, nu, lambda) + t;
      for (std::size_t i = 0; i < n; ++i)
        lp += testutil::normal_logpdf(e[i], 0.0, s2);
      return lp;
    };
    const double center =
        std::log((nu * lambda + st.sum_e2) / (nu + static_cast<double>(n) + 2.0));
    const double shift = logdens(center);
    const double oracle =
        shift + std::log(testutil::integrate(
                    [&](double t) { return std::exp(logdens(t) - shift); },
                    center - 40.0, center + 40.0, 1e-14));
    const double impl = var_log_marginal(st, nu, lambda) -
                        0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
    worst_var = std::max(worst_var, std::abs(impl - oracle));
  }
  ok = ok && worst_var < 1e-8;

  // leaf full conditionals against their analytic laws at 1e5 draws
  MeanLeafStats ms;
  ms.add(1.2, 0.4);
  ms.add(-0.3, 1.5);
  ms.add(0.8, 0.9);
  const double tau = 0.7;
  const double prec = 1.0 / (tau * tau) + ms.wsum_1;
  std::vector<double> draws(100000);
  for (double& d : draws) d = draw_mean_leaf(ms, tau, rng);
  const double p_mean =
      testutil::ks_test(draws, [&](double v) {
        return testutil::normal_cdf(v, ms.wsum_r / prec, std::sqrt(1.0 / prec));
      }).pvalue;

  VarLeafStats vs;
  for (int i = 0; i < 17; ++i) vs.add(0.2 + 0.15 * i);
  const double nu = 7.0, lambda = 1.1;
  const double post_nu = nu + 17.0;
  const double post_scale = (nu * lambda + vs.sum_e2) / post_nu;
  for (double& d : draws) d = draw_var_leaf(vs, nu, lambda, rng);
  const double p_var = testutil::ks_test(draws, [&](double v) {
                         return testutil::scaled_inv_chi2_cdf(v, post_nu, post_scale);
                       }).pvalue;

  std::vector<double> resid(40);
  for (double& r : resid) r = 1.3 * rng.normal();
  double ss = 0.0;
  for (double r : resid) ss += r * r;
  for (double& d : draws) d = draw_sigma2_homoscedastic(resid, nu, lambda, rng);
  const double p_sig =
      testutil::ks_test(draws, [&](double v) {
        return testutil::scaled_inv_chi2_cdf(v, nu + 40.0,
                                             (nu * lambda + ss) / (nu + 40.0));
      }).pvalue;

  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "max |delta| mean=%.2e var=%.2e (<1e-8); KS p: mean-leaf %.3f, "
                "var-leaf %.3f, sigma %.3f (>0.01)",
                worst_mean, worst_var, p_mean, p_var, p_sig);
  detail(buf);
  ok = ok && p_mean > 0.01 && p_var > 0.01 && p_sig > 0.01;
  report(4, ok, "conjugacy oracles (quadrature and KS)");
  return ok;
}

bool criterion5() {
  // the tiny enumerable problem: 1 predictor, 2 cutpoints, n=20, m=m'=1,
  // depth cap 2, a million sweeps
  Matrix x(20, 1);
  for (std::size_t i = 0; i < 20; ++i)
    x.at(i, 0) = (static_cast<double>(i) + 0.5) / 20.0;
  Rng gen(42);
  std::vector<double> y(20);
  for (std::size_t i = 0; i < 20; ++i) {
    const double xv = x.at(i, 0);
    y[i] = 0.8 * (xv > 0.4 ? 1.0 : 0.0) + (0.25 + 0.45 * xv) * gen.normal();
  }
  DataSet ds = make_dataset(std::move(x), std::move(y));
  CutpointGrid grid;
  grid.cuts = {{1.0 / 3.0, 2.0 / 3.0}};

  PriorConfig prior;
  prior.m = 1;
  prior.m_prime = 1;
  prior.tau = 0.5;
  prior.tau_pinned = true;
  prior.nu = 6.0;
  prior.lambda = 0.2;
  prior.lambda_pinned = true;
  std::tie(prior.nu_prime, prior.lambda_prime) =
      calibrate_variance_prior(prior.nu, prior.lambda, 1);

  const double off = mean_of(ds.y);
  std::vector<double> yc(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i) yc[i] = ds.y[i] - off;

  const auto exact = enum_oracle::joint_posterior_m1(
      ds.x, grid, yc, prior.tau, prior.nu_prime, prior.lambda_prime, prior.alpha,
      prior.beta, prior.alpha_prime, prior.beta_prime, 5, 2, 64);

  ChainSettings st;
  st.max_depth = 2;
  st.seed = 1618;
  st.validate();
  Sampler sampler(ds, grid, prior, st);
  Rng rng(st.seed);
  std::map<std::pair<std::string, std::string>, long> counts;
  const long iters = 1000000, burn = 5000;
  for (long it = 1; it <= iters; ++it) {
    sampler.iterate(rng);
    if (it > burn)
      counts[{enum_oracle::structure_key(sampler.mean_forest()[0]),
              enum_oracle::structure_key(sampler.var_forest()[0])}] += 1;
  }

  double tv = 0.0;
  bool support_ok = true;
  for (const auto& [key, prob] : exact.prob) {
    const auto it = counts.find(key);
    const double freq = it == counts.end()
                            ? 0.0
                            : static_cast<double>(it->second) /
                                  static_cast<double>(iters - burn);
    tv += std::abs(freq - prob);
  }
  for (const auto& [key, c] : counts)
    if (exact.prob.find(key) == exact.prob.end()) support_ok = false;
  tv *= 0.5;

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "TV distance=%.4f (<0.05) over %zu enumerated structure pairs",
                tv, exact.prob.size());
  detail(buf);
  const bool ok = tv < 0.05 && support_ok;
  report(5, ok, "sampler stationarity vs exhaustive enumeration");
  return ok;
}

bool criterion6() {
  // identical data and seeds; the product-variance model collapsed to one
  // immobile root tree must reproduce the baseline sigma posterior
  Rng gen(606060);
  const std::size_t n = 250;
  Matrix x(n, 1);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x.at(i, 0) = gen.uniform();
    y[i] = 4.0 * x.at(i, 0) * x.at(i, 0) + 0.4 * gen.normal();
  }
  const DataSet ds = make_dataset(std::move(x), std::move(y));
  const CutpointGrid grid = make_cutpoints(ds, 100);
  PriorConfig prior = default_config(ds);
  prior.m = 50;
  prior.m_prime = 1;
  std::tie(prior.nu_prime, prior.lambda_prime) =
      calibrate_variance_prior(prior.nu, prior.lambda, 1);

  ChainSettings st;
  st.n_iter = 11000;
  st.burn_in = 1000;
  st.thin = 10;
  st.seed = 321;
  st.var_moves = false;
  Matrix pt(1, 1);
  pt.at(0, 0) = 0.5;
  const PosteriorDraws het = run_chain(ds, grid, prior, st, pt);

  ChainSettings st2 = st;
  st2.model = ModelKind::bart;
  const PosteriorDraws hom = run_chain(ds, grid, prior, st2, pt);

  std::vector<double> a(static_cast<std::size_t>(het.n_kept()));
  std::vector<double> b(static_cast<std::size_t>(hom.n_kept()));
  for (std::size_t r = 0; r < a.size(); ++r) a[r] = het.s.at(r, 0);
  for (std::size_t r = 0; r < b.size(); ++r) b[r] = hom.s.at(r, 0);
  const auto ks = testutil::ks_test2(a, b);

  // the same-seed chains coincide step by step (the two code paths consume
  // the stream identically), so also compare against an independent stream
  ChainSettings st3 = st2;
  st3.seed = 322;
  const PosteriorDraws hom2 = run_chain(ds, grid, prior, st3, pt);
  std::vector<double> c(static_cast<std::size_t>(hom2.n_kept()));
  for (std::size_t r = 0; r < c.size(); ++r) c[r] = hom2.s.at(r, 0);
  const auto ks2 = testutil::ks_test2(a, c);

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "same-seed KS stat=%.4f p=%.4f; independent-seed KS stat=%.4f "
                "p=%.4f (both >0.01) on %zu+%zu draws",
                ks.stat, ks.pvalue, ks2.stat, ks2.pvalue, a.size(), b.size());
  detail(buf);
  const bool ok = ks.pvalue > 0.01 && ks2.pvalue > 0.01;
  report(6, ok, "m'=1 with frozen variance tree reduces to the baseline");
  return ok;
}

bool criterion7() {
  // Homoscedastic data must not trigger a heteroscedasticity discovery.
  // Noise is scaled so the mean signal and the error variance are of the
  // same order: with the default lambda = var(y) prior, a very large
  // signal-to-noise ratio inflates the baseline sigma posterior (the prior
  // contributes nu pseudo-observations at var(y) >> sigma^2) more than the
  // product-variance posterior, which shifts the reference line upward and
  // inflates exclusions for reasons unrelated to heteroscedasticity.
  Rng gen(707070);
  const std::size_t n = 500;
  Matrix x(n, 1);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x.at(i, 0) = gen.uniform();
    y[i] = 4.0 * x.at(i, 0) * x.at(i, 0) + 1.0 * gen.normal();
  }
  const DataSet ds = make_dataset(std::move(x), std::move(y));
  const CutpointGrid grid = make_cutpoints(ds, 100);

  ChainSettings st;
  st.n_iter = 3000;
  st.burn_in = 1000;
  st.seed = 17;
  const PriorConfig het_prior = default_config(ds);
  const PosteriorDraws het = run_chain(ds, grid, het_prior, st, ds.x);

  PriorConfig hom_prior = default_config(ds);
  hom_prior.kappa = 2.0;
  hom_prior.tau_pinned = false;
  double ymin = ds.y[0], ymax = ds.y[0];
  for (double v : ds.y) {
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
  }
  finalize(hom_prior, ymin, ymax, sample_variance(ds.y));
  ChainSettings st2 = st;
  st2.model = ModelKind::bart;
  st2.seed = 18;
  const PosteriorDraws hom = run_chain(ds, grid, hom_prior, st2, ds.x);
  double sigma_ref = 0.0;
  for (double v : hom.s.v) sigma_ref += v;
  sigma_ref /= static_cast<double>(hom.s.v.size());

  const HEvidence h = h_evidence(het, 0.9, sigma_ref);

  // percentile self-consistency: data and predictive draws from one law
  int pass = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Rng rng(91000 + static_cast<std::uint64_t>(rep));
    const std::size_t k = 120, nd = 400;
    Matrix samples(nd, k);
    std::vector<double> yy(k);
    for (std::size_t p = 0; p < k; ++p) {
      const double f = 2.0 * rng.uniform();
      const double s = 0.3 + 0.5 * rng.uniform();
      yy[p] = f + s * rng.normal();
      for (std::size_t r = 0; r < nd; ++r) samples.at(r, p) = f + s * rng.normal();
    }
    const std::vector<double> p = predictive_percentiles(samples, yy);
    if (testutil::ks_test(p, [](double v) { return v; }).pvalue > 0.01) ++pass;
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "null exclusion=%.3f (<=0.15) vs sigma_ref=%.4f; "
                "percentile-uniformity replicates=%d/100 (>=95)",
                h.exclusion_fraction, sigma_ref, pass);
  detail(buf);
  const bool ok = h.exclusion_fraction <= 0.15 && pass >= 95;
  report(7, ok, "null calibration on homoscedastic data");
  return ok;
}

bool criterion8() {
  const fs::path root("acceptance_tmp/det");
  fs::remove_all(root);
  fs::create_directories(root);
  auto p = [&](const std::string& s) { return (root / s).string(); };

  bool ok = run_cli("simulate --n 100 --seed 5 --out " + p("sim")) == 0;
  const std::string fit_cmd =
      "fit --data " + p("sim/train.csv") + " --response y --test " +
      p("sim/test.csv") +
      " --exclude f_true,s_true --m 15 --mprime 6 --niter 200 --burnin 80"
      " --seed 77 --out ";
  ok = ok && run_cli(fit_cmd + p("fit_a")) == 0;
  ok = ok && run_cli(fit_cmd + p("fit_b")) == 0;
  const std::string diag_cmd =
      "diagnose --draws " + p("fit_a/draws.csv") + " --data " +
      p("sim/test.csv") + " --response y --exclude f_true,s_true --seed 9 --out ";
  ok = ok && run_cli(diag_cmd + p("diag_a")) == 0;
  ok = ok && run_cli(diag_cmd + p("diag_b")) == 0;
  const std::string cv_cmd = "cv --data " + p("sim/train.csv") +
                             " --response y --exclude f_true,s_true"
                             " --kappa-grid 2,5 --folds 2 --m 8 --mprime 4"
                             " --niter 100 --burnin 40 --seed 3 --out ";
  ok = ok && run_cli(cv_cmd + p("cv_a") + " --threads 1") == 0;
  ok = ok && run_cli(cv_cmd + p("cv_b") + " --threads 4") == 0;

  int mismatches = 0;
  auto compare = [&](const std::string& a, const std::string& b,
                     const std::string& f) {
    if (slurp(root / a / f) != slurp(root / b / f)) {
      ++mismatches;
      detail("byte mismatch: " + f);
    }
  };
  for (const char* f : {"draws.csv", "forests.txt", "varactivity.csv",
                        "acceptance.csv"})
    compare("fit_a", "fit_b", f);
  for (const char* f : {"hevidence.csv", "percentiles.csv", "estat.txt",
                        "trace.csv", "hevidence.svg", "percentiles.svg",
                        "trace.svg"})
    compare("diag_a", "diag_b", f);
  for (const char* f : {"cv.csv", "selected.txt"}) compare("cv_a", "cv_b", f);

  char buf[120];
  std::snprintf(buf, sizeof(buf), "repeated runs compared, %d mismatching files",
                mismatches);
  detail(buf);
  ok = ok && mismatches == 0;
  report(8, ok, "seeded CLI invocations are byte-identical");
  fs::remove_all("acceptance_tmp/det");
  return ok;
}

bool criterion9() {
  // a synthetic stand-in with the 15-predictor schema: price response,
  // mileage/year continuous, trim/color/displacement/isOneOwner categorical
  const fs::path root("acceptance_tmp/cars");
  fs::remove_all(root);
  fs::create_directories(root);
  auto p = [&](const std::string& s) { return (root / s).string(); };

  const char* trims[] = {"430", "500", "550", "other"};
  const char* colors[] = {"black", "silver", "white", "other"};
  const char* disp[] = {"46", "55", "other"};
  const char* owner[] = {"f", "t"};
  Rng gen(909090);
  {
    std::ofstream out(root / "cars.csv");
    out << "price,mileage,year,trim,color,displacement,isOneOwner\n";
    for (int i = 0; i < 300; ++i) {
      const double mileage = 5000.0 + 140000.0 * gen.uniform();
      const int year = 1994 + static_cast<int>(gen.uniform_int(20));
      const int tr = static_cast<int>(gen.uniform_int(4));
      const int co = static_cast<int>(gen.uniform_int(4));
      const int di = static_cast<int>(gen.uniform_int(3));
      const int ow = static_cast<int>(gen.uniform_int(2));
      const double f = 60000.0 - 0.25 * mileage + 1500.0 * (year - 1994) +
                       8000.0 * (tr == 2) - 4000.0 * (tr == 0) + 2000.0 * ow;
      const double s = (year >= 2007 ? 9000.0 : 2500.0);
      const double price = f + s * gen.normal();
      out << format_double(price) << ',' << format_double(mileage) << ','
          << year << ',' << trims[tr] << ',' << colors[co] << ',' << disp[di]
          << ',' << owner[ow] << "\n";
    }
  }

  const DataSet ds = load_csv(p("cars.csv"), "price");
  const bool d15 = ds.d() == 15;
  detail("predictor count after one-hot expansion: " + std::to_string(ds.d()) +
         " (expect 15)");

  const std::string chain = " --m 25 --mprime 10 --niter 300 --burnin 100";
  bool ok = d15;
  ok = ok && run_cli("cv --data " + p("cars.csv") +
                     " --response price --kappa-grid 2,5,10 --folds 5" + chain +
                     " --threads 4 --seed 2 --out " + p("cv")) == 0;
  ok = ok && run_cli("fit --data " + p("cars.csv") + " --response price" +
                     chain + " --seed 3 --out " + p("fit")) == 0;
  ok = ok && run_cli("fit --data " + p("cars.csv") +
                     " --response price --model bart" + chain +
                     " --seed 4 --out " + p("fit_bart")) == 0;
  ok = ok && run_cli("diagnose --draws " + p("fit/draws.csv") + " --data " +
                     p("cars.csv") + " --response price --ref-draws " +
                     p("fit_bart/draws.csv") + " --seed 5 --out " +
                     p("diag")) == 0;

  int missing = 0;
  for (const char* f :
       {"cv/cv.csv", "cv/cv.svg", "cv/selected.txt", "fit/draws.csv",
        "fit/varactivity.csv", "diag/hevidence.csv", "diag/hevidence.svg",
        "diag/percentiles.csv", "diag/percentiles.svg", "diag/estat.txt",
        "diag/trace.csv"}) {
    if (!fs::exists(root / f)) {
      ++missing;
      detail(std::string("missing output: ") + f);
    }
  }
  // the activity table must cover all 15 predictors
  if (ok && missing == 0) {
    std::ifstream in(root / "fit" / "varactivity.csv");
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    if (rows != 15) {
      ok = false;
      detail("varactivity rows: " + std::to_string(rows) + " (expect 15)");
    }
  }
  ok = ok && missing == 0;
  report(9, ok, "cars-shaped ingestion and full pipeline on stand-in data");
  fs::remove_all("acceptance_tmp/cars");
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  bool need_benchmark = false;
  for (int c : which)
    if (c == 2 || c == 3) need_benchmark = true;

  BenchmarkFits bench;
  if (need_benchmark) bench = benchmark_fits();

  for (int c : which) {
    switch (c) {
      case 1: criterion1(); break;
      case 2: criterion2(bench); break;
      case 3: criterion3(bench); break;
      case 4: criterion4(); break;
      case 5: criterion5(); break;
      case 6: criterion6(); break;
      case 7: criterion7(); break;
      case 8: criterion8(); break;
      case 9: criterion9(); break;
      default:
        std::fprintf(stderr, "unknown criterion %d\n", c);
        g_all_pass = false;
    }
  }
  return g_all_pass ? 0 : 1;
}
