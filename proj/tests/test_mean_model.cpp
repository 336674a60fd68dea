#include <cmath>
#include <vector>

#include "doctest.h"
#include "hbart/data.hpp"
#include "hbart/mean_model.hpp"
#include "hbart/rng.hpp"
#include "hbart/tree.hpp"
#include "testutil.hpp"

using namespace hbart;

TEST_CASE("mean_residuals: single tree means r = y") {
  const std::vector<double> y = {1.0, -2.0, 3.0};
  const std::vector<double> g = {0.4, 0.1, -0.2};
  // with one tree the cached total fit equals the tree's own contribution
  std::vector<double> r(3);
  mean_residuals(y, g, g, r);
  for (std::size_t i = 0; i < 3; ++i) CHECK(r[i] == doctest::Approx(y[i]));
}

TEST_CASE("mean_residuals: all-zero leaf params give r = y") {
  const std::vector<double> y = {0.5, 1.5};
  const std::vector<double> zero = {0.0, 0.0};
  std::vector<double> r(2);
  mean_residuals(y, zero, zero, r);
  CHECK(r[0] == 0.5);
  CHECK(r[1] == 1.5);
}

TEST_CASE("cache-based residuals equal direct complement re-summation") {
  // random forest of small trees; r_i via cache subtraction must match
  // summing the other m-1 trees directly
  Rng rng(2024);
  CutpointGrid grid;
  grid.cuts = {{0.25, 0.5, 0.75}};
  const std::size_t n = 40, m = 12;
  Matrix x(n, 1);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x.at(i, 0) = rng.uniform();
    y[i] = rng.normal();
  }
  std::vector<Tree> forest;
  for (std::size_t j = 0; j < m; ++j) {
    Tree t(rng.normal());
    if (rng.uniform() < 0.8)
      t.birth(t.root(), 0, static_cast<int>(rng.uniform_int(3)), rng.normal(),
              rng.normal());
    forest.push_back(t);
  }
  std::vector<double> fhat(n, 0.0);
  for (const Tree& t : forest)
    for (std::size_t i = 0; i < n; ++i) fhat[i] += t.evaluate(x.row(i), grid);

  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> g(n), r(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = forest[j].evaluate(x.row(i), grid);
    mean_residuals(y, fhat, g, r);
    for (std::size_t i = 0; i < n; ++i) {
      double direct = y[i];
      for (std::size_t q = 0; q < m; ++q)
        if (q != j) direct -= forest[q].evaluate(x.row(i), grid);
      CHECK(r[i] == doctest::Approx(direct).epsilon(1e-10));
    }
  }
}

TEST_CASE("mean_log_marginal closed form") {
  SUBCASE("tau -> 0 pins the leaf at zero: marginal -> 0") {
    MeanLeafStats s;
    s.add(1.7, 0.9);
    s.add(-0.3, 2.0);
    CHECK(mean_log_marginal(s, 1e-12) == doctest::Approx(0.0).epsilon(1e-10));
  }
  SUBCASE("single observation r=1, s2=1, tau=1") {
    MeanLeafStats s;
    s.add(1.0, 1.0);
    CHECK(mean_log_marginal(s, 1.0) ==
          doctest::Approx(-0.5 * std::log(2.0) + 0.25).epsilon(1e-12));
  }
  SUBCASE("sufficiency: different residual sets, same statistics") {
    MeanLeafStats c, d;
    c.add(1.0, 1.0);
    c.add(1.0, 1.0);        // wsum_r = 2, wsum_1 = 2
    d.add(4.0, 2.0);        // wsum_r = 2, wsum_1 = 0.5
    d.add(0.0, 1.0 / 1.5);  // wsum_1 = 0.5 + 1.5 = 2
    CHECK(c.wsum_r == doctest::Approx(d.wsum_r));
    CHECK(c.wsum_1 == doctest::Approx(d.wsum_1));
    CHECK(mean_log_marginal(c, 0.8) == doctest::Approx(mean_log_marginal(d, 0.8)));
  }
}

TEST_CASE("mean_log_marginal equals the quadrature integral on 20 random configs") {
  // oracle: log( integral of prod_i N(r_i | mu, s2_i) * N(mu | 0, tau^2) dmu ),
  // computed by adaptive Simpson; the implementation drops the factor
  // prod_i N(r_i | 0, s2_i), which we add back before comparing
  Rng rng(5150);
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
    auto integrand = [&](double mu) {
      double lp = testutil::normal_logpdf(mu, 0.0, tau * tau);
      for (std::size_t i = 0; i < n; ++i)
        lp += testutil::normal_logpdf(r[i], mu, s2[i]);
      return lp;
    };
    // integrate around the posterior mode with wide tails
    const double prec = 1.0 / (tau * tau) + st.wsum_1;
    const double center = st.wsum_r / prec;
    const double width = 12.0 / std::sqrt(prec);
    const double shift = integrand(center);
    const double integral = testutil::integrate(
        [&](double mu) { return std::exp(integrand(mu) - shift); },
        center - width, center + width, 1e-14);
    const double oracle = shift + std::log(integral);

    double dropped = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      dropped += testutil::normal_logpdf(r[i], 0.0, s2[i]);
    const double impl = mean_log_marginal(st, tau) + dropped;
    CHECK(std::abs(impl - oracle) < 1e-8);
  }
}

TEST_CASE("homoscedastic reduction matches the constant-variance node formula") {
  // with s2_i = sigma2 the marginal must equal the standard sum-of-trees node
  // expression written directly in terms of (n, sum r, sigma2, tau)
  Rng rng(404);
  for (int cfg = 0; cfg < 30; ++cfg) {
    const std::size_t n = 1 + rng.uniform_int(20);
    const double sigma2 = std::exp(rng.normal());
    const double tau = 0.1 + rng.uniform();
    double sumr = 0.0;
    MeanLeafStats st;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = rng.normal() * 2.0;
      sumr += r;
      st.add(r, sigma2);
    }
    const double dn = static_cast<double>(n);
    const double t2 = tau * tau;
    const double direct = -0.5 * std::log(t2 * dn / sigma2 + 1.0) +
                          0.5 * t2 * sumr * sumr / sigma2 / sigma2 /
                              (t2 * dn / sigma2 + 1.0);
    CHECK(mean_log_marginal(st, tau) == doctest::Approx(direct).epsilon(1e-11));
  }
}

TEST_CASE("draw_mean_leaf") {
  SUBCASE("empty node draws from the prior N(0, tau^2)") {
    Rng rng(88);
    const double tau = 0.7;
    const MeanLeafStats st;  // empty
    std::vector<double> draws(100000);
    for (double& d : draws) d = draw_mean_leaf(st, tau, rng);
    const auto ks = testutil::ks_test(
        draws, [&](double v) { return testutil::normal_cdf(v, 0.0, tau); });
    CHECK(ks.pvalue > 0.01);
  }
  SUBCASE("flat-prior limit centers on the precision-weighted mean") {
    Rng rng(89);
    MeanLeafStats st;
    st.add(2.0, 0.5);
    st.add(1.0, 2.0);
    const double tau = 1e9;
    double acc = 0.0;
    const int nd = 200000;
    for (int i = 0; i < nd; ++i) acc += draw_mean_leaf(st, tau, rng);
    const double wmean = st.wsum_r / st.wsum_1;
    const double se = std::sqrt(1.0 / st.wsum_1 / nd);
    CHECK(std::abs(acc / nd - wmean) < 4.0 * se);
  }
  SUBCASE("moments match the full conditional within 3 MC standard errors") {
    Rng rng(90);
    MeanLeafStats st;
    st.add(1.2, 0.3);
    st.add(-0.4, 1.1);
    st.add(0.9, 0.8);
    const double tau = 0.6;
    const double prec = 1.0 / (tau * tau) + st.wsum_1;
    const double mean = st.wsum_r / prec;
    const double var = 1.0 / prec;
    const int nd = 100000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < nd; ++i) {
      const double d = draw_mean_leaf(st, tau, rng);
      s1 += d;
      s2 += d * d;
    }
    const double emean = s1 / nd;
    const double evar = s2 / nd - emean * emean;
    CHECK(std::abs(emean - mean) < 3.0 * std::sqrt(var / nd));
    CHECK(std::abs(evar - var) < 3.0 * var * std::sqrt(2.0 / nd));
  }
  SUBCASE("conjugate posterior on a fixed single-leaf tree passes KS") {
    Rng rng(91);
    const double tau = 0.9;
    MeanLeafStats st;
    for (int i = 0; i < 12; ++i) st.add(0.5 + 0.1 * i, 0.5 + 0.05 * i);
    const double prec = 1.0 / (tau * tau) + st.wsum_1;
    const double mean = st.wsum_r / prec;
    std::vector<double> draws(100000);
    for (double& d : draws) d = draw_mean_leaf(st, tau, rng);
    const auto ks = testutil::ks_test(draws, [&](double v) {
      return testutil::normal_cdf(v, mean, std::sqrt(1.0 / prec));
    });
    CHECK(ks.pvalue > 0.01);
  }
}
