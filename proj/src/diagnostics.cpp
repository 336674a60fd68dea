#include "hbart/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <mutex>
#include <numeric>

#include "hbart/errors.hpp"
#include "hbart/io_util.hpp"
#include "hbart/stats_util.hpp"

namespace hbart {

HEvidence h_evidence(const PosteriorDraws& draws, double gamma, double sigma_ref) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DataError("h_evidence: gamma not in (0,1)");
  const std::size_t nd = static_cast<std::size_t>(draws.n_kept());
  const std::size_t k = static_cast<std::size_t>(draws.n_points());
  if (nd < 20) throw DataError("h_evidence: need at least 20 kept draws");

  std::vector<double> shat(k), lo(k), hi(k);
  std::vector<double> col(nd);
  const double qlo = (1.0 - gamma) / 2.0;
  const double qhi = 1.0 - qlo;
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t d = 0; d < nd; ++d) col[d] = draws.s.at(d, p);
    shat[p] = mean_of(col);
    lo[p] = quantile(col, qlo);
    hi[p] = quantile(col, qhi);
  }

  HEvidence out;
  out.gamma = gamma;
  out.sigma_ref = sigma_ref;
  out.order.resize(k);
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return shat[a] < shat[b]; });
  long excl = 0;
  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t p = out.order[r];
    out.shat.push_back(shat[p]);
    out.lo.push_back(lo[p]);
    out.hi.push_back(hi[p]);
    if (sigma_ref < lo[p] || sigma_ref > hi[p]) ++excl;
  }
  out.exclusion_fraction = static_cast<double>(excl) / static_cast<double>(k);
  return out;
}

std::vector<double> predictive_percentiles(const Matrix& samples,
                                           std::span<const double> y) {
  if (samples.cols != y.size())
    throw DataError("predictive_percentiles: dimension mismatch");
  const std::size_t nd = samples.rows;
  std::vector<double> p(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    long below = 0, equal = 0;
    for (std::size_t d = 0; d < nd; ++d) {
      const double v = samples.at(d, i);
      if (v < y[i])
        ++below;
      else if (v == y[i])
        ++equal;
    }
    p[i] = (static_cast<double>(below) + 0.5 * static_cast<double>(equal)) /
           static_cast<double>(nd);
  }
  return p;
}

double energy_statistic(std::span<const double> p) {
  const std::size_t n = p.size();
  if (n < 2) throw DataError("energy_statistic: need at least 2 percentiles");
  double t1 = 0.0;
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0))
      throw DataError("energy_statistic: percentile outside [0,1]");
    t1 += v * v - v + 0.5;
  }
  // sum_{i,j} |p_i - p_j| over ordered pairs, via the sorted representation
  std::vector<double> q(p.begin(), p.end());
  std::sort(q.begin(), q.end());
  double t2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    t2 += (2.0 * static_cast<double>(i) + 1.0 - static_cast<double>(n)) * q[i];
  t2 *= 2.0;
  const double dn = static_cast<double>(n);
  return 2.0 * t1 / dn - t2 / (dn * dn) - 1.0 / 3.0;
}

std::vector<std::vector<std::size_t>> cv_folds(std::size_t n, int k,
                                               std::uint64_t seed) {
  if (k < 2) throw DataError("cv_folds: need at least 2 folds");
  if (n < static_cast<std::size_t>(k)) throw DataError("cv_folds: more folds than rows");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(Rng::splitmix64(seed ^ 0xf01dull));
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.uniform_int(i);
    std::swap(perm[i - 1], perm[j]);
  }
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i)
    folds[i % static_cast<std::size_t>(k)].push_back(perm[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

CvResult cv_kappa(const DataSet& ds, const std::vector<double>& kappa_grid,
                  int folds, const PriorConfig& base_prior,
                  const ChainSettings& settings, int max_cuts, int threads) {
  if (kappa_grid.empty()) throw DataError("cv_kappa: empty kappa grid");
  if (ds.n() < static_cast<std::size_t>(10 * folds))
    throw DataError("cv_kappa: need at least 10 rows per fold");
  const auto fold_idx = cv_folds(ds.n(), folds, settings.seed);

  struct Cell {
    std::size_t ki, fi;
  };
  std::vector<Cell> cells;
  for (std::size_t ki = 0; ki < kappa_grid.size(); ++ki)
    for (std::size_t fi = 0; fi < static_cast<std::size_t>(folds); ++fi)
      cells.push_back({ki, fi});

  std::vector<double> estat(cells.size(), 0.0);
  Rng root(settings.seed);

  auto run_cell = [&](std::size_t c) {
    const auto [ki, fi] = cells[c];
    std::vector<std::size_t> train_idx;
    for (std::size_t f = 0; f < fold_idx.size(); ++f)
      if (f != fi)
        train_idx.insert(train_idx.end(), fold_idx[f].begin(), fold_idx[f].end());
    std::sort(train_idx.begin(), train_idx.end());
    const DataSet train = subset_rows(ds, train_idx);
    const DataSet held = subset_rows(ds, fold_idx[fi]);

    PriorConfig prior = base_prior;
    prior.kappa = kappa_grid[ki];
    prior.tau_pinned = false;  // re-derive tau from this kappa and fold range
    double ymin = train.y[0], ymax = train.y[0];
    for (double v : train.y) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
    finalize(prior, ymin, ymax, sample_variance(train.y));

    ChainSettings st = settings;
    st.forest_every = 0;
    st.seed = Rng::splitmix64(settings.seed ^ (0x9e3779b97f4a7c15ULL * (c + 1)));

    const CutpointGrid grid = make_cutpoints(train, max_cuts);
    const PosteriorDraws draws = run_chain(train, grid, prior, st, held.x);
    Rng prng = root.spawn(1000 + c);
    const Matrix samples = predictive_samples(draws, prng);
    estat[c] = energy_statistic(predictive_percentiles(samples, held.y));
  };

  if (threads <= 1) {
    for (std::size_t c = 0; c < cells.size(); ++c) run_cell(c);
  } else {
    std::vector<std::future<void>> futs;
    std::size_t next = 0;
    const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads),
                                                 cells.size());
    std::mutex mx;
    for (std::size_t t = 0; t < nt; ++t) {
      futs.push_back(std::async(std::launch::async, [&]() {
        for (;;) {
          std::size_t c;
          {
            std::lock_guard<std::mutex> lock(mx);
            if (next >= cells.size()) return;
            c = next++;
          }
          run_cell(c);
        }
      }));
    }
    for (auto& f : futs) f.get();
  }

  CvResult out;
  for (std::size_t c = 0; c < cells.size(); ++c)
    out.cells.push_back({kappa_grid[cells[c].ki], static_cast<int>(cells[c].fi),
                         estat[c]});
  double best = 0.0;
  for (std::size_t ki = 0; ki < kappa_grid.size(); ++ki) {
    std::vector<double> vals;
    for (std::size_t fi = 0; fi < static_cast<std::size_t>(folds); ++fi)
      vals.push_back(estat[ki * static_cast<std::size_t>(folds) + fi]);
    const double med = quantile(vals, 0.5);
    out.median_estat.push_back(med);
    if (ki == 0 || med < best) {
      best = med;
      out.selected_kappa = kappa_grid[ki];
    }
  }
  return out;
}

TraceData trace_data(const PosteriorDraws& draws) {
  const std::size_t nd = static_cast<std::size_t>(draws.n_kept());
  const std::size_t k = static_cast<std::size_t>(draws.n_points());
  TraceData out;
  out.is_sigma = (draws.model == ModelKind::bart);
  out.summary.resize(nd);
  for (std::size_t d = 0; d < nd; ++d) {
    if (out.is_sigma) {
      out.summary[d] = draws.s.at(d, 0);
    } else {
      double sum = 0.0;
      for (std::size_t p = 0; p < k; ++p) sum += draws.s.at(d, p);
      out.summary[d] = sum / static_cast<double>(k);
    }
  }
  // five points spaced by rank of the posterior mean of s
  std::vector<double> shat(k, 0.0);
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t d = 0; d < nd; ++d) shat[p] += draws.s.at(d, p);
    shat[p] /= static_cast<double>(nd);
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return shat[a] < shat[b]; });
  const std::size_t npick = std::min<std::size_t>(5, k);
  for (std::size_t t = 0; t < npick; ++t) {
    const double frac = (npick == 1) ? 0.5 : 0.1 + 0.8 * static_cast<double>(t) /
                                                        static_cast<double>(npick - 1);
    out.point_idx.push_back(
        order[static_cast<std::size_t>(frac * static_cast<double>(k - 1))]);
  }
  out.s_at = Matrix(nd, out.point_idx.size());
  for (std::size_t d = 0; d < nd; ++d)
    for (std::size_t t = 0; t < out.point_idx.size(); ++t)
      out.s_at.at(d, t) = draws.s.at(d, out.point_idx[t]);
  return out;
}

VariableActivity variable_activity(const PosteriorDraws& draws) {
  VariableActivity out;
  auto normalize = [](const std::vector<double>& counts) {
    double tot = 0.0;
    for (double c : counts) tot += c;
    std::vector<double> prop(counts.size(), 0.0);
    if (tot > 0.0)
      for (std::size_t v = 0; v < counts.size(); ++v) prop[v] = counts[v] / tot;
    return prop;
  };
  out.mean_prop = normalize(draws.mean_split_counts);
  out.var_prop = normalize(draws.var_split_counts);
  return out;
}

void write_hevidence_csv(const HEvidence& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "xid,shat,lo,hi,sigma_ref\n";
  for (std::size_t r = 0; r < h.order.size(); ++r)
    out << h.order[r] << ',' << format_double(h.shat[r]) << ','
        << format_double(h.lo[r]) << ',' << format_double(h.hi[r]) << ','
        << format_double(h.sigma_ref) << "\n";
}

void write_percentiles_csv(std::span<const double> p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "xid,p\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    out << i << ',' << format_double(p[i]) << "\n";
}

void write_cv_csv(const CvResult& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "kappa,fold,estat\n";
  for (const CvCell& c : r.cells)
    out << format_double(c.kappa) << ',' << c.fold << ',' << format_double(c.estat)
        << "\n";
}

void write_trace_csv(const TraceData& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "iter," << (t.is_sigma ? "sigma" : "sbar");
  for (std::size_t c = 0; c < t.point_idx.size(); ++c) out << ",s@q" << (c + 1);
  out << "\n";
  for (std::size_t d = 0; d < t.summary.size(); ++d) {
    out << (d + 1) << ',' << format_double(t.summary[d]);
    for (std::size_t c = 0; c < t.point_idx.size(); ++c)
      out << ',' << format_double(t.s_at.at(d, c));
    out << "\n";
  }
}

void write_variable_activity_csv(const VariableActivity& a,
                                 const std::vector<std::string>& names,
                                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "variable,name,mean_prop,var_prop\n";
  for (std::size_t v = 0; v < a.mean_prop.size(); ++v)
    out << (v + 1) << ',' << (v < names.size() ? names[v] : "") << ','
        << format_double(a.mean_prop[v]) << ',' << format_double(a.var_prop[v])
        << "\n";
}

}  // namespace hbart
