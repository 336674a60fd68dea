// hbart: heteroscedastic tree-ensemble regression at the command line.
// Subcommands: simulate, fit, predict, diagnose, cv. Every subcommand is a
// pure function of (input files, flags, seed) and writes a manifest that
// records the resolved invocation.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hbart/data.hpp"
#include "hbart/diagnostics.hpp"
#include "hbart/errors.hpp"
#include "hbart/io_util.hpp"
#include "hbart/priors.hpp"
#include "hbart/sampler.hpp"
#include "hbart/simulate.hpp"
#include "hbart/stats_util.hpp"
#include "hbart/svg.hpp"
#include "hbart/version.hpp"

namespace fs = std::filesystem;
using namespace hbart;

namespace {

struct Manifest {
  std::string subcommand;
  std::map<std::string, std::string> kv;

  void set(const std::string& k, const std::string& v) { kv[k] = v; }
  void set(const std::string& k, double v) { kv[k] = format_double(v); }
  void set(const std::string& k, long v) { kv[k] = std::to_string(v); }
  void set(const std::string& k, int v) { kv[k] = std::to_string(v); }

  void write(const fs::path& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write manifest: " + path.string());
    out << "# hbart run manifest\n";
    out << "tool_version=" << HBART_VERSION << "\n";
    out << "subcommand=" << subcommand << "\n";
    for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
  }
};

fs::path ensure_dir(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

DataSet drop_columns(const DataSet& ds, const std::set<std::string>& names) {
  if (names.empty()) return ds;
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < ds.d(); ++j) {
    if (names.count(ds.names[j]) || names.count(ds.var_meta[j].parent)) continue;
    keep.push_back(j);
  }
  if (keep.size() == ds.d()) return ds;
  DataSet out;
  out.y = ds.y;
  out.response_name = ds.response_name;
  out.x = Matrix(ds.n(), keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j) {
    out.names.push_back(ds.names[keep[j]]);
    out.var_meta.push_back(ds.var_meta[keep[j]]);
    for (std::size_t i = 0; i < ds.n(); ++i) out.x.at(i, j) = ds.x.at(i, keep[j]);
  }
  return out;
}

DataSet load_data(const std::string& path, const std::string& response,
                  const std::string& exclude) {
  DataSet ds = load_csv(path, response);
  std::set<std::string> excl;
  for (const std::string& n : split_csv_list(exclude)) excl.insert(n);
  return drop_columns(ds, excl);
}

// shared chain flags
struct FitFlags {
  std::string model = "hbart";
  double kappa = -1.0;  // <0: keep the model default
  int m = -1, mprime = -1;
  long niter = 3000, burnin = 1000, thin = 1;
  std::uint64_t seed = 1;
  int max_cuts = 100, min_node = 5, max_depth = 15;
  long forest_every = 0;  // 0 = auto, -1 = off
  long refresh_every = 100;
  double tau = -1.0, nu = -1.0, lambda = -1.0;
  std::string config_file;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--model", model, "hbart or bart")
        ->check(CLI::IsMember({"hbart", "bart"}));
    cmd->add_option("--kappa", kappa, "mean-prior tightness");
    cmd->add_option("--m", m, "mean-tree count");
    cmd->add_option("--mprime", mprime, "variance-tree count");
    cmd->add_option("--niter", niter, "total MCMC iterations");
    cmd->add_option("--burnin", burnin, "burn-in iterations");
    cmd->add_option("--thin", thin, "keep every thin-th draw");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--max-cuts", max_cuts, "cutpoints per continuous variable");
    cmd->add_option("--min-node", min_node, "smallest training count per leaf");
    cmd->add_option("--max-depth", max_depth, "tree depth cap");
    cmd->add_option("--forest-every", forest_every,
                    "keep every k-th kept draw's forests (0 auto, -1 off)");
    cmd->add_option("--refresh-every", refresh_every, "cache rebuild cadence");
    cmd->add_option("--tau", tau, "pin the mean-leaf prior sd");
    cmd->add_option("--nu", nu, "variance prior df");
    cmd->add_option("--lambda", lambda, "pin the variance prior scale");
    cmd->add_option("--config", config_file, "key=value config file");
  }

  PriorConfig make_prior(const DataSet& ds) const {
    PriorConfig prior;  // defaults, then config file, then flags
    if (!config_file.empty()) apply_config_file(prior, config_file);
    if (m > 0) prior.m = m;
    if (mprime > 0) prior.m_prime = mprime;
    if (kappa > 0.0) prior.kappa = kappa;
    if (model == "bart" && kappa <= 0.0 && config_file.empty())
      prior.kappa = 2.0;  // constant-variance convention
    if (nu > 0.0) prior.nu = nu;
    if (lambda > 0.0) {
      prior.lambda = lambda;
      prior.lambda_pinned = true;
    }
    if (tau > 0.0) {
      prior.tau = tau;
      prior.tau_pinned = true;
    }
    double ymin = ds.y[0], ymax = ds.y[0];
    for (double v : ds.y) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
    finalize(prior, ymin, ymax, sample_variance(ds.y));
    return prior;
  }

  ChainSettings make_settings() const {
    ChainSettings st;
    st.n_iter = niter;
    st.burn_in = burnin;
    st.thin = thin;
    st.seed = seed;
    st.model = model == "bart" ? ModelKind::bart : ModelKind::hbart;
    st.min_node_size = min_node;
    st.max_depth = max_depth;
    st.refresh_every = refresh_every;
    long fe = forest_every;
    if (fe == 0) fe = std::max<long>(1, st.kept() / 100);  // auto: ~100 snapshots
    if (fe < 0) fe = 0;                                    // off
    st.forest_every = fe;
    return st;
  }

  void record(Manifest& man, const PriorConfig& prior) const {
    man.set("model", model);
    man.set("niter", niter);
    man.set("burnin", burnin);
    man.set("thin", thin);
    man.set("seed", static_cast<long>(seed));
    man.set("max_cuts", max_cuts);
    man.set("min_node", min_node);
    man.set("max_depth", max_depth);
    for (const auto& [k, v] : config_entries(prior)) man.set("prior." + k, v);
    man.set("prior.tau_provenance", prior.tau_pinned ? "pinned" : "derived");
    man.set("prior.lambda_provenance",
            prior.lambda_pinned ? "pinned" : "derived");
    man.set("prior.var_prior_provenance",
            prior.var_prior_pinned ? "pinned" : "derived");
  }
};

void write_acceptance_csv(const AcceptSummary& a, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << "ensemble,move,proposed,accepted,auto_rejected\n";
  const char* moves[3] = {"birth", "death", "perturb"};
  for (int k = 0; k < 3; ++k)
    out << "mean," << moves[k] << ',' << a.mean[k].proposed << ','
        << a.mean[k].accepted << ',' << a.mean[k].auto_rejected << "\n";
  for (int k = 0; k < 3; ++k)
    out << "var," << moves[k] << ',' << a.var[k].proposed << ','
        << a.var[k].accepted << ',' << a.var[k].auto_rejected << "\n";
  out << "mean,skipped," << a.mean_skipped << ",,\n";
  out << "var,skipped," << a.var_skipped << ",,\n";
}

// --- svg renderers -----------------------------------------------------------

void svg_hevidence(const HEvidence& h, const std::string& path) {
  const double n = static_cast<double>(h.shat.size());
  double ylo = h.sigma_ref, yhi = h.sigma_ref;
  for (std::size_t i = 0; i < h.shat.size(); ++i) {
    ylo = std::min(ylo, h.lo[i]);
    yhi = std::max(yhi, h.hi[i]);
  }
  SvgPlot plot(0, n, ylo - 0.05 * (yhi - ylo), yhi + 0.05 * (yhi - ylo),
               "H-evidence", "rank by posterior mean s(x)", "s(x)");
  for (std::size_t i = 0; i < h.shat.size(); ++i)
    plot.vsegment(static_cast<double>(i) + 0.5, h.lo[i], h.hi[i], "#5588cc", 1.0);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < h.shat.size(); ++i) {
    xs.push_back(static_cast<double>(i) + 0.5);
    ys.push_back(h.shat[i]);
  }
  plot.points(xs, ys, "#224477", 1.3);
  plot.hline(h.sigma_ref, "black", 1.5);
  plot.write(path);
}

void svg_qq(std::vector<double> p, const std::string& path) {
  std::sort(p.begin(), p.end());
  const std::size_t n = p.size();
  SvgPlot plot(0, 1, 0, 1, "Predictive quantile-quantile", "uniform quantile",
               "observed percentile");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  plot.polyline(std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 1.0},
                "black", 1.0, "4,3");
  plot.points(grid, p, "#aa3333", 1.5);
  plot.write(path);
}

void svg_cv(const CvResult& r, const std::string& path) {
  std::vector<double> kappas;
  for (const CvCell& c : r.cells)
    if (kappas.empty() || kappas.back() != c.kappa) kappas.push_back(c.kappa);
  double ymax = 0.0;
  for (const CvCell& c : r.cells) ymax = std::max(ymax, c.estat);
  SvgPlot plot(0, static_cast<double>(kappas.size()), 0, ymax * 1.1,
               "e-statistic by kappa", "kappa (grid order)", "e-statistic");
  for (std::size_t ki = 0; ki < kappas.size(); ++ki) {
    std::vector<double> vals;
    for (const CvCell& c : r.cells)
      if (c.kappa == kappas[ki]) vals.push_back(c.estat);
    std::vector<double> sorted = vals;
    std::sort(sorted.begin(), sorted.end());
    const double q1 = quantile(vals, 0.25), q2 = quantile(vals, 0.5),
                 q3 = quantile(vals, 0.75);
    plot.box(static_cast<double>(ki) + 0.5, 0.18, q1, q2, q3, sorted.front(),
             sorted.back(), "#336633");
  }
  plot.hline(r.cells.empty() ? 0.0 : *std::min_element(
                 r.median_estat.begin(), r.median_estat.end()),
             "#888888", 1.0, "5,4");
  plot.write(path);
}

void svg_trace(const TraceData& t, const std::string& path) {
  double ylo = 1e300, yhi = -1e300;
  for (double v : t.summary) {
    ylo = std::min(ylo, v);
    yhi = std::max(yhi, v);
  }
  for (double v : t.s_at.v) {
    ylo = std::min(ylo, v);
    yhi = std::max(yhi, v);
  }
  SvgPlot plot(0, static_cast<double>(t.summary.size()), ylo * 0.95, yhi * 1.05,
               t.is_sigma ? "sigma trace" : "s(x) traces", "kept draw",
               t.is_sigma ? "sigma" : "s");
  const char* colors[5] = {"#cc4444", "#44aa44", "#4444cc", "#aa8800", "#8844aa"};
  std::vector<double> xs(t.summary.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
  for (std::size_t c = 0; c < t.point_idx.size(); ++c) {
    std::vector<double> ys(t.summary.size());
    for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = t.s_at.at(i, c);
    plot.polyline(xs, ys, colors[c % 5], 0.8);
  }
  plot.polyline(xs, t.summary, "black", 1.5);
  plot.write(path);
}

// --- subcommands --------------------------------------------------------------

int cmd_simulate(std::size_t n, std::uint64_t seed, const std::string& out_dir) {
  const fs::path dir = ensure_dir(out_dir);
  const SimData train = simulate_quadratic(n, seed);
  const SimData test = simulate_quadratic(n, Rng::splitmix64(seed ^ 0x7e57));
  write_sim_csv(train, (dir / "train.csv").string());
  write_sim_csv(test, (dir / "test.csv").string());
  Manifest man;
  man.subcommand = "simulate";
  man.set("n", static_cast<long>(n));
  man.set("seed", static_cast<long>(seed));
  man.set("out", out_dir);
  man.set("command", "simulate --n " + std::to_string(n) + " --seed " +
                         std::to_string(seed) + " --out " + out_dir);
  man.write(dir / "manifest.txt");
  return 0;
}

int cmd_fit(const std::string& data_path, const std::string& response,
            const std::string& test_path, const std::string& exclude,
            const FitFlags& ff, const std::string& out_dir) {
  const fs::path dir = ensure_dir(out_dir);
  const DataSet train = load_data(data_path, response, exclude);
  const PriorConfig prior = ff.make_prior(train);
  const ChainSettings st = ff.make_settings();
  const CutpointGrid grid = make_cutpoints(train, ff.max_cuts);

  Matrix eval_points = train.x;
  if (!test_path.empty()) {
    const DataSet test = load_data(test_path, response, exclude);
    if (test.d() != train.d())
      throw DataError("fit: test predictors do not match training predictors");
    eval_points = test.x;
  }

  const PosteriorDraws draws = run_chain(train, grid, prior, st, eval_points);
  write_draws_csv(draws, (dir / "draws.csv").string());
  if (st.forest_every > 0) save_forests(draws, (dir / "forests.txt").string());
  write_variable_activity_csv(variable_activity(draws), train.names,
                              (dir / "varactivity.csv").string());
  write_acceptance_csv(draws.accept, dir / "acceptance.csv");

  Manifest man;
  man.subcommand = "fit";
  man.set("data", data_path);
  man.set("response", response);
  if (!test_path.empty()) man.set("test", test_path);
  if (!exclude.empty()) man.set("exclude", exclude);
  man.set("out", out_dir);
  man.set("eval_points", static_cast<long>(eval_points.rows));
  man.set("forest_every", st.forest_every);
  man.set("offset", draws.offset);
  ff.record(man, prior);
  std::string cmd = "fit --data " + data_path + " --response " + response;
  if (!test_path.empty()) cmd += " --test " + test_path;
  if (!exclude.empty()) cmd += " --exclude " + exclude;
  cmd += " --model " + ff.model + " --kappa " + format_double(prior.kappa) +
         " --m " + std::to_string(prior.m) + " --mprime " +
         std::to_string(prior.m_prime) + " --niter " + std::to_string(ff.niter) +
         " --burnin " + std::to_string(ff.burnin) + " --thin " +
         std::to_string(ff.thin) + " --seed " + std::to_string(ff.seed) +
         " --out " + out_dir;
  man.set("command", cmd);
  man.write(dir / "manifest.txt");
  return 0;
}

int cmd_predict(const std::string& forests_path, const std::string& data_path,
                const std::string& response, const std::string& exclude,
                const std::string& mode, double level, long plugin_draws,
                std::uint64_t seed, const std::string& out_file) {
  const PosteriorDraws fitted = load_forests(forests_path);
  DataSet xnew = load_csv_points(data_path, response);
  std::set<std::string> excl;
  for (const std::string& n : split_csv_list(exclude)) excl.insert(n);
  xnew = drop_columns(xnew, excl);
  if (xnew.d() != fitted.grid.num_vars())
    throw DataError("predict: input has " + std::to_string(xnew.d()) +
                    " predictors, model expects " +
                    std::to_string(fitted.grid.num_vars()));
  const PosteriorDraws at = draws_at_points(fitted, xnew.x);

  std::ofstream out(out_file);
  if (!out) throw DataError("cannot write file: " + out_file);
  Rng rng(seed);
  if (mode == "mean_sd") {
    const PredictionSummary sum = summarize_draws(at, level);
    out << "point,f_mean,f_lo,f_hi,s_mean,s_lo,s_hi\n";
    for (std::size_t p = 0; p < sum.f_mean.size(); ++p)
      out << (p + 1) << ',' << format_double(sum.f_mean[p]) << ','
          << format_double(sum.f_lo[p]) << ',' << format_double(sum.f_hi[p])
          << ',' << format_double(sum.s_mean[p]) << ','
          << format_double(sum.s_lo[p]) << ',' << format_double(sum.s_hi[p])
          << "\n";
  } else {
    const Matrix ys = mode == "predictive" ? predictive_samples(at, rng)
                                           : plugin_samples(at, plugin_draws, rng);
    out << "draw";
    for (std::size_t p = 0; p < ys.cols; ++p) out << ",y@p" << (p + 1);
    out << "\n";
    for (std::size_t r = 0; r < ys.rows; ++r) {
      out << (r + 1);
      for (std::size_t p = 0; p < ys.cols; ++p)
        out << ',' << format_double(ys.at(r, p));
      out << "\n";
    }
  }
  out.close();

  Manifest man;
  man.subcommand = "predict";
  man.set("forests", forests_path);
  man.set("data", data_path);
  man.set("mode", mode);
  man.set("level", level);
  man.set("seed", static_cast<long>(seed));
  man.set("out", out_file);
  man.set("command", "predict --forests " + forests_path + " --data " +
                         data_path + " --mode " + mode + " --seed " +
                         std::to_string(seed) + " --out " + out_file);
  man.write(fs::path(out_file).parent_path() / "predict_manifest.txt");
  return 0;
}

int cmd_diagnose(const std::string& draws_path, const std::string& forests_path,
                 const std::string& data_path, const std::string& response,
                 const std::string& exclude, double gamma, double sigma_ref,
                 const std::string& ref_draws_path, std::uint64_t seed,
                 const std::string& out_dir) {
  const fs::path dir = ensure_dir(out_dir);
  const DataSet held = load_data(data_path, response, exclude);

  PosteriorDraws draws;
  if (!draws_path.empty()) {
    draws = read_draws_csv(draws_path);
    if (static_cast<std::size_t>(draws.n_points()) != held.n())
      throw DataError("diagnose: draws cover " +
                      std::to_string(draws.n_points()) +
                      " points but the data file has " +
                      std::to_string(held.n()) + " rows");
  } else if (!forests_path.empty()) {
    const PosteriorDraws fitted = load_forests(forests_path);
    if (held.d() != fitted.grid.num_vars())
      throw DataError("diagnose: predictor count mismatch with the snapshot");
    draws = draws_at_points(fitted, held.x);
  } else {
    throw DataError("diagnose: need --draws or --forests");
  }

  // reference sigma: flag > reference draw file > RMS residual fallback
  double sref = sigma_ref;
  if (sref <= 0.0 && !ref_draws_path.empty()) {
    const PosteriorDraws ref = read_draws_csv(ref_draws_path);
    double acc = 0.0;
    for (double v : ref.s.v) acc += v;
    sref = acc / static_cast<double>(ref.s.v.size());
  }
  if (sref <= 0.0) {
    const PredictionSummary sum = summarize_draws(draws);
    double ss = 0.0;
    for (std::size_t i = 0; i < held.n(); ++i) {
      const double r = held.y[i] - sum.f_mean[i];
      ss += r * r;
    }
    sref = std::sqrt(ss / static_cast<double>(held.n()));
  }

  const HEvidence h = h_evidence(draws, gamma, sref);
  write_hevidence_csv(h, (dir / "hevidence.csv").string());
  svg_hevidence(h, (dir / "hevidence.svg").string());

  Rng rng(seed);
  const Matrix samples = predictive_samples(draws, rng);
  const std::vector<double> p = predictive_percentiles(samples, held.y);
  write_percentiles_csv(p, (dir / "percentiles.csv").string());
  svg_qq(p, (dir / "percentiles.svg").string());
  const double estat = energy_statistic(p);
  {
    std::ofstream out(dir / "estat.txt");
    out << "estat=" << format_double(estat) << "\n";
    out << "exclusion_fraction=" << format_double(h.exclusion_fraction) << "\n";
    out << "sigma_ref=" << format_double(sref) << "\n";
  }

  const TraceData t = trace_data(draws);
  write_trace_csv(t, (dir / "trace.csv").string());
  svg_trace(t, (dir / "trace.svg").string());

  Manifest man;
  man.subcommand = "diagnose";
  if (!draws_path.empty()) man.set("draws", draws_path);
  if (!forests_path.empty()) man.set("forests", forests_path);
  man.set("data", data_path);
  man.set("response", response);
  man.set("gamma", gamma);
  man.set("sigma_ref", sref);
  man.set("estat", estat);
  man.set("exclusion_fraction", h.exclusion_fraction);
  man.set("seed", static_cast<long>(seed));
  man.set("out", out_dir);
  std::string cmd = "diagnose --data " + data_path + " --response " + response;
  if (!draws_path.empty()) cmd += " --draws " + draws_path;
  if (!forests_path.empty()) cmd += " --forests " + forests_path;
  cmd += " --gamma " + format_double(gamma) + " --sigma-ref " +
         format_double(sref) + " --seed " + std::to_string(seed) + " --out " +
         out_dir;
  man.set("command", cmd);
  man.write(dir / "manifest.txt");
  return 0;
}

int cmd_cv(const std::string& data_path, const std::string& response,
           const std::string& exclude, const std::string& kappa_grid_str,
           int folds, int threads, const FitFlags& ff,
           const std::string& out_dir) {
  const fs::path dir = ensure_dir(out_dir);
  const DataSet ds = load_data(data_path, response, exclude);
  std::vector<double> kappa_grid;
  for (const std::string& tok : split_csv_list(kappa_grid_str))
    kappa_grid.push_back(std::stod(tok));
  if (kappa_grid.empty()) throw DataError("cv: empty kappa grid");

  const PriorConfig base = ff.make_prior(ds);
  const ChainSettings st = ff.make_settings();
  const CvResult r = cv_kappa(ds, kappa_grid, folds, base, st, ff.max_cuts, threads);
  write_cv_csv(r, (dir / "cv.csv").string());
  svg_cv(r, (dir / "cv.svg").string());
  {
    std::ofstream out(dir / "selected.txt");
    out << "selected_kappa=" << format_double(r.selected_kappa) << "\n";
    for (std::size_t ki = 0; ki < kappa_grid.size(); ++ki)
      out << "median_estat@" << format_double(kappa_grid[ki]) << "="
          << format_double(r.median_estat[ki]) << "\n";
  }

  Manifest man;
  man.subcommand = "cv";
  man.set("data", data_path);
  man.set("response", response);
  man.set("kappa_grid", kappa_grid_str);
  man.set("folds", folds);
  man.set("selected_kappa", r.selected_kappa);
  man.set("out", out_dir);
  ff.record(man, base);
  man.set("command", "cv --data " + data_path + " --response " + response +
                         " --kappa-grid " + kappa_grid_str + " --folds " +
                         std::to_string(folds) + " --model " + ff.model +
                         " --niter " + std::to_string(ff.niter) + " --burnin " +
                         std::to_string(ff.burnin) + " --seed " +
                         std::to_string(ff.seed) + " --out " + out_dir);
  man.write(dir / "manifest.txt");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hbart: tree-ensemble regression with a fitted variance surface"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HBART_VERSION);

  // simulate
  auto* sim = app.add_subcommand("simulate", "write a synthetic train/test pair");
  std::size_t sim_n = 500;
  std::uint64_t sim_seed = 1;
  std::string sim_out = "sim";
  sim->add_option("--n", sim_n, "rows per file");
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--out", sim_out, "output directory");

  // fit
  auto* fit = app.add_subcommand("fit", "run the MCMC and record draws");
  std::string fit_data, fit_response = "y", fit_test, fit_exclude, fit_out = "fit";
  FitFlags fit_flags;
  fit->add_option("--data", fit_data, "training CSV")->required();
  fit->add_option("--response", fit_response, "response column name");
  fit->add_option("--test", fit_test, "held-out CSV; draws evaluate here");
  fit->add_option("--exclude", fit_exclude, "comma-separated columns to drop");
  fit->add_option("--out", fit_out, "output directory");
  fit_flags.add_to(fit);

  // predict
  auto* pred = app.add_subcommand("predict", "evaluate saved forests at new points");
  std::string pred_forests, pred_data, pred_response, pred_exclude;
  std::string pred_mode = "mean_sd", pred_out = "predictions.csv";
  double pred_level = 0.95;
  long pred_plugin_draws = 1000;
  std::uint64_t pred_seed = 1;
  pred->add_option("--forests", pred_forests, "forest snapshot file")->required();
  pred->add_option("--data", pred_data, "CSV of points")->required();
  pred->add_option("--response", pred_response,
                   "response column to ignore, when present");
  pred->add_option("--exclude", pred_exclude, "columns to drop");
  pred->add_option("--mode", pred_mode, "mean_sd, predictive or plugin")
      ->check(CLI::IsMember({"mean_sd", "predictive", "plugin"}));
  pred->add_option("--level", pred_level, "interval level for mean_sd");
  pred->add_option("--plugin-draws", pred_plugin_draws, "samples in plugin mode");
  pred->add_option("--seed", pred_seed, "random seed");
  pred->add_option("--out", pred_out, "output CSV");

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "held-out diagnostics and plots");
  std::string diag_draws, diag_forests, diag_data, diag_response = "y";
  std::string diag_exclude, diag_ref_draws, diag_out = "diag";
  double diag_gamma = 0.9, diag_sigma_ref = -1.0;
  std::uint64_t diag_seed = 1;
  diag->add_option("--draws", diag_draws, "draws.csv from fit");
  diag->add_option("--forests", diag_forests, "forest snapshot file");
  diag->add_option("--data", diag_data, "held-out CSV")->required();
  diag->add_option("--response", diag_response, "response column name");
  diag->add_option("--exclude", diag_exclude, "columns to drop");
  diag->add_option("--gamma", diag_gamma, "interval level for the s(x) bands");
  diag->add_option("--sigma-ref", diag_sigma_ref,
                   "reference sigma (horizontal line)");
  diag->add_option("--ref-draws", diag_ref_draws,
                   "baseline draws.csv; its mean s becomes the reference");
  diag->add_option("--seed", diag_seed, "random seed");
  diag->add_option("--out", diag_out, "output directory");

  // cv
  auto* cv = app.add_subcommand("cv", "k-fold cross-validation over kappa");
  std::string cv_data, cv_response = "y", cv_exclude, cv_grid = "2,5,10";
  std::string cv_out = "cv";
  int cv_folds = 5, cv_threads = 1;
  FitFlags cv_flags;
  cv->add_option("--data", cv_data, "training CSV")->required();
  cv->add_option("--response", cv_response, "response column name");
  cv->add_option("--exclude", cv_exclude, "columns to drop");
  cv->add_option("--kappa-grid", cv_grid, "comma-separated kappa values");
  cv->add_option("--folds", cv_folds, "fold count");
  cv->add_option("--threads", cv_threads, "parallel cells");
  cv->add_option("--out", cv_out, "output directory");
  cv_flags.add_to(cv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: usage: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*sim) return cmd_simulate(sim_n, sim_seed, sim_out);
    if (*fit)
      return cmd_fit(fit_data, fit_response, fit_test, fit_exclude, fit_flags,
                     fit_out);
    if (*pred)
      return cmd_predict(pred_forests, pred_data, pred_response, pred_exclude,
                         pred_mode, pred_level, pred_plugin_draws, pred_seed,
                         pred_out);
    if (*diag)
      return cmd_diagnose(diag_draws, diag_forests, diag_data, diag_response,
                          diag_exclude, diag_gamma, diag_sigma_ref,
                          diag_ref_draws, diag_seed, diag_out);
    if (*cv)
      return cmd_cv(cv_data, cv_response, cv_exclude, cv_grid, cv_folds,
                    cv_threads, cv_flags, cv_out);
  } catch (const DataError& e) {
    std::cerr << "error: data: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: numeric: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
