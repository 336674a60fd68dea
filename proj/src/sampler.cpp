#include "hbart/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hbart/errors.hpp"
#include "hbart/io_util.hpp"
#include "hbart/mean_model.hpp"
#include "hbart/stats_util.hpp"
#include "hbart/variance_model.hpp"

namespace hbart {

void ChainSettings::validate() const {
  if (n_iter < 1 || burn_in < 0 || burn_in >= n_iter)
    throw DataError("chain settings: need 0 <= burn_in < n_iter");
  if (thin < 1) throw DataError("chain settings: thin must be >= 1");
  if (min_node_size < 1) throw DataError("chain settings: min_node_size must be >= 1");
  if (max_depth < 1) throw DataError("chain settings: max_depth must be >= 1");
  if (refresh_every < 1) throw DataError("chain settings: refresh_every must be >= 1");
}

Sampler::Sampler(const DataSet& ds, const CutpointGrid& grid,
                 const PriorConfig& prior, const ChainSettings& settings)
    : ds_(ds), grid_(grid), prior_(prior), st_(settings) {
  st_.validate();
  prior_.validate();
  const std::size_t n = ds_.n();
  if (n == 0) throw DataError("sampler: empty dataset");

  offset_ = mean_of(ds_.y);
  yc_.resize(n);
  for (std::size_t i = 0; i < n; ++i) yc_[i] = ds_.y[i] - offset_;

  mean_ctx_ = MoveContext{&grid_, &ds_.x, DepthPrior{prior_.alpha, prior_.beta},
                          st_.weights, st_.min_node_size, st_.max_depth};
  var_ctx_ = MoveContext{&grid_, &ds_.x,
                         DepthPrior{prior_.alpha_prime, prior_.beta_prime},
                         st_.weights, st_.min_node_size, st_.max_depth};

  mean_forest_.assign(static_cast<std::size_t>(prior_.m), Tree(0.0));
  mean_leaf_of_.assign(mean_forest_.size(), std::vector<int>(n, 0));
  fhat_.assign(n, 0.0);

  if (st_.model == ModelKind::hbart) {
    // start each variance leaf at lambda' so the initial product is lambda
    var_forest_.assign(static_cast<std::size_t>(prior_.m_prime),
                       Tree(prior_.lambda_prime));
    var_leaf_of_.assign(var_forest_.size(), std::vector<int>(n, 0));
    s2hat_.assign(n, std::pow(prior_.lambda_prime,
                              static_cast<double>(prior_.m_prime)));
  } else {
    sigma2_ = prior_.lambda;
    s2hat_.assign(n, sigma2_);
  }

  g_.resize(n);
  r_.resize(n);
  comp_.resize(n);
  e2_.resize(n);
}

void Sampler::apply_accepted(Proposal& prop, std::vector<int>& leaf_of) {
  switch (prop.kind) {
    case MoveKind::birth:
      for (int i : prop.obs_left) leaf_of[static_cast<std::size_t>(i)] = prop.new_left;
      for (int i : prop.obs_right)
        leaf_of[static_cast<std::size_t>(i)] = prop.new_right;
      break;
    case MoveKind::death:
      for (int i : prop.obs_merged) leaf_of[static_cast<std::size_t>(i)] = prop.node;
      break;
    case MoveKind::perturb:
      for (std::size_t k = 0; k < prop.affected_leaves.size(); ++k)
        for (int i : prop.new_obs_by_leaf[k])
          leaf_of[static_cast<std::size_t>(i)] = prop.affected_leaves[k];
      break;
    default:
      break;
  }
}

namespace {
int move_index(MoveKind k) {
  switch (k) {
    case MoveKind::birth: return 0;
    case MoveKind::death: return 1;
    default: return 2;
  }
}
}  // namespace

void Sampler::mean_tree_step(std::size_t j, Rng& rng) {
  Tree& tree = mean_forest_[j];
  std::vector<int>& leaf_of = mean_leaf_of_[j];
  const std::size_t n = yc_.size();
  const double tau = prior_.tau;

  for (std::size_t i = 0; i < n; ++i)
    g_[i] = tree.param(leaf_of[static_cast<std::size_t>(i)]);
  mean_residuals(yc_, fhat_, g_, r_);

  if (st_.mean_moves) {
    const std::vector<std::vector<int>> obs_by_leaf = group_by_leaf(tree, leaf_of);
    Proposal prop = propose_move(tree, mean_ctx_, obs_by_leaf, rng);
    if (prop.kind == MoveKind::none) {
      ++accept_.mean_skipped;
    } else if (!prop.guard_ok) {
      AcceptStats& cell = accept_.mean[move_index(prop.kind)];
      ++cell.proposed;
      ++cell.auto_rejected;
    } else {
      AcceptStats& cell = accept_.mean[move_index(prop.kind)];
      ++cell.proposed;
      auto stats_over = [&](const std::vector<int>& obs) {
        MeanLeafStats s;
        for (int i : obs) s.add(r_[static_cast<std::size_t>(i)],
                                s2hat_[static_cast<std::size_t>(i)]);
        return s;
      };
      double dmarg = 0.0;
      if (prop.kind == MoveKind::birth) {
        const MeanLeafStats sl = stats_over(prop.obs_left);
        const MeanLeafStats sr = stats_over(prop.obs_right);
        MeanLeafStats sp = sl;
        sp.wsum_r += sr.wsum_r;
        sp.wsum_1 += sr.wsum_1;
        sp.count += sr.count;
        dmarg = mean_log_marginal(sl, tau) + mean_log_marginal(sr, tau) -
                mean_log_marginal(sp, tau);
      } else if (prop.kind == MoveKind::death) {
        const int l = tree.node(prop.node).left;
        const int rr = tree.node(prop.node).right;
        const MeanLeafStats sl = stats_over(obs_by_leaf[static_cast<std::size_t>(l)]);
        const MeanLeafStats sr = stats_over(obs_by_leaf[static_cast<std::size_t>(rr)]);
        MeanLeafStats sp = sl;
        sp.wsum_r += sr.wsum_r;
        sp.wsum_1 += sr.wsum_1;
        sp.count += sr.count;
        dmarg = mean_log_marginal(sp, tau) - mean_log_marginal(sl, tau) -
                mean_log_marginal(sr, tau);
      } else {
        for (std::size_t k = 0; k < prop.affected_leaves.size(); ++k) {
          const int leaf = prop.affected_leaves[k];
          dmarg += mean_log_marginal(stats_over(prop.new_obs_by_leaf[k]), tau) -
                   mean_log_marginal(
                       stats_over(obs_by_leaf[static_cast<std::size_t>(leaf)]), tau);
        }
      }
      const double log_alpha = prop.log_proposal_ratio + prop.log_prior_ratio + dmarg;
      if (std::log(1.0 - rng.uniform()) < log_alpha) {
        tree = std::move(prop.proposed);
        apply_accepted(prop, leaf_of);
        ++cell.accepted;
      }
    }
  }

  // draw all leaf means on the (possibly updated) structure
  std::vector<MeanLeafStats> stats(static_cast<std::size_t>(tree.arena_size()));
  for (std::size_t i = 0; i < n; ++i)
    stats[static_cast<std::size_t>(leaf_of[i])].add(r_[i], s2hat_[i]);
  for (int leaf : tree.leaves())
    tree.set_param(leaf,
                   draw_mean_leaf(stats[static_cast<std::size_t>(leaf)], tau, rng));

  for (std::size_t i = 0; i < n; ++i)
    fhat_[i] += tree.param(leaf_of[i]) - g_[i];
}

void Sampler::var_tree_step(std::size_t l, Rng& rng) {
  Tree& tree = var_forest_[l];
  std::vector<int>& leaf_of = var_leaf_of_[l];
  const std::size_t n = yc_.size();
  const double nu_p = prior_.nu_prime;
  const double lambda_p = prior_.lambda_prime;

  for (std::size_t i = 0; i < n; ++i) g_[i] = tree.param(leaf_of[i]);
  var_complement(s2hat_, g_, comp_);
  for (std::size_t i = 0; i < n; ++i) {
    const double res = yc_[i] - fhat_[i];
    e2_[i] = res * res / comp_[i];
  }

  if (st_.var_moves) {
    const std::vector<std::vector<int>> obs_by_leaf = group_by_leaf(tree, leaf_of);
    Proposal prop = propose_move(tree, var_ctx_, obs_by_leaf, rng);
    if (prop.kind == MoveKind::none) {
      ++accept_.var_skipped;
    } else if (!prop.guard_ok) {
      AcceptStats& cell = accept_.var[move_index(prop.kind)];
      ++cell.proposed;
      ++cell.auto_rejected;
    } else {
      AcceptStats& cell = accept_.var[move_index(prop.kind)];
      ++cell.proposed;
      auto stats_over = [&](const std::vector<int>& obs) {
        VarLeafStats s;
        for (int i : obs) s.add(e2_[static_cast<std::size_t>(i)]);
        return s;
      };
      double dmarg = 0.0;
      if (prop.kind == MoveKind::birth) {
        const VarLeafStats sl = stats_over(prop.obs_left);
        const VarLeafStats sr = stats_over(prop.obs_right);
        VarLeafStats sp = sl;
        sp.sum_e2 += sr.sum_e2;
        sp.count += sr.count;
        dmarg = var_log_marginal(sl, nu_p, lambda_p) +
                var_log_marginal(sr, nu_p, lambda_p) -
                var_log_marginal(sp, nu_p, lambda_p);
      } else if (prop.kind == MoveKind::death) {
        const int lc = tree.node(prop.node).left;
        const int rc = tree.node(prop.node).right;
        const VarLeafStats sl = stats_over(obs_by_leaf[static_cast<std::size_t>(lc)]);
        const VarLeafStats sr = stats_over(obs_by_leaf[static_cast<std::size_t>(rc)]);
        VarLeafStats sp = sl;
        sp.sum_e2 += sr.sum_e2;
        sp.count += sr.count;
        dmarg = var_log_marginal(sp, nu_p, lambda_p) -
                var_log_marginal(sl, nu_p, lambda_p) -
                var_log_marginal(sr, nu_p, lambda_p);
      } else {
        for (std::size_t k = 0; k < prop.affected_leaves.size(); ++k) {
          const int leaf = prop.affected_leaves[k];
          dmarg +=
              var_log_marginal(stats_over(prop.new_obs_by_leaf[k]), nu_p, lambda_p) -
              var_log_marginal(
                  stats_over(obs_by_leaf[static_cast<std::size_t>(leaf)]), nu_p,
                  lambda_p);
        }
      }
      const double log_alpha = prop.log_proposal_ratio + prop.log_prior_ratio + dmarg;
      if (std::log(1.0 - rng.uniform()) < log_alpha) {
        tree = std::move(prop.proposed);
        apply_accepted(prop, leaf_of);
        ++cell.accepted;
      }
    }
  }

  // draw all leaf variances on the (possibly updated) structure
  std::vector<VarLeafStats> stats(static_cast<std::size_t>(tree.arena_size()));
  for (std::size_t i = 0; i < n; ++i)
    stats[static_cast<std::size_t>(leaf_of[i])].add(e2_[i]);
  for (int leaf : tree.leaves())
    tree.set_param(leaf, draw_var_leaf(stats[static_cast<std::size_t>(leaf)], nu_p,
                                       lambda_p, rng));

  for (std::size_t i = 0; i < n; ++i) {
    s2hat_[i] = comp_[i] * tree.param(leaf_of[i]);
    if (!(s2hat_[i] > 0.0))
      throw NumericError("sampler: non-positive variance after update");
  }
}

void Sampler::iterate(Rng& rng) {
  const std::size_t m = mean_forest_.size();
  for (std::size_t j = 0; j < m; ++j)
    mean_tree_step(st_.reverse_mean_sweep ? m - 1 - j : j, rng);

  if (st_.model == ModelKind::hbart) {
    const std::size_t mp = var_forest_.size();
    for (std::size_t l = 0; l < mp; ++l)
      var_tree_step(st_.reverse_var_sweep ? mp - 1 - l : l, rng);
  } else {
    for (std::size_t i = 0; i < yc_.size(); ++i) r_[i] = yc_[i] - fhat_[i];
    sigma2_ = draw_sigma2_homoscedastic(r_, prior_.nu, prior_.lambda, rng);
    for (double& v : s2hat_) v = sigma2_;
  }

  ++iteration_;
  if (iteration_ % st_.refresh_every == 0) refresh_caches();
}

double Sampler::eval_f(std::span<const double> xrow) const {
  double f = offset_;
  for (const Tree& t : mean_forest_) f += t.evaluate(xrow, grid_);
  return f;
}

double Sampler::eval_s2(std::span<const double> xrow) const {
  if (st_.model == ModelKind::bart) return sigma2_;
  double s2 = 1.0;
  for (const Tree& t : var_forest_) s2 *= t.evaluate(xrow, grid_);
  return s2;
}

void Sampler::refresh_caches(double rel_tol) {
  const std::size_t n = yc_.size();
  const std::string at = " (iteration " + std::to_string(iteration_) + ")";
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> row = ds_.x.row(i);
    double f = 0.0;
    for (std::size_t j = 0; j < mean_forest_.size(); ++j) {
      const int leaf = mean_forest_[j].route(row, grid_);
      if (leaf != mean_leaf_of_[j][i])
        throw NumericError("sampler: stale assignment, mean tree " +
                           std::to_string(j) + ", row " + std::to_string(i) + at);
      f += mean_forest_[j].param(leaf);
    }
    if (std::abs(f - fhat_[i]) >
        rel_tol * std::max({1.0, std::abs(f), std::abs(fhat_[i])}))
      throw NumericError("sampler: mean cache drift at row " + std::to_string(i) + at);
    fhat_[i] = f;

    if (st_.model == ModelKind::hbart) {
      double s2 = 1.0;
      for (std::size_t l = 0; l < var_forest_.size(); ++l) {
        const int leaf = var_forest_[l].route(row, grid_);
        if (leaf != var_leaf_of_[l][i])
          throw NumericError("sampler: stale assignment, variance tree " +
                             std::to_string(l) + ", row " + std::to_string(i) + at);
        s2 *= var_forest_[l].param(leaf);
      }
      if (!(s2 > 0.0))
        throw NumericError("sampler: non-positive variance product at row " +
                           std::to_string(i) + at);
      if (std::abs(s2 - s2hat_[i]) > rel_tol * std::max(s2, s2hat_[i]))
        throw NumericError("sampler: variance cache drift at row " +
                           std::to_string(i) + at);
      s2hat_[i] = s2;
    }
  }
}

PosteriorDraws run_chain(const DataSet& ds, const CutpointGrid& grid,
                         const PriorConfig& prior, const ChainSettings& settings,
                         const Matrix& eval_points) {
  settings.validate();
  if (eval_points.cols != ds.d())
    throw DataError("run_chain: eval point dimension mismatch");

  Sampler sampler(ds, grid, prior, settings);
  Rng rng(settings.seed);

  PosteriorDraws out;
  out.model = settings.model;
  out.prior = prior;
  out.settings = settings;
  out.grid = grid;
  out.offset = sampler.offset();
  const long kept_total = settings.kept();
  const std::size_t k = eval_points.rows;
  out.f = Matrix(static_cast<std::size_t>(kept_total), k);
  out.s = Matrix(static_cast<std::size_t>(kept_total), k);
  out.mean_split_counts.assign(ds.d(), 0.0);
  out.var_split_counts.assign(ds.d(), 0.0);

  long kept = 0;
  for (long it = 1; it <= settings.n_iter; ++it) {
    sampler.iterate(rng);
    if (it <= settings.burn_in) continue;
    if ((it - settings.burn_in) % settings.thin != 0) continue;

    for (std::size_t p = 0; p < k; ++p) {
      const std::span<const double> row = eval_points.row(p);
      out.f.at(static_cast<std::size_t>(kept), p) = sampler.eval_f(row);
      const double s2 = sampler.eval_s2(row);
      if (!(s2 > 0.0)) throw NumericError("run_chain: non-positive predicted variance");
      out.s.at(static_cast<std::size_t>(kept), p) = std::sqrt(s2);
    }
    for (const Tree& t : sampler.mean_forest())
      for (int id : t.internals())
        out.mean_split_counts[static_cast<std::size_t>(t.node(id).var)] += 1.0;
    for (const Tree& t : sampler.var_forest())
      for (int id : t.internals())
        out.var_split_counts[static_cast<std::size_t>(t.node(id).var)] += 1.0;

    if (settings.forest_every > 0 && kept % settings.forest_every == 0) {
      ForestSnapshot snap;
      snap.kept_index = kept;
      snap.mean_trees = sampler.mean_forest();
      snap.var_trees = sampler.var_forest();
      snap.sigma2 = sampler.sigma2();
      out.forests.push_back(std::move(snap));
    }
    ++kept;
  }
  out.accept = sampler.accept();
  return out;
}

PredictionSummary summarize_draws(const PosteriorDraws& draws, double level) {
  const std::size_t k = static_cast<std::size_t>(draws.n_points());
  const std::size_t nd = static_cast<std::size_t>(draws.n_kept());
  if (nd == 0) throw DataError("summarize_draws: no draws");
  PredictionSummary out;
  out.level = level;
  const double qlo = (1.0 - level) / 2.0;
  const double qhi = 1.0 - qlo;
  std::vector<double> col(nd);
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t d = 0; d < nd; ++d) col[d] = draws.f.at(d, p);
    out.f_mean.push_back(mean_of(col));
    out.f_lo.push_back(quantile(col, qlo));
    out.f_hi.push_back(quantile(col, qhi));
    for (std::size_t d = 0; d < nd; ++d) col[d] = draws.s.at(d, p);
    out.s_mean.push_back(mean_of(col));
    out.s_lo.push_back(quantile(col, qlo));
    out.s_hi.push_back(quantile(col, qhi));
  }
  return out;
}

Matrix predictive_samples(const PosteriorDraws& draws, Rng& rng) {
  const std::size_t nd = static_cast<std::size_t>(draws.n_kept());
  const std::size_t k = static_cast<std::size_t>(draws.n_points());
  Matrix out(nd, k);
  for (std::size_t d = 0; d < nd; ++d)
    for (std::size_t p = 0; p < k; ++p)
      out.at(d, p) = draws.f.at(d, p) + draws.s.at(d, p) * rng.normal();
  return out;
}

Matrix plugin_samples(const PosteriorDraws& draws, long n_samples, Rng& rng) {
  const PredictionSummary sum = summarize_draws(draws);
  const std::size_t k = sum.f_mean.size();
  Matrix out(static_cast<std::size_t>(n_samples), k);
  for (std::size_t d = 0; d < static_cast<std::size_t>(n_samples); ++d)
    for (std::size_t p = 0; p < k; ++p)
      out.at(d, p) = sum.f_mean[p] + sum.s_mean[p] * rng.normal();
  return out;
}

PosteriorDraws draws_at_points(const PosteriorDraws& fitted, const Matrix& x_new) {
  if (fitted.forests.empty())
    throw DataError("draws_at_points: no forest snapshots available");
  PosteriorDraws out;
  out.model = fitted.model;
  out.prior = fitted.prior;
  out.settings = fitted.settings;
  out.grid = fitted.grid;
  out.offset = fitted.offset;
  const std::size_t nd = fitted.forests.size();
  const std::size_t k = x_new.rows;
  out.f = Matrix(nd, k);
  out.s = Matrix(nd, k);
  for (std::size_t d = 0; d < nd; ++d) {
    const ForestSnapshot& snap = fitted.forests[d];
    for (std::size_t p = 0; p < k; ++p) {
      const std::span<const double> row = x_new.row(p);
      double f = fitted.offset;
      for (const Tree& t : snap.mean_trees) f += t.evaluate(row, fitted.grid);
      out.f.at(d, p) = f;
      double s2 = snap.sigma2;
      if (fitted.model == ModelKind::hbart) {
        s2 = 1.0;
        for (const Tree& t : snap.var_trees) s2 *= t.evaluate(row, fitted.grid);
      }
      if (!(s2 > 0.0))
        throw NumericError("draws_at_points: non-positive variance");
      out.s.at(d, p) = std::sqrt(s2);
    }
  }
  return out;
}

// --- snapshot + draw files --------------------------------------------------

void save_forests(const PosteriorDraws& draws, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "hbart-forests 1\n";
  out << "model " << (draws.model == ModelKind::hbart ? "hbart" : "bart") << "\n";
  out << "offset " << format_double(draws.offset) << "\n";
  const auto kv = config_entries(draws.prior);
  out << "prior";
  for (const auto& [key, val] : kv) out << ' ' << key << '=' << val;
  out << "\n";
  out << "nvars " << draws.grid.num_vars() << "\n";
  for (std::size_t v = 0; v < draws.grid.num_vars(); ++v) {
    out << "grid " << v << ' ' << draws.grid.size(v);
    for (double c : draws.grid.cuts[v]) out << ' ' << format_double(c);
    out << "\n";
  }
  out << "draws " << draws.forests.size() << "\n";
  for (const ForestSnapshot& snap : draws.forests) {
    out << "draw " << snap.kept_index << ' ' << format_double(snap.sigma2) << "\n";
    out << "meantrees " << snap.mean_trees.size() << "\n";
    for (const Tree& t : snap.mean_trees) {
      out << "tree " << t.num_nodes() << "\n";
      out << t.serialize();
    }
    out << "vartrees " << snap.var_trees.size() << "\n";
    for (const Tree& t : snap.var_trees) {
      out << "tree " << t.num_nodes() << "\n";
      out << t.serialize();
    }
  }
  out << "end\n";
}

namespace {
void expect_tag(std::istream& in, const std::string& tag, std::string& got) {
  if (!(in >> got) || got != tag)
    throw DataError("forest file: expected '" + tag + "', got '" + got + "'");
}
}  // namespace

PosteriorDraws load_forests(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  PosteriorDraws out;
  std::string tag, word;
  int version = 0;
  expect_tag(in, "hbart-forests", tag);
  in >> version;
  expect_tag(in, "model", tag);
  in >> word;
  out.model = (word == "hbart") ? ModelKind::hbart : ModelKind::bart;
  expect_tag(in, "offset", tag);
  in >> out.offset;
  expect_tag(in, "prior", tag);
  {
    std::string line;
    std::getline(in, line);
    std::istringstream ls(line);
    std::map<std::string, std::string> kv;
    std::string item;
    while (ls >> item) {
      const std::size_t eq = item.find('=');
      if (eq != std::string::npos) kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    apply_config_entries(out.prior, kv);
    out.prior.validate();
  }
  std::size_t nvars = 0;
  expect_tag(in, "nvars", tag);
  in >> nvars;
  out.grid.cuts.assign(nvars, {});
  for (std::size_t v = 0; v < nvars; ++v) {
    std::size_t idx = 0, cnt = 0;
    expect_tag(in, "grid", tag);
    in >> idx >> cnt;
    out.grid.cuts[idx].resize(cnt);
    for (std::size_t c = 0; c < cnt; ++c) in >> out.grid.cuts[idx][c];
  }
  std::size_t ndraws = 0;
  expect_tag(in, "draws", tag);
  in >> ndraws;
  for (std::size_t d = 0; d < ndraws; ++d) {
    ForestSnapshot snap;
    expect_tag(in, "draw", tag);
    in >> snap.kept_index >> snap.sigma2;
    std::size_t nm = 0;
    expect_tag(in, "meantrees", tag);
    in >> nm;
    std::string rest;
    std::getline(in, rest);
    for (std::size_t j = 0; j < nm; ++j) {
      expect_tag(in, "tree", tag);
      int nn = 0;
      in >> nn;
      std::getline(in, rest);
      snap.mean_trees.push_back(Tree::deserialize(in, nn));
    }
    std::size_t nv = 0;
    expect_tag(in, "vartrees", tag);
    in >> nv;
    std::getline(in, rest);
    for (std::size_t l = 0; l < nv; ++l) {
      expect_tag(in, "tree", tag);
      int nn = 0;
      in >> nn;
      std::getline(in, rest);
      snap.var_trees.push_back(Tree::deserialize(in, nn));
    }
    out.forests.push_back(std::move(snap));
  }
  expect_tag(in, "end", tag);
  return out;
}

void write_draws_csv(const PosteriorDraws& draws, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  const std::size_t k = static_cast<std::size_t>(draws.n_points());
  out << "iter";
  for (std::size_t p = 0; p < k; ++p) out << ",f@p" << (p + 1);
  for (std::size_t p = 0; p < k; ++p) out << ",s@p" << (p + 1);
  out << "\n";
  for (std::size_t d = 0; d < static_cast<std::size_t>(draws.n_kept()); ++d) {
    out << (d + 1);
    for (std::size_t p = 0; p < k; ++p) out << ',' << format_double(draws.f.at(d, p));
    for (std::size_t p = 0; p < k; ++p) out << ',' << format_double(draws.s.at(d, p));
    out << "\n";
  }
}

PosteriorDraws read_draws_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty draws file");
  std::size_t k = 0;
  {
    std::istringstream hs(line);
    std::string col;
    std::size_t ncol = 0;
    while (std::getline(hs, col, ',')) ++ncol;
    if (ncol < 3 || (ncol - 1) % 2 != 0)
      throw DataError(path + ": malformed draws header");
    k = (ncol - 1) / 2;
  }
  std::vector<double> fs, ss;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');  // iter
    for (std::size_t p = 0; p < k; ++p) {
      std::getline(ls, cell, ',');
      fs.push_back(std::stod(cell));
    }
    for (std::size_t p = 0; p < k; ++p) {
      std::getline(ls, cell, ',');
      ss.push_back(std::stod(cell));
    }
    ++rows;
  }
  PosteriorDraws out;
  out.f = Matrix(rows, k);
  out.f.v = std::move(fs);
  out.s = Matrix(rows, k);
  out.s.v = std::move(ss);
  // a constant s across points in every draw is the baseline model's
  // signature (one global sigma per iteration)
  bool constant_s = k > 1 && rows > 0;
  for (std::size_t r = 0; r < rows && constant_s; ++r)
    for (std::size_t p = 1; p < k; ++p)
      if (out.s.at(r, p) != out.s.at(r, 0)) {
        constant_s = false;
        break;
      }
  if (constant_s) out.model = ModelKind::bart;
  return out;
}

}  // namespace hbart
