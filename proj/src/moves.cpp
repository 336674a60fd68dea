#include "hbart/moves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hbart/errors.hpp"

namespace hbart {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// move probabilities at a state with the given availabilities
struct MoveProbs {
  double birth = 0.0, death = 0.0, perturb = 0.0;
};

MoveProbs move_probs(const MoveWeights& w, bool can_birth, bool can_death,
                     bool can_perturb) {
  const double tot = (can_birth ? w.birth : 0.0) + (can_death ? w.death : 0.0) +
                     (can_perturb ? w.perturb : 0.0);
  MoveProbs p;
  if (tot <= 0.0) return p;
  if (can_birth) p.birth = w.birth / tot;
  if (can_death) p.death = w.death / tot;
  if (can_perturb) p.perturb = w.perturb / tot;
  return p;
}

int count_grid_vars(const CutpointGrid& grid) {
  int n = 0;
  for (std::size_t v = 0; v < grid.num_vars(); ++v)
    if (grid.size(v) > 0) ++n;
  return n;
}

// log prior probability of one rule: variable uniform over variables with a
// nonempty grid, cutpoint uniform over that variable's full grid
double log_rule_prior(const CutpointGrid& grid, int var) {
  return -std::log(static_cast<double>(count_grid_vars(grid))) -
         std::log(static_cast<double>(grid.size(static_cast<std::size_t>(var))));
}

struct GrowScan {
  std::vector<int> growable_leaves;
  std::vector<LeafGrowInfo> info;  // parallel to growable_leaves
};

bool leaf_can_grow(const MoveContext& ctx, const Tree& tree, int leaf,
                   std::span<const int> obs, LeafGrowInfo* out) {
  if (tree.depth(leaf) >= ctx.max_depth) return false;
  LeafGrowInfo gi = leaf_grow_info(ctx, obs);
  if (!gi.growable) return false;
  if (out) *out = std::move(gi);
  return true;
}

GrowScan scan_growable(const MoveContext& ctx, const Tree& tree,
                       const std::vector<std::vector<int>>& obs_by_leaf) {
  GrowScan gs;
  for (int leaf : tree.leaves()) {
    LeafGrowInfo gi;
    if (leaf_can_grow(ctx, tree, leaf, obs_by_leaf[static_cast<std::size_t>(leaf)], &gi)) {
      gs.growable_leaves.push_back(leaf);
      gs.info.push_back(std::move(gi));
    }
  }
  return gs;
}

// birth prior delta for growing a leaf at depth d with rule on `var`:
// log p(d) + 2 log(1-p(d+1)) - log(1-p(d)) + log rule prior
double birth_log_prior_delta(const MoveContext& ctx, int depth, int var) {
  const DepthPrior& dp = ctx.depth_prior;
  return std::log(dp.split_prob(depth)) + 2.0 * std::log1p(-dp.split_prob(depth + 1)) -
         std::log1p(-dp.split_prob(depth)) + log_rule_prior(*ctx.grid, var);
}

Proposal birth_impl(const Tree& tree, const MoveContext& ctx,
                    const std::vector<std::vector<int>>& obs_by_leaf,
                    const GrowScan& gs, Rng& rng) {
  Proposal p;
  p.kind = MoveKind::birth;

  const int G = static_cast<int>(gs.growable_leaves.size());
  if (G == 0) return p;
  p.available = true;

  // draw leaf, then variable, then cutpoint, each uniformly
  const std::size_t li = rng.uniform_int(static_cast<std::uint64_t>(G));
  const int leaf = gs.growable_leaves[li];
  const LeafGrowInfo& gi = gs.info[li];
  const std::size_t vi = rng.uniform_int(gi.cand_vars.size());
  const int var = gi.cand_vars[vi];
  const auto [clo, chi] = gi.cut_range[vi];
  const int cut =
      clo + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(chi - clo)));
  p.node = leaf;
  p.var = var;
  p.cut = cut;

  // partition the leaf's observations by the drawn rule
  const double cval = ctx.grid->value(static_cast<std::size_t>(var),
                                      static_cast<std::size_t>(cut));
  for (int i : obs_by_leaf[static_cast<std::size_t>(leaf)]) {
    if (ctx.x->at(static_cast<std::size_t>(i), static_cast<std::size_t>(var)) < cval)
      p.obs_left.push_back(i);
    else
      p.obs_right.push_back(i);
  }
  if (static_cast<int>(p.obs_left.size()) < ctx.min_node_size ||
      static_cast<int>(p.obs_right.size()) < ctx.min_node_size)
    return p;  // guard_ok stays false: automatic reject
  p.guard_ok = true;

  p.proposed = tree;
  const double lp = tree.param(leaf);
  std::tie(p.new_left, p.new_right) = p.proposed.birth(leaf, var, cut, lp, lp);

  // forward draw probability
  const int nog_t = static_cast<int>(tree.nogs().size());
  const int int_t = static_cast<int>(tree.internals().size());
  const MoveProbs at_t = move_probs(ctx.weights, true, nog_t > 0, int_t > 0);
  const double log_q_fwd = std::log(at_t.birth) - std::log(static_cast<double>(G)) -
                           std::log(static_cast<double>(gi.cand_vars.size())) -
                           std::log(static_cast<double>(chi - clo));

  // reverse (death) draw probability at the proposed tree
  const int nog_tp = static_cast<int>(p.proposed.nogs().size());
  int g_tp = G - 1;
  if (leaf_can_grow(ctx, p.proposed, p.new_left, p.obs_left, nullptr)) ++g_tp;
  if (leaf_can_grow(ctx, p.proposed, p.new_right, p.obs_right, nullptr)) ++g_tp;
  const MoveProbs at_tp = move_probs(ctx.weights, g_tp > 0, true, true);
  const double log_q_rev =
      std::log(at_tp.death) - std::log(static_cast<double>(nog_tp));

  p.log_proposal_ratio = log_q_rev - log_q_fwd;
  p.log_prior_ratio = birth_log_prior_delta(ctx, tree.depth(leaf), var);
  return p;
}

Proposal death_impl(const Tree& tree, const MoveContext& ctx,
                    const std::vector<std::vector<int>>& obs_by_leaf,
                    const GrowScan& gs, Rng& rng) {
  Proposal p;
  p.kind = MoveKind::death;

  const std::vector<int> nogs = tree.nogs();
  if (nogs.empty()) return p;
  p.available = true;
  p.guard_ok = true;  // merging never shrinks a leaf

  const int nog = nogs[rng.uniform_int(nogs.size())];
  p.node = nog;
  p.var = tree.node(nog).var;
  p.cut = tree.node(nog).cut;
  const int lchild = tree.node(nog).left;
  const int rchild = tree.node(nog).right;

  p.obs_merged = obs_by_leaf[static_cast<std::size_t>(lchild)];
  p.obs_merged.insert(p.obs_merged.end(),
                      obs_by_leaf[static_cast<std::size_t>(rchild)].begin(),
                      obs_by_leaf[static_cast<std::size_t>(rchild)].end());

  p.proposed = tree;
  p.proposed.death(nog, tree.param(lchild));

  // forward draw probability
  const int G = static_cast<int>(gs.growable_leaves.size());
  const int int_t = static_cast<int>(tree.internals().size());
  const MoveProbs at_t = move_probs(ctx.weights, G > 0, true, int_t > 0);
  const double log_q_fwd =
      std::log(at_t.death) - std::log(static_cast<double>(nogs.size()));

  // reverse (birth) draw probability at the merged tree
  LeafGrowInfo merged_gi;
  const bool merged_grow = leaf_can_grow(ctx, p.proposed, nog, p.obs_merged, &merged_gi);
  int g_tp = G + (merged_grow ? 1 : 0);
  if (leaf_can_grow(ctx, tree, lchild, obs_by_leaf[static_cast<std::size_t>(lchild)],
                    nullptr))
    --g_tp;
  if (leaf_can_grow(ctx, tree, rchild, obs_by_leaf[static_cast<std::size_t>(rchild)],
                    nullptr))
    --g_tp;
  if (!merged_grow || g_tp <= 0)
    throw NumericError("propose_death: merged leaf is not growable");

  // candidate count for the removed rule's variable at the merged leaf
  int v_cuts = 0;
  const int v_count = static_cast<int>(merged_gi.cand_vars.size());
  for (std::size_t k = 0; k < merged_gi.cand_vars.size(); ++k) {
    if (merged_gi.cand_vars[k] == p.var)
      v_cuts = merged_gi.cut_range[k].second - merged_gi.cut_range[k].first;
  }
  if (v_cuts <= 0) throw NumericError("propose_death: removed rule not drawable");

  const int nog_tp = static_cast<int>(p.proposed.nogs().size());
  const int int_tp = int_t - 1;
  const MoveProbs at_tp = move_probs(ctx.weights, true, nog_tp > 0, int_tp > 0);
  const double log_q_rev = std::log(at_tp.birth) - std::log(static_cast<double>(g_tp)) -
                           std::log(static_cast<double>(v_count)) -
                           std::log(static_cast<double>(v_cuts));

  p.log_proposal_ratio = log_q_rev - log_q_fwd;
  p.log_prior_ratio = -birth_log_prior_delta(ctx, tree.depth(nog), p.var);
  return p;
}

Proposal perturb_impl(const Tree& tree, const MoveContext& ctx,
                      const std::vector<std::vector<int>>& obs_by_leaf, Rng& rng) {
  Proposal p;
  p.kind = MoveKind::perturb;

  const std::vector<int> internals = tree.internals();
  if (internals.empty()) return p;
  const int nvars = count_grid_vars(*ctx.grid);
  if (nvars == 0) return p;
  p.available = true;

  const int node = internals[rng.uniform_int(internals.size())];
  // draw the new rule from the prior: variable uniform, then cutpoint uniform
  int var = -1;
  {
    std::uint64_t pick = rng.uniform_int(static_cast<std::uint64_t>(nvars));
    for (std::size_t v = 0; v < ctx.grid->num_vars(); ++v) {
      if (ctx.grid->size(v) == 0) continue;
      if (pick == 0) {
        var = static_cast<int>(v);
        break;
      }
      --pick;
    }
  }
  const int cut = static_cast<int>(
      rng.uniform_int(ctx.grid->size(static_cast<std::size_t>(var))));
  p.node = node;
  p.var = var;
  p.cut = cut;

  const int old_var = tree.node(node).var;

  p.proposed = tree;
  p.proposed.set_rule(node, var, cut);

  // re-route the subtree's observations under the new rule
  p.affected_leaves = tree.leaves_below(node);
  p.new_obs_by_leaf.assign(p.affected_leaves.size(), {});
  std::vector<int> leaf_slot(static_cast<std::size_t>(tree.arena_size()), -1);
  for (std::size_t k = 0; k < p.affected_leaves.size(); ++k)
    leaf_slot[static_cast<std::size_t>(p.affected_leaves[k])] = static_cast<int>(k);
  for (int leaf : p.affected_leaves) {
    for (int i : obs_by_leaf[static_cast<std::size_t>(leaf)]) {
      const int dest = p.proposed.route_from(
          node, ctx.x->row(static_cast<std::size_t>(i)), *ctx.grid);
      p.new_obs_by_leaf[static_cast<std::size_t>(
                            leaf_slot[static_cast<std::size_t>(dest)])]
          .push_back(i);
    }
  }
  for (const std::vector<int>& obs : p.new_obs_by_leaf)
    if (static_cast<int>(obs.size()) < ctx.min_node_size) return p;  // auto reject
  p.guard_ok = true;

  // proposal is the prior's rule distribution, so the two ratios cancel;
  // both are nonzero only when grids differ in size across variables
  const double c_old =
      static_cast<double>(ctx.grid->size(static_cast<std::size_t>(old_var)));
  const double c_new =
      static_cast<double>(ctx.grid->size(static_cast<std::size_t>(var)));
  p.log_proposal_ratio = std::log(c_new) - std::log(c_old);
  p.log_prior_ratio = std::log(c_old) - std::log(c_new);
  return p;
}

}  // namespace

LeafGrowInfo leaf_grow_info(const MoveContext& ctx, std::span<const int> obs) {
  const CutpointGrid& grid = *ctx.grid;
  const Matrix& x = *ctx.x;
  const std::size_t d = grid.num_vars();
  LeafGrowInfo gi;
  if (obs.empty()) return gi;

  std::vector<double> mn(d, kInf), mx(d, -kInf);
  for (int i : obs) {
    const std::span<const double> row = x.row(static_cast<std::size_t>(i));
    for (std::size_t v = 0; v < d; ++v) {
      mn[v] = std::min(mn[v], row[v]);
      mx[v] = std::max(mx[v], row[v]);
    }
  }
  for (std::size_t v = 0; v < d; ++v) {
    const std::vector<double>& cuts = grid.cuts[v];
    if (cuts.empty()) continue;
    // usable cuts lie in (min, max]: both children get at least one row
    const auto lo = std::upper_bound(cuts.begin(), cuts.end(), mn[v]);
    const auto hi = std::upper_bound(cuts.begin(), cuts.end(), mx[v]);
    const int nlo = static_cast<int>(lo - cuts.begin());
    const int nhi = static_cast<int>(hi - cuts.begin());
    if (nhi > nlo) {
      gi.cand_vars.push_back(static_cast<int>(v));
      gi.cut_range.emplace_back(nlo, nhi);
      gi.total_cuts += nhi - nlo;
    }
  }
  gi.growable = !gi.cand_vars.empty();
  return gi;
}

std::vector<std::vector<int>> group_by_leaf(const Tree& tree,
                                            std::span<const int> leaf_of) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(tree.arena_size()));
  for (std::size_t i = 0; i < leaf_of.size(); ++i)
    out[static_cast<std::size_t>(leaf_of[i])].push_back(static_cast<int>(i));
  return out;
}

Proposal propose_birth(const Tree& tree, const MoveContext& ctx,
                       const std::vector<std::vector<int>>& obs_by_leaf, Rng& rng) {
  return birth_impl(tree, ctx, obs_by_leaf, scan_growable(ctx, tree, obs_by_leaf), rng);
}

Proposal propose_death(const Tree& tree, const MoveContext& ctx,
                       const std::vector<std::vector<int>>& obs_by_leaf, Rng& rng) {
  return death_impl(tree, ctx, obs_by_leaf, scan_growable(ctx, tree, obs_by_leaf), rng);
}

Proposal propose_perturb(const Tree& tree, const MoveContext& ctx,
                         const std::vector<std::vector<int>>& obs_by_leaf, Rng& rng) {
  return perturb_impl(tree, ctx, obs_by_leaf, rng);
}

Proposal propose_move(const Tree& tree, const MoveContext& ctx,
                      const std::vector<std::vector<int>>& obs_by_leaf, Rng& rng) {
  const GrowScan gs = scan_growable(ctx, tree, obs_by_leaf);
  const bool can_birth = !gs.growable_leaves.empty();
  const bool can_death = !tree.nogs().empty();
  const bool can_perturb =
      !tree.internals().empty() && count_grid_vars(*ctx.grid) > 0;
  const MoveProbs mp = move_probs(ctx.weights, can_birth, can_death, can_perturb);
  if (mp.birth + mp.death + mp.perturb <= 0.0) {
    Proposal none;
    return none;
  }
  const double u = rng.uniform();
  if (u < mp.birth) return birth_impl(tree, ctx, obs_by_leaf, gs, rng);
  if (u < mp.birth + mp.death) return death_impl(tree, ctx, obs_by_leaf, gs, rng);
  return perturb_impl(tree, ctx, obs_by_leaf, rng);
}

}  // namespace hbart
