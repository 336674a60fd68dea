#pragma once

#include <span>
#include <vector>

#include "hbart/data.hpp"
#include "hbart/rng.hpp"
#include "hbart/tree.hpp"

namespace hbart {

// Mixture over structural moves; weights of unavailable moves are
// renormalized away state by state.
struct MoveWeights {
  double birth = 0.4;
  double death = 0.4;
  double perturb = 0.2;
};

enum class MoveKind { none, birth, death, perturb };

struct MoveContext {
  const CutpointGrid* grid = nullptr;
  const Matrix* x = nullptr;
  DepthPrior depth_prior;
  MoveWeights weights;
  int min_node_size = 5;
  int max_depth = 15;
};

// A drawn structural proposal together with the exact log ratios needed for
// Metropolis-Hastings:
//   log_proposal_ratio = log q(T'->T) - log q(T->T')
//   log_prior_ratio    = log pi(T')   - log pi(T)
// The acceptance probability is then
//   exp(log_proposal_ratio + log_prior_ratio + delta log marginal likelihood).
struct Proposal {
  MoveKind kind = MoveKind::none;
  bool available = false;  // false: no move could be drawn (sampler skips)
  bool guard_ok = false;   // false: node-size guard tripped, automatic reject

  Tree proposed;
  int node = -1;  // grown leaf / collapsed nog / re-ruled internal
  int var = -1;
  int cut = -1;
  int new_left = -1;   // birth only: child ids in `proposed`
  int new_right = -1;

  double log_proposal_ratio = 0.0;
  double log_prior_ratio = 0.0;

  // observation index lists for the nodes whose data assignment changes,
  // so the caller can form sufficient statistics without re-routing
  std::vector<int> obs_left, obs_right;            // birth
  std::vector<int> obs_merged;                     // death
  std::vector<int> affected_leaves;                // perturb: leaf ids below node
  std::vector<std::vector<int>> new_obs_by_leaf;   // perturb: parallel to affected_leaves
};

// Splittable variables at one leaf, recomputed from the data currently
// routed there: a cutpoint c of variable v is usable iff min < c <= max of
// the leaf's observed v values (both children nonempty).
struct LeafGrowInfo {
  std::vector<int> cand_vars;
  std::vector<std::pair<int, int>> cut_range;  // per cand var: [lo,hi) grid indices
  int total_cuts = 0;
  bool growable = false;
};

LeafGrowInfo leaf_grow_info(const MoveContext& ctx, std::span<const int> obs);

// Observation lists per leaf id (indexed by arena id).
std::vector<std::vector<int>> group_by_leaf(const Tree& tree,
                                            std::span<const int> leaf_of);

Proposal propose_birth(const Tree& tree, const MoveContext& ctx,
                       const std::vector<std::vector<int>>& obs_by_leaf, Rng& rng);
Proposal propose_death(const Tree& tree, const MoveContext& ctx,
                       const std::vector<std::vector<int>>& obs_by_leaf, Rng& rng);
Proposal propose_perturb(const Tree& tree, const MoveContext& ctx,
                         const std::vector<std::vector<int>>& obs_by_leaf, Rng& rng);

// Draw a move kind according to the renormalized weights, then draw that
// proposal. kind == none when no move is available.
Proposal propose_move(const Tree& tree, const MoveContext& ctx,
                      const std::vector<std::vector<int>>& obs_by_leaf, Rng& rng);

}  // namespace hbart
