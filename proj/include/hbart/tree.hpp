#pragma once

#include <cmath>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hbart/data.hpp"

namespace hbart {

// Depth-penalizing split prior: a node at depth d spawns children with
// probability alpha*(1+d)^(-beta).
struct DepthPrior {
  double alpha = 0.95;
  double beta = 2.0;
  double split_prob(int depth) const {
    return alpha * std::pow(1.0 + static_cast<double>(depth), -beta);
  }
};

struct TreeNode {
  int parent = -1;
  int left = -1;   // -1 for leaves
  int right = -1;
  int var = -1;    // split variable (internal nodes)
  int cut = -1;    // index into the variable's cutpoint grid
  double param = 0.0;  // leaf parameter (mu for mean trees, s2 for variance trees)
  bool is_leaf() const { return left < 0; }
};

// Binary decision tree over an arena of nodes. Node ids are stable across
// births and deaths (freed slots are recycled), so callers may cache them.
// Routing rule: x goes left iff x[var] < cutpoint value.
class Tree {
 public:
  explicit Tree(double root_param = 0.0);

  int root() const { return root_; }
  const TreeNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  bool is_leaf(int id) const { return node(id).is_leaf(); }
  int arena_size() const { return static_cast<int>(nodes_.size()); }

  double param(int id) const { return node(id).param; }
  void set_param(int id, double p) { nodes_[static_cast<std::size_t>(id)].param = p; }

  int depth(int id) const;
  int num_nodes() const;      // live nodes
  std::vector<int> leaves() const;
  std::vector<int> internals() const;
  std::vector<int> nogs() const;  // internal nodes whose children are both leaves

  // ids of leaves in the subtree rooted at id
  std::vector<int> leaves_below(int id) const;

  int route(std::span<const double> xrow, const CutpointGrid& grid) const {
    return route_from(root_, xrow, grid);
  }
  int route_from(int start, std::span<const double> xrow, const CutpointGrid& grid) const;
  double evaluate(std::span<const double> xrow, const CutpointGrid& grid) const {
    return node(route(xrow, grid)).param;
  }

  // grow leaf into an internal node with rule (var,cut); returns (left,right)
  std::pair<int, int> birth(int leaf, int var, int cut, double left_param,
                            double right_param);
  // collapse a nog node back into a leaf
  void death(int nog, double param);
  void set_rule(int id, int var, int cut);

  // Line-oriented text form, one node per line in pre-order:
  //   node_id parent_id kind split_var cut_index leaf_param
  // kind is I or L; fields that do not apply are written as '-'.
  std::string serialize() const;
  static Tree deserialize(std::istream& in, int n_nodes);
  static Tree deserialize_str(const std::string& text);

 private:
  int alloc();
  std::vector<TreeNode> nodes_;
  std::vector<int> free_;
  int root_ = 0;
};

// Log prior probability of the tree STRUCTURE: sum of log split_prob over
// internal nodes plus log (1 - split_prob) over leaves.
double log_tree_prior(const Tree& tree, const DepthPrior& prior);

// Log prior probability of the split rules: each internal node draws its
// variable uniformly over variables with a nonempty grid and its cutpoint
// uniformly over that variable's full grid.
double log_tree_rule_prior(const Tree& tree, const CutpointGrid& grid);

}  // namespace hbart
