#include "hbart/tree.hpp"

#include <istream>
#include <sstream>

#include "hbart/errors.hpp"
#include "hbart/io_util.hpp"

namespace hbart {

Tree::Tree(double root_param) {
  nodes_.push_back(TreeNode{});
  nodes_[0].param = root_param;
  root_ = 0;
}

int Tree::alloc() {
  if (!free_.empty()) {
    const int id = free_.back();
    free_.pop_back();
    nodes_[static_cast<std::size_t>(id)] = TreeNode{};
    return id;
  }
  nodes_.push_back(TreeNode{});
  return static_cast<int>(nodes_.size()) - 1;
}

int Tree::depth(int id) const {
  int d = 0;
  while (node(id).parent >= 0) {
    id = node(id).parent;
    ++d;
  }
  return d;
}

namespace {
template <class F>
void preorder_walk(const Tree& t, int id, F&& f) {
  f(id);
  if (!t.is_leaf(id)) {
    preorder_walk(t, t.node(id).left, f);
    preorder_walk(t, t.node(id).right, f);
  }
}
}  // namespace

int Tree::num_nodes() const {
  int n = 0;
  preorder_walk(*this, root_, [&](int) { ++n; });
  return n;
}

std::vector<int> Tree::leaves() const {
  std::vector<int> out;
  preorder_walk(*this, root_, [&](int id) {
    if (is_leaf(id)) out.push_back(id);
  });
  return out;
}

std::vector<int> Tree::internals() const {
  std::vector<int> out;
  preorder_walk(*this, root_, [&](int id) {
    if (!is_leaf(id)) out.push_back(id);
  });
  return out;
}

std::vector<int> Tree::nogs() const {
  std::vector<int> out;
  preorder_walk(*this, root_, [&](int id) {
    if (!is_leaf(id) && is_leaf(node(id).left) && is_leaf(node(id).right))
      out.push_back(id);
  });
  return out;
}

std::vector<int> Tree::leaves_below(int id) const {
  std::vector<int> out;
  preorder_walk(*this, id, [&](int k) {
    if (is_leaf(k)) out.push_back(k);
  });
  return out;
}

int Tree::route_from(int start, std::span<const double> xrow,
                     const CutpointGrid& grid) const {
  int id = start;
  while (!is_leaf(id)) {
    const TreeNode& nd = node(id);
    id = xrow[static_cast<std::size_t>(nd.var)] <
                 grid.value(static_cast<std::size_t>(nd.var),
                            static_cast<std::size_t>(nd.cut))
             ? nd.left
             : nd.right;
  }
  return id;
}

std::pair<int, int> Tree::birth(int leaf, int var, int cut, double left_param,
                                double right_param) {
  const int l = alloc();
  const int r = alloc();
  TreeNode& nd = nodes_[static_cast<std::size_t>(leaf)];
  nd.left = l;
  nd.right = r;
  nd.var = var;
  nd.cut = cut;
  nodes_[static_cast<std::size_t>(l)].parent = leaf;
  nodes_[static_cast<std::size_t>(l)].param = left_param;
  nodes_[static_cast<std::size_t>(r)].parent = leaf;
  nodes_[static_cast<std::size_t>(r)].param = right_param;
  return {l, r};
}

void Tree::death(int nog, double param) {
  TreeNode& nd = nodes_[static_cast<std::size_t>(nog)];
  free_.push_back(nd.left);
  free_.push_back(nd.right);
  nd.left = nd.right = -1;
  nd.var = nd.cut = -1;
  nd.param = param;
}

void Tree::set_rule(int id, int var, int cut) {
  TreeNode& nd = nodes_[static_cast<std::size_t>(id)];
  nd.var = var;
  nd.cut = cut;
}

std::string Tree::serialize() const {
  // renumber in pre-order so the text form is arena-independent
  std::vector<int> order;
  preorder_walk(*this, root_, [&](int id) { order.push_back(id); });
  std::vector<int> newid(nodes_.size(), -1);
  for (std::size_t k = 0; k < order.size(); ++k)
    newid[static_cast<std::size_t>(order[k])] = static_cast<int>(k);

  std::ostringstream out;
  for (int id : order) {
    const TreeNode& nd = node(id);
    out << newid[static_cast<std::size_t>(id)] << ' ';
    if (nd.parent < 0)
      out << "- ";
    else
      out << newid[static_cast<std::size_t>(nd.parent)] << ' ';
    if (nd.is_leaf()) {
      out << "L - - " << format_double(nd.param);
    } else {
      out << "I " << nd.var << ' ' << nd.cut << " -";
    }
    out << '\n';
  }
  return out.str();
}

Tree Tree::deserialize(std::istream& in, int n_nodes) {
  Tree t;
  t.nodes_.assign(static_cast<std::size_t>(n_nodes), TreeNode{});
  t.root_ = 0;
  std::string line;
  for (int k = 0; k < n_nodes; ++k) {
    if (!std::getline(in, line)) throw DataError("tree: unexpected end of input");
    std::istringstream ls(line);
    std::string ids, parents, kind, vars, cuts, params;
    if (!(ls >> ids >> parents >> kind >> vars >> cuts >> params))
      throw DataError("tree: malformed node line: " + line);
    const int id = std::stoi(ids);
    if (id < 0 || id >= n_nodes) throw DataError("tree: node id out of range: " + line);
    TreeNode& nd = t.nodes_[static_cast<std::size_t>(id)];
    nd.parent = (parents == "-") ? -1 : std::stoi(parents);
    if (kind == "L") {
      nd.param = std::stod(params);
    } else if (kind == "I") {
      nd.var = std::stoi(vars);
      nd.cut = std::stoi(cuts);
    } else {
      throw DataError("tree: bad node kind: " + line);
    }
    if (nd.parent >= 0) {
      TreeNode& p = t.nodes_[static_cast<std::size_t>(nd.parent)];
      if (p.left < 0)
        p.left = id;  // pre-order: left subtree is written first
      else if (p.right < 0)
        p.right = id;
      else
        throw DataError("tree: parent already has two children: " + line);
    } else if (id != 0) {
      throw DataError("tree: non-root node without parent: " + line);
    }
  }
  for (const TreeNode& nd : t.nodes_)
    if (nd.var >= 0 && (nd.left < 0 || nd.right < 0))
      throw DataError("tree: internal node missing a child");
  return t;
}

Tree Tree::deserialize_str(const std::string& text) {
  int n_nodes = 0;
  for (char c : text)
    if (c == '\n') ++n_nodes;
  if (!text.empty() && text.back() != '\n') ++n_nodes;
  std::istringstream in(text);
  return deserialize(in, n_nodes);
}

double log_tree_prior(const Tree& tree, const DepthPrior& prior) {
  double lp = 0.0;
  for (int id : tree.internals()) lp += std::log(prior.split_prob(tree.depth(id)));
  for (int id : tree.leaves()) lp += std::log1p(-prior.split_prob(tree.depth(id)));
  return lp;
}

double log_tree_rule_prior(const Tree& tree, const CutpointGrid& grid) {
  int nvars = 0;
  for (std::size_t v = 0; v < grid.num_vars(); ++v)
    if (grid.size(v) > 0) ++nvars;
  double lp = 0.0;
  for (int id : tree.internals()) {
    const int v = tree.node(id).var;
    lp -= std::log(static_cast<double>(nvars)) +
          std::log(static_cast<double>(grid.size(static_cast<std::size_t>(v))));
  }
  return lp;
}

}  // namespace hbart
