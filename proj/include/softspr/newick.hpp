#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace softspr {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A rooted tree with ordered children. Leaves carry labels, internal nodes
// do not (the parser drops internal labels and branch lengths). The rho
// root used internally by the MAF machinery is never part of this type.
struct TreeNode {
  std::string label;  // nonempty iff leaf
  std::vector<TreeNode> children;

  bool is_leaf() const { return children.empty(); }
};

// Parses the Newick subset grammar
//   tree := subtree ';'
//   subtree := leaf | '(' subtree (',' subtree)+ ')' [label]
// with labels [A-Za-z0-9_.|-]+ and optional ':length' tokens skipped.
// In non-strict mode single-child internal nodes are contracted; in strict
// mode they are a parse error.
TreeNode parse_newick(const std::string& text, bool strict = false);

// Canonical serialization: children ordered by ascending minimum leaf label
// (lexicographic), terminated by ';'. Representation independent: two trees
// serialize equally iff they have the same topology.
std::string write_newick(const TreeNode& tree);

// Sorts children recursively into canonical order, in place.
void canonicalize(TreeNode& tree);

std::set<std::string> leaf_set(const TreeNode& tree);

std::size_t leaf_count(const TreeNode& tree);

bool is_binary(const TreeNode& tree);

bool structurally_equal(const TreeNode& a, const TreeNode& b);

}  // namespace softspr
