#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "softspr/errors.hpp"
#include "softspr/newick.hpp"

// Brute-force references for desk-scale verification. Everything here works
// directly on TreeNode and stays independent of the forest/search machinery
// it is used to check.
namespace softspr::oracle {

// Number of binary resolutions: product over internal nodes of
// (2d-3)!! for a node with d children. Saturates at UINT64_MAX.
std::uint64_t resolution_count(const TreeNode& tree);

// All distinct binary resolutions, canonicalized. Throws BoundExceeded when
// resolution_count exceeds `bound`.
std::vector<TreeNode> enumerate_resolutions(const TreeNode& tree,
                                            std::uint64_t bound = 10000);

// All rooted multifurcating trees (no degree-2 nodes) on the given labels.
std::vector<TreeNode> all_multifurcating_trees(
    const std::vector<std::string>& labels);

// All rooted binary trees on the given labels.
std::vector<TreeNode> all_binary_trees(const std::vector<std::string>& labels);

// Exact soft SPR distance: minimum over binary resolutions R1 of t1 and R2
// of t2 of the smallest |E| such that R2 / E is an agreement forest of R1
// and R2, growing |E| from 0 upward. Throws BoundExceeded past the limits.
int ecut(const TreeNode& t1, const TreeNode& t2,
         std::uint64_t resolution_bound = 10000, std::size_t max_leaves = 8);

// e(T1, T2, T2 / {e}) where the cut edge e of t2 is identified by the leaf
// set below it. The forced cut is not counted in the returned value.
int ecut_given_first_cut(const TreeNode& t1, const TreeNode& t2,
                         const std::set<std::string>& cluster_below_edge,
                         std::uint64_t resolution_bound = 10000);

// BFS distance in the rooted SPR move graph; both trees must be binary with
// at most max_leaves leaves. Regrafting onto the root edge is allowed.
int spr_bfs(const TreeNode& t1, const TreeNode& t2, std::size_t max_leaves = 6);

// Definitional agreement-forest check by exhaustive enumeration: true iff
// the component list equals some R / E for a binary resolution R of each
// input tree (components written without the rho root). Desk scale only.
bool af_by_enumeration(const std::vector<TreeNode>& components,
                       const TreeNode& t1, const TreeNode& t2,
                       std::uint64_t resolution_bound = 10000);

}  // namespace softspr::oracle
