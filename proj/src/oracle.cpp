#include "softspr/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <unordered_map>

namespace softspr::oracle {

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0)
    return 0;
  if (a > UINT64_MAX / b)
    return UINT64_MAX;
  return a * b;
}

std::uint64_t double_factorial_odd(std::uint64_t d) {
  // (2d-3)!! = 1*3*5*...*(2d-3), the number of rooted binary shapes on d items
  std::uint64_t r = 1;
  for (std::uint64_t f = 3; f + 0 <= 2 * d - 3 && d >= 2; f += 2)
    r = sat_mul(r, f);
  return r;
}

// ---------------------------------------------------------------------------
// Flat rooted tree with an explicit rho root at index 0.

struct RTree {
  std::vector<int> parent;                // parent[0] = -1
  std::vector<std::vector<int>> kids;
  std::vector<std::string> label;         // leaf labels, "" on internal nodes
  std::vector<int> depth;
  std::vector<std::uint32_t> below;       // leaf-index mask of the subtree
  std::map<std::string, int> leaf_index;  // label -> bit position
  std::map<std::string, int> leaf_node;   // label -> node id

  int n() const { return static_cast<int>(parent.size()); }
};

int add_flat(RTree& R, const TreeNode& t, int parent) {
  int id = R.n();
  R.parent.push_back(parent);
  R.kids.emplace_back();
  R.label.push_back(t.label);
  R.kids[parent].push_back(id);
  for (const TreeNode& c : t.children)
    add_flat(R, c, id);
  return id;
}

RTree flatten_with_rho(const TreeNode& t) {
  RTree R;
  R.parent.push_back(-1);
  R.kids.emplace_back();
  R.label.push_back("");
  add_flat(R, t, 0);
  // leaf indices in sorted label order, so masks are comparable across trees
  for (int v = 0; v < R.n(); ++v)
    if (!R.label[v].empty())
      R.leaf_node[R.label[v]] = v;
  int bit = 0;
  for (auto& [lab, node] : R.leaf_node)
    R.leaf_index[lab] = bit++;
  R.depth.assign(R.n(), 0);
  R.below.assign(R.n(), 0);
  for (int v = 1; v < R.n(); ++v)
    R.depth[v] = R.depth[R.parent[v]] + 1;
  for (int v = R.n() - 1; v >= 0; --v) {
    if (!R.label[v].empty())
      R.below[v] |= 1u << R.leaf_index.at(R.label[v]);
    if (v)
      R.below[R.parent[v]] |= R.below[v];
  }
  return R;
}

int lca(const RTree& R, int a, int b) {
  while (a != b) {
    if (R.depth[a] < R.depth[b])
      std::swap(a, b);
    a = R.parent[a];
  }
  return a;
}

enum TripleKind { kAB_C, kAC_B, kBC_A, kFan };

TripleKind triple_kind(const RTree& R, int a, int b, int c) {
  int ab = lca(R, a, b), ac = lca(R, a, c), bc = lca(R, b, c);
  int dab = R.depth[ab], dac = R.depth[ac], dbc = R.depth[bc];
  if (dab == dac && dac == dbc)
    return kFan;
  if (dab > dac && dab > dbc)
    return kAB_C;
  if (dac > dab && dac > dbc)
    return kAC_B;
  return kBC_A;
}

// ---------------------------------------------------------------------------
// Cutting and yielding

// Empty sentinel: unlabelled node with no children.
bool is_empty_node(const TreeNode& t) { return t.label.empty() && t.children.empty(); }

TreeNode build_component(const RTree& R, int v, std::uint32_t cuts) {
  if (!R.label[v].empty())
    return TreeNode{R.label[v], {}};
  std::vector<TreeNode> kept;
  for (int w : R.kids[v]) {
    if (cuts >> w & 1)
      continue;
    TreeNode sub = build_component(R, w, cuts);
    if (!is_empty_node(sub))
      kept.push_back(std::move(sub));
  }
  if (kept.empty())
    return TreeNode{};
  if (kept.size() == 1)
    return std::move(kept.front());
  TreeNode node;
  node.children = std::move(kept);
  return node;
}

struct YForest {
  std::vector<TreeNode> comps;  // canonicalized, rho stripped
  int rho_comp = -1;            // index of the component hanging below rho
  bool rho_bare = false;        // rho retained no labelled descendants
};

YForest yield(const RTree& R, std::uint32_t cuts) {
  YForest F;
  TreeNode top = build_component(R, 0, cuts);
  if (is_empty_node(top)) {
    F.rho_bare = true;
  } else {
    canonicalize(top);
    F.rho_comp = 0;
    F.comps.push_back(std::move(top));
  }
  for (int v = 1; v < R.n(); ++v) {
    if (!(cuts >> v & 1))
      continue;
    TreeNode comp = build_component(R, v, cuts);
    if (is_empty_node(comp))
      continue;
    canonicalize(comp);
    F.comps.push_back(std::move(comp));
  }
  return F;
}

std::string forest_key(const YForest& F) {
  std::vector<std::string> parts;
  parts.reserve(F.comps.size() + 1);
  for (std::size_t i = 0; i < F.comps.size(); ++i) {
    std::string s = write_newick(F.comps[i]);
    if (static_cast<int>(i) == F.rho_comp)
      s.insert(s.begin(), '!');
    parts.push_back(std::move(s));
  }
  if (F.rho_bare)
    parts.push_back("!");
  std::sort(parts.begin(), parts.end());
  std::string key;
  for (const std::string& p : parts) {
    key += p;
    key += '|';
  }
  return key;
}

std::string forest_key_sans_rho(const YForest& F) {
  std::vector<std::string> parts;
  for (const TreeNode& c : F.comps)
    parts.push_back(write_newick(c));
  std::sort(parts.begin(), parts.end());
  std::string key;
  for (const std::string& p : parts) {
    key += p;
    key += '|';
  }
  return key;
}

// ---------------------------------------------------------------------------
// The three agreement-forest conditions for a binary forest against a binary
// tree: per-component containment is trivial against a tree, so check that
// no two components overlap (edge-disjoint connecting paths) and that every
// component triple matches the tree's triple.

std::uint32_t leaf_mask(const RTree& R, const TreeNode& comp) {
  if (comp.is_leaf())
    return 1u << R.leaf_index.at(comp.label);
  std::uint32_t m = 0;
  for (const TreeNode& c : comp.children)
    m |= leaf_mask(R, c);
  return m;
}

bool triples_match(const RTree& R, const TreeNode& comp) {
  RTree C = flatten_with_rho(comp);
  std::vector<std::string> labs;
  for (auto& [lab, node] : C.leaf_node)
    labs.push_back(lab);
  for (std::size_t i = 0; i < labs.size(); ++i)
    for (std::size_t j = i + 1; j < labs.size(); ++j)
      for (std::size_t k = j + 1; k < labs.size(); ++k) {
        TripleKind tc = triple_kind(C, C.leaf_node.at(labs[i]),
                                    C.leaf_node.at(labs[j]),
                                    C.leaf_node.at(labs[k]));
        if (tc == kFan)
          continue;  // resolvable either way
        TripleKind tr = triple_kind(R, R.leaf_node.at(labs[i]),
                                    R.leaf_node.at(labs[j]),
                                    R.leaf_node.at(labs[k]));
        if (tr != kFan && tr != tc)
          return false;
      }
  return true;
}

bool forest_of(const YForest& F, const RTree& R1) {
  int m = static_cast<int>(F.comps.size());
  std::vector<std::uint32_t> masks(m);
  for (int i = 0; i < m; ++i)
    masks[i] = leaf_mask(R1, F.comps[i]);

  // overlap: each R1 edge may carry connecting paths of at most one component;
  // the rho component also claims the edges on the paths up to the root
  for (int v = 1; v < R1.n(); ++v) {
    std::uint32_t b = R1.below[v];
    int users = 0;
    for (int i = 0; i < m; ++i) {
      std::uint32_t in = masks[i] & b;
      bool used = in != 0 && (i == F.rho_comp ? true : in != masks[i]);
      users += used;
      if (users > 1)
        return false;
    }
  }

  for (const TreeNode& comp : F.comps)
    if (leaf_count(comp) >= 3 && !triples_match(R1, comp))
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Resolution enumeration

// All ways of inserting `item` above each node of `t` (including above the
// root), the standard generation of rooted binary shapes.
void insert_everywhere(const TreeNode& t, const TreeNode& item,
                       std::vector<TreeNode>& out) {
  {
    TreeNode above;
    above.children = {t, item};
    out.push_back(std::move(above));
  }
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    std::vector<TreeNode> sub;
    insert_everywhere(t.children[i], item, sub);
    for (TreeNode& s : sub) {
      TreeNode copy = t;
      copy.children[i] = std::move(s);
      out.push_back(std::move(copy));
    }
  }
}

// Shapes are generated over placeholder leaves, then the items substituted;
// inserting the items directly would also subdivide edges inside them.
void substitute_items(TreeNode& shape, const std::vector<TreeNode>& items) {
  if (shape.is_leaf()) {
    shape = items[std::stoul(shape.label.substr(1))];
    return;
  }
  for (TreeNode& c : shape.children)
    substitute_items(c, items);
}

std::vector<TreeNode> binary_shapes(const std::vector<TreeNode>& items) {
  std::vector<TreeNode> shapes = {TreeNode{"#0", {}}};
  for (std::size_t i = 1; i < items.size(); ++i) {
    std::vector<TreeNode> next;
    TreeNode placeholder{"#" + std::to_string(i), {}};
    for (const TreeNode& s : shapes)
      insert_everywhere(s, placeholder, next);
    shapes = std::move(next);
  }
  for (TreeNode& s : shapes)
    substitute_items(s, items);
  return shapes;
}

std::vector<TreeNode> resolutions_rec(const TreeNode& t) {
  if (t.is_leaf())
    return {t};
  std::vector<std::vector<TreeNode>> child_res;
  child_res.reserve(t.children.size());
  for (const TreeNode& c : t.children)
    child_res.push_back(resolutions_rec(c));
  // cartesian product of child resolutions, then all shapes over the picks
  std::vector<TreeNode> out;
  std::vector<std::size_t> pick(t.children.size(), 0);
  for (;;) {
    std::vector<TreeNode> items;
    items.reserve(pick.size());
    for (std::size_t i = 0; i < pick.size(); ++i)
      items.push_back(child_res[i][pick[i]]);
    for (TreeNode& s : binary_shapes(items))
      out.push_back(std::move(s));
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == child_res[i].size())
      pick[i++] = 0;
    if (i == pick.size())
      break;
  }
  return out;
}

std::vector<int> node_with_cluster(const RTree& R, std::uint32_t cluster) {
  std::vector<int> hits;
  for (int v = 1; v < R.n(); ++v)
    if (R.below[v] == cluster)
      hits.push_back(v);
  return hits;
}

// Iterates over all size-k subsets of [0, n).
template <typename F>
void for_each_combination(int n, int k, F&& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i)
    idx[i] = i;
  for (;;) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i)
      --i;
    if (i < 0)
      break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j)
      idx[j] = idx[j - 1] + 1;
  }
}

void require_equal_leaf_sets(const TreeNode& t1, const TreeNode& t2) {
  if (leaf_set(t1) != leaf_set(t2))
    throw LabelMismatch("input trees have different leaf label sets");
}

// Shared search core: minimum number of cuts over all resolutions of t2,
// with an optional forced first cut (identified by leaf cluster).
int ecut_core(const TreeNode& t1, const TreeNode& t2,
              const std::uint32_t* forced_cluster, std::uint64_t bound) {
  require_equal_leaf_sets(t1, t2);

  std::vector<RTree> r1s;
  for (const TreeNode& r : enumerate_resolutions(t1, bound))
    r1s.push_back(flatten_with_rho(r));
  std::vector<RTree> r2s;
  for (const TreeNode& r : enumerate_resolutions(t2, bound))
    r2s.push_back(flatten_with_rho(r));

  std::unordered_map<std::string, bool> memo;
  auto passes = [&](const YForest& F) {
    std::string key = forest_key(F);
    auto it = memo.find(key);
    if (it != memo.end())
      return it->second;
    bool ok = false;
    for (const RTree& R1 : r1s)
      if (forest_of(F, R1)) {
        ok = true;
        break;
      }
    memo.emplace(std::move(key), ok);
    return ok;
  };

  int max_edges = 0;
  for (const RTree& R2 : r2s)
    max_edges = std::max(max_edges, R2.n() - 1);

  for (int target = 0; target <= max_edges; ++target) {
    for (const RTree& R2 : r2s) {
      std::uint32_t base = 0;
      std::vector<int> free_edges;
      if (forced_cluster) {
        std::vector<int> hits = node_with_cluster(R2, *forced_cluster);
        assert(hits.size() == 1);  // clusters identify nodes uniquely
        base = 1u << hits[0];
      }
      for (int v = 1; v < R2.n(); ++v)
        if (!(base >> v & 1))
          free_edges.push_back(v);
      if (target > static_cast<int>(free_edges.size()))
        continue;
      bool found = false;
      for_each_combination(
          static_cast<int>(free_edges.size()), target,
          [&](const std::vector<int>& idx) {
            if (found)
              return;
            std::uint32_t cuts = base;
            for (int i : idx)
              cuts |= 1u << free_edges[i];
            if (passes(yield(R2, cuts)))
              found = true;
          });
      if (found)
        return target;
    }
  }
  // unreachable: cutting every leaf edge always yields an agreement forest
  assert(false);
  return max_edges;
}

}  // namespace

std::uint64_t resolution_count(const TreeNode& tree) {
  std::uint64_t n = 1;
  if (!tree.is_leaf())
    n = double_factorial_odd(tree.children.size());
  for (const TreeNode& c : tree.children)
    n = sat_mul(n, resolution_count(c));
  return n;
}

std::vector<TreeNode> enumerate_resolutions(const TreeNode& tree,
                                            std::uint64_t bound) {
  if (resolution_count(tree) > bound)
    throw BoundExceeded("resolution count exceeds bound");
  std::vector<TreeNode> out = resolutions_rec(tree);
  for (TreeNode& t : out)
    canonicalize(t);
  // the generator emits each shape exactly once; dedupe defensively anyway
  std::sort(out.begin(), out.end(), [](const TreeNode& a, const TreeNode& b) {
    return write_newick(a) < write_newick(b);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const TreeNode& a, const TreeNode& b) {
                          return write_newick(a) == write_newick(b);
                        }),
            out.end());
  return out;
}

std::vector<TreeNode> all_multifurcating_trees(
    const std::vector<std::string>& labels) {
  assert(!labels.empty() && labels.size() <= 16);
  std::map<std::uint32_t, std::vector<TreeNode>> memo;
  // trees over a label subset given as a bitmask
  auto rec = [&](auto&& self, std::uint32_t mask) -> const std::vector<TreeNode>& {
    auto it = memo.find(mask);
    if (it != memo.end())
      return it->second;
    std::vector<TreeNode> out;
    std::vector<int> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (mask >> i & 1)
        members.push_back(static_cast<int>(i));
    if (members.size() == 1) {
      out.push_back(TreeNode{labels[members[0]], {}});
      return memo.emplace(mask, std::move(out)).first->second;
    }
    // partitions into >= 2 blocks via restricted growth strings
    std::size_t n = members.size();
    std::vector<int> rgs(n, 0);
    auto emit = [&]() {
      int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
      if (blocks < 2)
        return;
      std::vector<std::uint32_t> block_mask(blocks, 0);
      for (std::size_t i = 0; i < n; ++i)
        block_mask[rgs[i]] |= 1u << members[i];
      // cartesian product of block subtrees
      std::vector<const std::vector<TreeNode>*> opts;
      for (int b = 0; b < blocks; ++b)
        opts.push_back(&self(self, block_mask[b]));
      std::vector<std::size_t> pick(blocks, 0);
      for (;;) {
        TreeNode node;
        for (int b = 0; b < blocks; ++b)
          node.children.push_back((*opts[b])[pick[b]]);
        out.push_back(std::move(node));
        int i = 0;
        while (i < blocks && ++pick[i] == opts[i]->size())
          pick[i++] = 0;
        if (i == blocks)
          break;
      }
    };
    auto gen = [&](auto&& g, std::size_t pos, int maxv) -> void {
      if (pos == n) {
        emit();
        return;
      }
      for (int v = 0; v <= maxv + 1; ++v) {
        rgs[pos] = v;
        g(g, pos + 1, std::max(maxv, v));
      }
    };
    gen(gen, 1, 0);  // rgs[0] = 0 fixed
    for (TreeNode& t : out)
      canonicalize(t);
    return memo.emplace(mask, std::move(out)).first->second;
  };
  std::uint32_t full = (labels.size() == 32) ? ~0u : ((1u << labels.size()) - 1);
  return rec(rec, full);
}

std::vector<TreeNode> all_binary_trees(const std::vector<std::string>& labels) {
  TreeNode star;
  if (labels.size() == 1)
    return {TreeNode{labels[0], {}}};
  for (const std::string& l : labels)
    star.children.push_back(TreeNode{l, {}});
  return enumerate_resolutions(star, 1u << 20);
}

int ecut(const TreeNode& t1, const TreeNode& t2, std::uint64_t resolution_bound,
         std::size_t max_leaves) {
  if (leaf_count(t1) > max_leaves)
    throw BoundExceeded("ecut oracle limited to " + std::to_string(max_leaves) +
                        " leaves");
  return ecut_core(t1, t2, nullptr, resolution_bound);
}

int ecut_given_first_cut(const TreeNode& t1, const TreeNode& t2,
                         const std::set<std::string>& cluster_below_edge,
                         std::uint64_t resolution_bound) {
  if (leaf_count(t1) > 8)
    throw BoundExceeded("ecut oracle limited to 8 leaves");
  RTree R = flatten_with_rho(t2);
  std::uint32_t cluster = 0;
  for (const std::string& lab : cluster_below_edge) {
    auto it = R.leaf_index.find(lab);
    if (it == R.leaf_index.end())
      throw std::invalid_argument("cluster label not in t2: " + lab);
    cluster |= 1u << it->second;
  }
  if (node_with_cluster(R, cluster).empty())
    throw std::invalid_argument("cluster does not identify an edge of t2");
  return ecut_core(t1, t2, &cluster, resolution_bound);
}

int spr_bfs(const TreeNode& t1, const TreeNode& t2, std::size_t max_leaves) {
  if (!is_binary(t1) || !is_binary(t2))
    throw std::invalid_argument("spr_bfs requires binary trees");
  require_equal_leaf_sets(t1, t2);
  if (leaf_count(t1) > max_leaves)
    throw BoundExceeded("spr_bfs limited to " + std::to_string(max_leaves) +
                        " leaves");

  auto neighbors = [](const TreeNode& t) {
    std::vector<TreeNode> out;
    RTree R = flatten_with_rho(t);
    for (int x = 1; x < R.n(); ++x) {
      if (R.parent[x] == 0)
        continue;  // detaching everything leaves no regraft target
      YForest F = yield(R, 1u << x);
      assert(F.comps.size() == 2 && F.rho_comp >= 0);
      const TreeNode& pruned = F.comps[F.rho_comp == 0 ? 1 : 0];
      const TreeNode& rest = F.comps[F.rho_comp];
      insert_everywhere(rest, pruned, out);
    }
    return out;
  };

  std::string start = write_newick(t1), goal = write_newick(t2);
  if (start == goal)
    return 0;
  std::unordered_map<std::string, int> dist;
  dist[start] = 0;
  std::queue<TreeNode> q;
  q.push(t1);
  while (!q.empty()) {
    TreeNode cur = std::move(q.front());
    q.pop();
    int d = dist.at(write_newick(cur));
    for (TreeNode& nb : neighbors(cur)) {
      std::string key = write_newick(nb);
      if (dist.count(key))
        continue;
      if (key == goal)
        return d + 1;
      dist[key] = d + 1;
      q.push(std::move(nb));
    }
  }
  assert(false);  // SPR graph on a fixed leaf set is connected
  return -1;
}

bool af_by_enumeration(const std::vector<TreeNode>& components,
                       const TreeNode& t1, const TreeNode& t2,
                       std::uint64_t resolution_bound) {
  // components must partition the label set
  std::set<std::string> seen;
  for (const TreeNode& c : components)
    for (const std::string& lab : leaf_set(c))
      if (!seen.insert(lab).second)
        return false;
  if (seen != leaf_set(t1) || seen != leaf_set(t2))
    return false;

  std::vector<std::string> parts;
  for (const TreeNode& c : components)
    parts.push_back(write_newick(c));
  std::sort(parts.begin(), parts.end());
  std::string target;
  for (const std::string& p : parts) {
    target += p;
    target += '|';
  }

  for (const TreeNode* t : {&t1, &t2}) {
    bool found = false;
    for (const TreeNode& res : enumerate_resolutions(*t, resolution_bound)) {
      RTree R = flatten_with_rho(res);
      std::uint32_t edges = R.n() - 1;
      for (std::uint32_t mask = 0; mask < (1u << edges) && !found; ++mask) {
        YForest F = yield(R, mask << 1);
        if (forest_key_sans_rho(F) == target)
          found = true;
      }
      if (found)
        break;
    }
    if (!found)
      return false;
  }
  return true;
}

}  // namespace softspr::oracle
