#include "softspr/newick.hpp"

#include <algorithm>
#include <cctype>

namespace softspr {

namespace {

bool is_label_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '|' || c == '-';
}

class Parser {
 public:
  Parser(const std::string& text, bool strict) : text_(text), strict_(strict) {}

  TreeNode run() {
    skip_ws();
    TreeNode root = subtree(0);
    skip_ws();
    expect(';');
    skip_ws();
    if (pos_ != text_.size())
      fail("trailing garbage after ';'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("newick: " + what + " at position " +
                     std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string label() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_label_char(text_[pos_]))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void skip_branch_length() {
    if (peek() != ':')
      return;
    ++pos_;
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.' || text_[pos_] == '-' || text_[pos_] == '+' ||
            text_[pos_] == 'e' || text_[pos_] == 'E'))
      ++pos_;
    if (pos_ == start)
      fail("empty branch length");
  }

  TreeNode subtree(int depth) {
    skip_ws();
    if (depth > 100000)
      fail("nesting too deep");
    if (peek() == '(') {
      ++pos_;
      TreeNode node;
      node.children.push_back(subtree(depth + 1));
      skip_ws();
      while (peek() == ',') {
        ++pos_;
        node.children.push_back(subtree(depth + 1));
        skip_ws();
      }
      expect(')');
      label();  // internal label, dropped
      skip_branch_length();
      if (node.children.size() == 1) {
        if (strict_)
          fail("single-child internal node (strict mode)");
        return std::move(node.children.front());
      }
      return node;
    }
    std::string name = label();
    if (name.empty())
      fail("empty leaf label");
    skip_branch_length();
    TreeNode leaf;
    leaf.label = std::move(name);
    return leaf;
  }

  const std::string& text_;
  bool strict_;
  std::size_t pos_ = 0;
};

void collect_leaves(const TreeNode& t, std::set<std::string>& out) {
  if (t.is_leaf()) {
    if (!out.insert(t.label).second)
      throw ParseError("newick: duplicate leaf label '" + t.label + "'");
    return;
  }
  for (const TreeNode& c : t.children)
    collect_leaves(c, out);
}

const std::string& min_leaf(const TreeNode& t) {
  if (t.is_leaf())
    return t.label;
  const std::string* best = &min_leaf(t.children.front());
  for (std::size_t i = 1; i < t.children.size(); ++i) {
    const std::string& m = min_leaf(t.children[i]);
    if (m < *best)
      best = &m;
  }
  return *best;
}

void append_canonical(const TreeNode& t, std::string& out) {
  if (t.is_leaf()) {
    out += t.label;
    return;
  }
  out += '(';
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i)
      out += ',';
    append_canonical(t.children[i], out);
  }
  out += ')';
}

}  // namespace

TreeNode parse_newick(const std::string& text, bool strict) {
  TreeNode root = Parser(text, strict).run();
  std::set<std::string> seen;
  collect_leaves(root, seen);  // throws on duplicates
  return root;
}

void canonicalize(TreeNode& tree) {
  for (TreeNode& c : tree.children)
    canonicalize(c);
  std::stable_sort(tree.children.begin(), tree.children.end(),
                   [](const TreeNode& a, const TreeNode& b) {
                     return min_leaf(a) < min_leaf(b);
                   });
}

std::string write_newick(const TreeNode& tree) {
  TreeNode copy = tree;
  canonicalize(copy);
  std::string out;
  append_canonical(copy, out);
  out += ';';
  return out;
}

std::set<std::string> leaf_set(const TreeNode& tree) {
  std::set<std::string> out;
  collect_leaves(tree, out);
  return out;
}

std::size_t leaf_count(const TreeNode& tree) {
  if (tree.is_leaf())
    return 1;
  std::size_t n = 0;
  for (const TreeNode& c : tree.children)
    n += leaf_count(c);
  return n;
}

bool is_binary(const TreeNode& tree) {
  if (tree.is_leaf())
    return true;
  if (tree.children.size() != 2)
    return false;
  return is_binary(tree.children[0]) && is_binary(tree.children[1]);
}

bool structurally_equal(const TreeNode& a, const TreeNode& b) {
  return write_newick(a) == write_newick(b);
}

}  // namespace softspr
