#include <random>

#include "doctest.h"
#include "softspr/newick.hpp"

using namespace softspr;

TEST_CASE("parse basic trees") {
  TreeNode t = parse_newick("((1,2),3);");
  REQUIRE(t.children.size() == 2);
  CHECK(write_newick(t) == "((1,2),3);");

  TreeNode star = parse_newick("(1,2,3);");
  CHECK(star.children.size() == 3);
  CHECK(write_newick(star) == "(1,2,3);");

  CHECK(write_newick(parse_newick("a;")) == "a;");
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_newick("((1,2);"), ParseError);   // unbalanced
  CHECK_THROWS_AS(parse_newick("(1,1);"), ParseError);    // duplicate label
  CHECK_THROWS_AS(parse_newick("(,2);"), ParseError);     // empty leaf label
  CHECK_THROWS_AS(parse_newick("(1,2); x"), ParseError);  // trailing garbage
  CHECK_THROWS_AS(parse_newick("(1,2)"), ParseError);     // missing ';'
  CHECK_THROWS_AS(parse_newick(""), ParseError);
  CHECK_THROWS_AS(parse_newick(")(;"), ParseError);
}

TEST_CASE("single-child nodes: contracted unless strict") {
  CHECK(write_newick(parse_newick("(a);")) == "a;");
  CHECK(write_newick(parse_newick("((a,b));")) == "(a,b);");
  CHECK(write_newick(parse_newick("((a),b);")) == "(a,b);");
  CHECK_THROWS_AS(parse_newick("((a),b);", /*strict=*/true), ParseError);
}

TEST_CASE("internal labels and branch lengths are dropped") {
  TreeNode t = parse_newick("((1:0.5,2:1e-3)inner:2.0,3:4)root;");
  CHECK(write_newick(t) == "((1,2),3);");
}

TEST_CASE("canonical ordering by minimum leaf label") {
  CHECK(write_newick(parse_newick("(3,(2,1));")) == "((1,2),3);");
  CHECK(write_newick(parse_newick("((c,b),(d,a));")) == "((a,d),(b,c));");
}

TEST_CASE("leaf_set") {
  CHECK(leaf_set(parse_newick("((1,2),3);")) ==
        std::set<std::string>{"1", "2", "3"});
  CHECK(leaf_set(parse_newick("(a);")) == std::set<std::string>{"a"});
}

TEST_CASE("write is injective on distinct topologies") {
  auto a = parse_newick("((1,2),(3,4));");
  auto b = parse_newick("(((1,2),3),4);");
  auto c = parse_newick("(1,2,3,4);");
  CHECK(write_newick(a) != write_newick(b));
  CHECK(write_newick(b) != write_newick(c));
  CHECK(write_newick(a) != write_newick(c));
}

namespace {

TreeNode random_labelled_tree(std::mt19937_64& rng, int n_leaves) {
  std::vector<std::string> labels;
  for (int i = 0; i < n_leaves; ++i)
    labels.push_back("L" + std::to_string(i));
  std::shuffle(labels.begin(), labels.end(), rng);
  // random recursive partition into 2..4 blocks
  auto build = [&](auto&& self, std::vector<std::string> labs) -> TreeNode {
    if (labs.size() == 1)
      return TreeNode{labs[0], {}};
    std::uniform_int_distribution<int> nkids(
        2, static_cast<int>(std::min<std::size_t>(4, labs.size())));
    int k = nkids(rng);
    std::vector<std::vector<std::string>> blocks(k);
    for (int i = 0; i < k; ++i)
      blocks[i].push_back(labs[i]);
    for (std::size_t i = k; i < labs.size(); ++i)
      blocks[std::uniform_int_distribution<int>(0, k - 1)(rng)].push_back(
          labs[i]);
    TreeNode node;
    for (auto& b : blocks)
      node.children.push_back(self(self, std::move(b)));
    return node;
  };
  return build(build, labels);
}

}  // namespace

TEST_CASE("fuzz: parse(write(t)) is identity, malformed input only throws") {
  std::mt19937_64 rng(20240809);
  for (int iter = 0; iter < 2000; ++iter) {
    TreeNode t = random_labelled_tree(
        rng, std::uniform_int_distribution<int>(1, 12)(rng));
    std::string s = write_newick(t);
    TreeNode back = parse_newick(s);
    CHECK(write_newick(back) == s);

    // mutate the string; parsing must either succeed or throw ParseError
    std::string bad = s;
    int edits = std::uniform_int_distribution<int>(1, 3)(rng);
    const char junk[] = "();,abc123:.|-%$ \t";
    for (int e = 0; e < edits && !bad.empty(); ++e) {
      std::size_t pos =
          std::uniform_int_distribution<std::size_t>(0, bad.size() - 1)(rng);
      bad[pos] = junk[std::uniform_int_distribution<std::size_t>(
          0, sizeof(junk) - 2)(rng)];
    }
    try {
      (void)parse_newick(bad);
    } catch (const ParseError&) {
    }
  }
}
