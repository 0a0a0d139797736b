#include <catch2/catch_amalgamated.hpp>

#include <dtrn/graph.hpp>
#include <dtrn/presets.hpp>

using namespace dtrn;

namespace {

// two independent sources feeding one shared target
NetworkSpec shared_head_network() {
  auto sp = make_spec(3);
  sp.a = make_rational(1, 4);
  sp.K = {{Rational(0), Rational(0), make_rational(1, 2)},
          {Rational(0), Rational(0), make_rational(1, 2)},
          {Rational(1), Rational(1), Rational(0)}};
  sp.T = sp.K;  // any in-range values; canonicalize fixes absent arrows
  sp.s = {{0, 0, 1}, {0, 0, -1}, {1, -1, 0}};
  return canonicalize_spec(sp);
}

}  // namespace

TEST_CASE("arrow structure follows positive weights") {
  auto g = underlying_network(p53_core());
  CHECK(g.arrow(0, 1));
  CHECK(g.arrow(1, 0));
  CHECK(g.arrow(0, 2));
  CHECK(g.arrow(0, 3));
  CHECK(g.arrow(2, 3));
  CHECK(g.arrow(3, 2));
  CHECK_FALSE(g.arrow(1, 2));
  CHECK_FALSE(g.arrow(2, 0));
  CHECK(g.in[3] == std::vector<int>{0, 2});
  CHECK(g.out[0] == std::vector<int>{1, 2, 3});
}

TEST_CASE("head independence rejects arrows into the set and shared heads") {
  auto g = underlying_network(p53_core());
  CHECK(head_independent(g, {0}));
  CHECK_FALSE(head_independent(g, {0, 2}));  // arrow 0 -> 2 lands inside

  auto h = underlying_network(shared_head_network());
  CHECK(head_independent(h, {0}));
  CHECK(head_independent(h, {1}));
  CHECK_FALSE(head_independent(h, {0, 1}));  // both feed vertex 2
}

TEST_CASE("isolated loop ends have exactly one neighbor") {
  auto loops = find_two_loops(underlying_network(p53_core()));
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].driver == 0);
  CHECK(loops[0].end == 1);

  auto pair_loops = find_two_loops(underlying_network(negative_2_circuit()));
  CHECK(pair_loops.size() == 2);  // both orientations qualify

  CHECK(find_two_loops(underlying_network(repressilator())).empty());
}

TEST_CASE("reduction on a single loop removes one coordinate") {
  auto red = certify_degree_reduction(underlying_network(negative_2_circuit()));
  CHECK(red.loops.size() == 1);
  CHECK(red.U.size() == 1);
  CHECK(red.W.size() == 1);
  CHECK(red.q == 1);
  CHECK(red.maximal);
}

TEST_CASE("reduction across disjoint pairs removes one driver per pair") {
  auto red = certify_degree_reduction(underlying_network(disjoint_negative_2_circuits(3)));
  CHECK(red.loops.size() == 3);
  CHECK(red.q == 3);
  CHECK(red.maximal);
  std::vector<char> seen(6, 0);
  for (const auto& l : red.loops) {
    seen[static_cast<std::size_t>(l.driver)] += 1;
    seen[static_cast<std::size_t>(l.end)] += 1;
  }
  for (char c : seen) CHECK(c == 1);  // vertex-disjoint cover
}

TEST_CASE("reduction keeps three coordinates of the four-node core") {
  auto red = certify_degree_reduction(underlying_network(p53_core()));
  CHECK(red.U == std::vector<int>{0});
  CHECK(red.W == std::vector<int>{1, 2, 3});
  CHECK(red.q == 3);
}

TEST_CASE("no reduction without isolated loop ends") {
  auto red = certify_degree_reduction(underlying_network(repressilator()));
  CHECK(red.loops.empty());
  CHECK(red.q == 3);  // nothing removed
}

TEST_CASE("condensation separates the feedforward core") {
  auto g = underlying_network(p53_core());
  auto c = condensation(g);
  REQUIRE(c.members.size() == 2);
  CHECK(c.comp[0] == c.comp[1]);
  CHECK(c.comp[2] == c.comp[3]);
  CHECK(c.comp[0] != c.comp[2]);
  int upstream = c.comp[0], downstream = c.comp[2];
  CHECK(c.edges[static_cast<std::size_t>(upstream)] == std::vector<int>{downstream});
  CHECK(c.edges[static_cast<std::size_t>(downstream)].empty());
}

TEST_CASE("strongly connected networks admit no proper split") {
  CHECK(base_bundle_splits(underlying_network(repressilator())).empty());
  CHECK(base_bundle_splits(underlying_network(self_inhibitor())).empty());
}

TEST_CASE("the four-node core splits into its feedback pair and its target pair") {
  auto splits = base_bundle_splits(underlying_network(p53_core()));
  REQUIRE(splits.size() == 1);
  CHECK(splits[0].base == std::vector<int>{0, 1});
  CHECK(splits[0].bundle == std::vector<int>{2, 3});
}

TEST_CASE("independent components split in every component combination") {
  auto splits = base_bundle_splits(underlying_network(disjoint_negative_2_circuits(3)));
  CHECK(splits.size() == 6);  // proper nonempty unions of three components
  for (const auto& s : splits) {
    CHECK_FALSE(s.base.empty());
    CHECK_FALSE(s.bundle.empty());
    CHECK(s.base.size() + s.bundle.size() == 6);
  }
}
