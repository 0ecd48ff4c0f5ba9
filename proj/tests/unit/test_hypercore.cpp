#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "hypertest/combinatorics.hpp"
#include "hypertest/common.hpp"
#include "hypertest/density.hpp"
#include "hypertest/hypercore.hpp"
#include "hypertest/rng.hpp"

using namespace hypertest;

TEST_CASE("splitmix64 test vector and derived seeds") {
  std::uint64_t state = 0;
  CHECK(splitmix64_next(state) == 0xE220A8397B1DCDAFULL);
  CHECK(mix_seed(7, 3) == mix_seed(7, 3));
  CHECK(mix_seed(7, 3) != mix_seed(7, 4));
  CHECK(mix_seed(7, 3) != mix_seed(8, 3));
}

TEST_CASE("colex rank enumerates subsets in order") {
  for (int n = 1; n <= 7; ++n)
    for (int k = 1; k <= n; ++k) {
      SubsetTable t(n, k);
      REQUIRE(t.size() == binomial(n, k));
      for (std::size_t i = 0; i < t.size(); ++i) CHECK(colex_rank(t[i]) == i);
    }
  CHECK(binomial(10, 3) == 120);
  CHECK(falling(6, 3) == 120);
}

TEST_CASE("construction and preconditions") {
  const ColoredHypergraph k3(3, 2, 2, {1, 1, 1});
  CHECK(std::all_of(k3.colors().begin(), k3.colors().end(), [](Color c) { return c == 1; }));
  const ColoredHypergraph h(4, 3, 2, {1, 2, 2, 1});
  CHECK(std::count(h.colors().begin(), h.colors().end(), Color{1}) == 2);
  CHECK_THROWS_AS(ColoredHypergraph(2, 3, 2, {1}), Error);
  CHECK_THROWS_AS(ColoredHypergraph(3, 2, 2, {1, 3, 1}), Error);
  CHECK_THROWS_AS(ColoredHypergraph(3, 2, 2, {1, 0, 1}), Error);
  CHECK_NOTHROW(SampledColoredGraph(3, 2, 2, {1, 0, 1}));
}

TEST_CASE("pairing convention and discoloring") {
  const ColoredHypergraph g1(2, 2, 2, {1});
  CHECK(discolor(ColoredHypergraph(2, 2, 2, {2}), 2).color(0) == 1);
  CHECK(discolor(ColoredHypergraph(2, 2, 2, {1}), 2).color(0) == 1);
  for (Color c = 1; c <= 4; ++c) CHECK(discolor(ColoredHypergraph(2, 2, 4, {c}), 2).color(0) == (c <= 2 ? 1 : 2));
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 4; ++b) {
      CHECK(base_color(pair_color(a, b, 4), 4) == a);
      CHECK(sub_color(pair_color(a, b, 4), 4) == b);
    }
  // Every 2-coloring of a fixed 4-vertex graph discolors back to it.
  const ColoredHypergraph g = random_simple_graph(4, 2, 0.5, 11);
  std::set<std::vector<Color>> seen;
  const auto count = enumerate_colorings(g, 2, [&](const ColoredHypergraph& c) {
    CHECK(discolor(c, 2) == g);
    seen.insert(c.colors());
  });
  CHECK(count == 64);
  CHECK(seen.size() == 64);
}

TEST_CASE("coloring counts") {
  auto count = [](const ColoredHypergraph& g, int k) {
    return enumerate_colorings(g, k, [](const ColoredHypergraph&) {});
  };
  CHECK(count(complete_graph(2), 2) == 2);
  CHECK(count(complete_graph(3), 2) == 8);
  CHECK(count(complete_graph(4, 3), 3) == 81);
  ScopedBudget small(10);
  CHECK_THROWS_AS(count(complete_graph(4), 2), BudgetExceeded);
}

TEST_CASE("sampling and induced subgraphs") {
  const ColoredHypergraph g = random_hypergraph(7, 3, 3, 5);
  const auto full = sample_subgraph(g, 7, 1, SampleLabeling::sorted);
  CHECK(full.to_hypergraph() == g);
  const auto one = sample_subgraph(complete_graph(6), 2, 9);
  CHECK(one.edge_count() == 1);
  CHECK(one.color(0) == 1);
  // Induced colors agree with the host on the chosen vertices.
  const std::vector<int> verts{5, 1, 3, 0};
  const ColoredHypergraph s = induced(g, verts);
  SubsetTable e(4, 3);
  for (std::size_t i = 0; i < e.size(); ++i) {
    std::vector<int> orig;
    for (int x : e[i]) orig.push_back(verts[x]);
    CHECK(s.color(i) == g.color_of_unsorted(orig));
  }
}

TEST_CASE("relabeling preserves color counts") {
  const ColoredHypergraph g = random_hypergraph(6, 2, 3, 4);
  Rng rng(3);
  const auto perm = rng.ordered_sample(6, 6);
  const ColoredHypergraph h = relabel(g, perm);
  for (Color c = 1; c <= 3; ++c)
    CHECK(std::count(g.colors().begin(), g.colors().end(), c) == std::count(h.colors().begin(), h.colors().end(), c));
  SubsetTable e(6, 2);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const int img[2] = {perm[e[i][0]], perm[e[i][1]]};
    CHECK(h.color_of_unsorted(img) == g.color(i));
  }
}

TEST_CASE("C5 sample frequencies match the exact distribution") {
  const ColoredHypergraph c5 = cycle_graph(5);
  const SampleDistribution exact = sample_distribution(c5, 3);
  const int trials = 100000;
  std::map<std::size_t, int> hits;
  for (int i = 0; i < trials; ++i) ++hits[exact.encode(sample_subgraph(c5, 3, mix_seed(77, i)))];
  for (std::size_t idx = 0; idx < exact.support_size(); ++idx) {
    const double p = exact.prob(idx);
    const double sd = std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs(hits[idx] / double(trials) - p) <= 3 * sd + 1e-12);
  }
}

TEST_CASE("budget from the environment default") {
  CHECK(enumeration_budget() > 0);
  {
    ScopedBudget b(5);
    CHECK(enumeration_budget() == 5);
    CHECK_THROWS_AS(require_budget(6, "x"), BudgetExceeded);
  }
  CHECK(parse_mode("exact") == Mode::exact);
  CHECK_THROWS_AS(parse_mode("fast"), Error);
}

TEST_CASE("floating binomial is exact on small integers") {
  for (int n = 0; n <= 40; ++n)
    for (int k = 0; k <= n; ++k) CHECK(binomial_d(n, k) == static_cast<double>(binomial(n, k)));
  CHECK(binomial_d(3, 5) == 0.0);
  CHECK(binomial_d(200, 100) == doctest::Approx(9.054851465610328e58));
}
