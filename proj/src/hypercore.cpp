#include "hypertest/hypercore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hypertest/common.hpp"
#include "hypertest/rng.hpp"

namespace hypertest {

EdgeColoring::EdgeColoring(int n, int r, int k, std::vector<Color> colors, bool iota_allowed)
    : n_(n), r_(r), k_(k), colors_(std::move(colors)) {
  if (r < 1) throw Error("uniformity r must be at least 1");
  if (k < 1) throw Error("palette size k must be at least 1");
  if (n < r) throw Error("need n >= r (n=" + std::to_string(n) + ", r=" + std::to_string(r) + ")");
  const std::uint64_t m = binomial(n, r);
  if (colors_.size() != m)
    throw Error("expected " + std::to_string(m) + " edge colors, got " + std::to_string(colors_.size()));
  for (Color c : colors_) {
    if (c == kIota && iota_allowed) continue;
    if (c < 1 || c > k) throw Error("edge color " + std::to_string(c) + " outside [1," + std::to_string(k) + "]");
  }
}

Color EdgeColoring::color_of_unsorted(std::span<const int> vertices) const {
  int buf[16];
  std::copy(vertices.begin(), vertices.end(), buf);
  std::sort(buf, buf + vertices.size());
  return colors_[colex_rank({buf, vertices.size()})];
}

bool EdgeColoring::has_iota() const { return std::find(colors_.begin(), colors_.end(), kIota) != colors_.end(); }

ColoredHypergraph SampledColoredGraph::to_hypergraph() const {
  if (has_iota()) throw Error("sample contains the diagonal color");
  return ColoredHypergraph(n_, r_, k_, colors_);
}

ColoredHypergraph make_hypergraph(int n, int r, int k, std::vector<Color> colors) {
  return ColoredHypergraph(n, r, k, std::move(colors));
}

ColoredHypergraph discolor(const ColoredHypergraph& g, int k) {
  if (k < 1 || g.k() % k != 0)
    throw Error("palette size " + std::to_string(g.k()) + " is not divisible by k=" + std::to_string(k));
  std::vector<Color> out(g.colors().size());
  std::transform(g.colors().begin(), g.colors().end(), out.begin(),
                 [k](Color c) { return static_cast<Color>(base_color(c, k)); });
  return ColoredHypergraph(g.n(), g.r(), g.k() / k, std::move(out));
}

std::uint64_t enumerate_colorings(const ColoredHypergraph& g, int k,
                                  const std::function<void(const ColoredHypergraph&)>& visit) {
  const std::size_t m = g.edge_count();
  require_budget(std::pow(static_cast<double>(k), static_cast<double>(m)), "enumerate_colorings");
  std::vector<int> beta(m, 1);
  std::vector<Color> colors(m);
  std::uint64_t count = 0;
  for (;;) {
    for (std::size_t e = 0; e < m; ++e) colors[e] = pair_color(g.color(e), beta[e], k);
    visit(ColoredHypergraph(g.n(), g.r(), g.k() * k, colors));
    ++count;
    std::size_t e = m;
    while (e > 0 && beta[e - 1] == k) beta[--e] = 1;
    if (e == 0) break;
    ++beta[e - 1];
  }
  return count;
}

ColoredHypergraph induced(const ColoredHypergraph& g, std::span<const int> vertices) {
  const int q = static_cast<int>(vertices.size());
  SubsetTable edges(q, g.r());
  std::vector<Color> colors(edges.size());
  std::vector<int> buf(g.r());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto s = edges[e];
    for (int i = 0; i < g.r(); ++i) buf[i] = vertices[s[i]];
    colors[e] = g.color_of_unsorted(buf);
  }
  return ColoredHypergraph(q, g.r(), g.k(), std::move(colors));
}

ColoredHypergraph relabel(const ColoredHypergraph& g, std::span<const int> perm) {
  // label i of the result is vertex inverse(perm)[i] of g
  std::vector<int> inv(perm.size());
  for (std::size_t v = 0; v < perm.size(); ++v) inv[perm[v]] = static_cast<int>(v);
  return induced(g, inv);
}

SampledColoredGraph sample_subgraph(const ColoredHypergraph& g, int q, std::uint64_t seed, SampleLabeling labeling) {
  if (q > g.n()) throw Error("sample size q exceeds n");
  if (q < g.r()) throw Error("sample size q must be at least r");
  Rng rng(seed);
  std::vector<int> chosen = rng.ordered_sample(g.n(), q);
  if (labeling == SampleLabeling::sorted) std::sort(chosen.begin(), chosen.end());
  return SampledColoredGraph(induced(g, chosen));
}

ColoredHypergraph complete_graph(int n, int r) {
  return ColoredHypergraph(n, r, 2, std::vector<Color>(binomial(n, r), 1));
}

ColoredHypergraph empty_graph(int n, int r) {
  return ColoredHypergraph(n, r, 2, std::vector<Color>(binomial(n, r), 2));
}

ColoredHypergraph cycle_graph(int n) {
  std::vector<Color> c(binomial(n, 2), 2);
  for (int i = 0; i < n; ++i) {
    int a = i, b = (i + 1) % n;
    int s[2] = {std::min(a, b), std::max(a, b)};
    c[colex_rank(s)] = 1;
  }
  return ColoredHypergraph(n, 2, 2, std::move(c));
}

ColoredHypergraph random_hypergraph(int n, int r, int k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Color> c(binomial(n, r));
  for (auto& x : c) x = static_cast<Color>(1 + rng.below(static_cast<std::uint64_t>(k)));
  return ColoredHypergraph(n, r, k, std::move(c));
}

ColoredHypergraph random_simple_graph(int n, int r, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Color> c(binomial(n, r));
  for (auto& x : c) x = rng.uniform() < p ? 1 : 2;
  return ColoredHypergraph(n, r, 2, std::move(c));
}

}  // namespace hypertest
