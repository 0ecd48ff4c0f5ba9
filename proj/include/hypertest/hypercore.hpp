#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hypertest/combinatorics.hpp"

namespace hypertest {

using Color = std::uint16_t;
// Reserved diagonal color. Finite hypergraphs never store it.
inline constexpr Color kIota = 0;

// Pairing convention for [t]x[k] palettes: (alpha, beta) -> (alpha-1)k + beta.
inline Color pair_color(int alpha, int beta, int k) { return static_cast<Color>((alpha - 1) * k + beta); }
inline int base_color(Color c, int k) { return (static_cast<int>(c) - 1) / k + 1; }
inline int sub_color(Color c, int k) { return (static_cast<int>(c) - 1) % k + 1; }

// Edge colors of r-subsets of [n] in colex order. Shared by finite hypergraphs
// and samples; `iota_allowed` decides whether color 0 may appear.
class EdgeColoring {
 public:
  EdgeColoring() = default;
  EdgeColoring(int n, int r, int k, std::vector<Color> colors, bool iota_allowed);

  int n() const { return n_; }
  int r() const { return r_; }
  int k() const { return k_; }
  std::size_t edge_count() const { return colors_.size(); }
  const std::vector<Color>& colors() const { return colors_; }
  Color color(std::size_t edge) const { return colors_[edge]; }
  // Color of an r-set given as sorted 0-based vertices.
  Color color_of(std::span<const int> sorted) const { return colors_[colex_rank(sorted)]; }
  // Color of an r-set given in any order (copied and sorted).
  Color color_of_unsorted(std::span<const int> vertices) const;
  bool has_iota() const;

  bool operator==(const EdgeColoring& o) const {
    return n_ == o.n_ && r_ == o.r_ && k_ == o.k_ && colors_ == o.colors_;
  }

 protected:
  int n_ = 0;
  int r_ = 0;
  int k_ = 0;
  std::vector<Color> colors_;
};

// A k-coloring of all r-subsets of [n]; colors in [k].
class ColoredHypergraph : public EdgeColoring {
 public:
  ColoredHypergraph() = default;
  ColoredHypergraph(int n, int r, int k, std::vector<Color> colors) : EdgeColoring(n, r, k, std::move(colors), false) {}
};

// A colored r-graph on [q] whose colors lie in [k] or are iota.
class SampledColoredGraph : public EdgeColoring {
 public:
  SampledColoredGraph() = default;
  SampledColoredGraph(int q, int r, int k, std::vector<Color> colors) : EdgeColoring(q, r, k, std::move(colors), true) {}
  explicit SampledColoredGraph(const ColoredHypergraph& g) : EdgeColoring(g.n(), g.r(), g.k(), g.colors(), true) {}
  int q() const { return n_; }
  // Throws if iota is present.
  ColoredHypergraph to_hypergraph() const;
};

ColoredHypergraph make_hypergraph(int n, int r, int k, std::vector<Color> colors);

// Merges each color (alpha, beta) of a [t]x[k] palette into alpha.
ColoredHypergraph discolor(const ColoredHypergraph& g, int k);

// Visits every [t]x[k]-coloring of g exactly once (last edge varies fastest).
// Throws BudgetExceeded when k^{C(n,r)} exceeds the enumeration budget.
// Returns the number visited.
std::uint64_t enumerate_colorings(const ColoredHypergraph& g, int k,
                                  const std::function<void(const ColoredHypergraph&)>& visit);

enum class SampleLabeling {
  uniform,  // sampled vertices receive labels 1..q in uniformly random order
  sorted    // sampled vertices keep their relative order
};

// Induced colored graph on a uniformly random q-subset, relabeled to [q].
SampledColoredGraph sample_subgraph(const ColoredHypergraph& g, int q, std::uint64_t seed,
                                    SampleLabeling labeling = SampleLabeling::uniform);

// Induced colored graph on the given ordered vertex list (label i -> vertices[i]).
ColoredHypergraph induced(const ColoredHypergraph& g, std::span<const int> vertices);

// Applies a vertex relabeling: result color of {perm[v] : v in e} equals g's color of e.
ColoredHypergraph relabel(const ColoredHypergraph& g, std::span<const int> perm);

// Simple graphs as 2-colored r-graphs: color 1 = present, color 2 = absent.
ColoredHypergraph complete_graph(int n, int r = 2);
ColoredHypergraph empty_graph(int n, int r = 2);
ColoredHypergraph cycle_graph(int n);
ColoredHypergraph random_hypergraph(int n, int r, int k, std::uint64_t seed);
ColoredHypergraph random_simple_graph(int n, int r, double p, std::uint64_t seed);

}  // namespace hypertest
