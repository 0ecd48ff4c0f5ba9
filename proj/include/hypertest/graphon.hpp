#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hypertest/grid.hpp"
#include "hypertest/hypercore.hpp"

namespace hypertest {

inline constexpr double kUnityTol = 1e-12;

// k-colored (r,r-1)-step function: W^alpha(x) = A_alpha(class of each face).
// Arrays are indexed row-major over [t]^r (first face slowest). When
// `iota_allowed`, the colors may sum to less than one and the deficit is the
// diagonal color.
class StepGraphon {
 public:
  StepGraphon() = default;
  StepGraphon(int r, int k, GridPartition partition, std::vector<std::vector<double>> arrays,
              bool iota_allowed = false);
  static StepGraphon constant(int r, int k, const std::vector<double>& probs, int resolution = 1);

  int r() const { return r_; }
  int k() const { return k_; }
  int t() const { return partition_.t(); }
  const GridPartition& partition() const { return partition_; }
  const GridGeometry& geometry() const { return partition_.geometry(); }
  bool iota_allowed() const { return iota_allowed_; }
  const std::vector<std::vector<double>>& arrays() const { return arrays_; }
  const std::vector<double>& array(int alpha) const { return arrays_[alpha - 1]; }

  std::size_t index(std::span<const int> classes) const;
  // alpha in [k]; alpha = 0 gives the diagonal mass.
  double at(int alpha, std::span<const int> classes) const;
  double at_index(int alpha, std::size_t idx) const;
  std::size_t array_size() const { return arrays_.empty() ? 0 : arrays_[0].size(); }

  // Same graphon on a finer grid.
  StepGraphon rebase(const GridGeometry& finer) const;

 private:
  int r_ = 0;
  int k_ = 0;
  GridPartition partition_;
  std::vector<std::vector<double>> arrays_;
  bool iota_allowed_ = false;
};

// W_G: the colored hypergraph spread over the n-interval subdivision. The step
// representation has one class per multiset of r-1 vertex intervals and puts
// the diagonal color on every repeated-vertex cube.
class VertexGraphon {
 public:
  explicit VertexGraphon(ColoredHypergraph g);
  const ColoredHypergraph& graph() const { return g_; }
  const StepGraphon& step() const { return step_; }
  int r() const { return g_.r(); }
  int k() const { return g_.k(); }
  // Measure of the diagonal region.
  double iota_measure() const;

 private:
  ColoredHypergraph g_;
  StepGraphon step_;
};

VertexGraphon embed(const ColoredHypergraph& g);

// point: one coordinate per nonempty proper subset of [r], (cardinality, lex)
// order, each in [0,1).
double evaluate(const StepGraphon& w, int alpha, std::span<const double> point);
double evaluate(const VertexGraphon& w, int alpha, std::span<const double> point);

// Latent variables of a graphon sample: X_S for S in H([q], r-1), stored per
// level in colex order of the subsets of [q].
struct LatentSample {
  SampledColoredGraph graph;
  std::vector<std::vector<double>> latents;
};

LatentSample sample_graphon_latent(const StepGraphon& w, int q, std::uint64_t seed);
SampledColoredGraph sample_graphon(const StepGraphon& w, int q, std::uint64_t seed);
// With condition_no_iota the sample is redrawn until no edge is diagonal.
SampledColoredGraph sample_graphon(const VertexGraphon& w, int q, std::uint64_t seed, bool condition_no_iota,
                                   int max_attempts = 10'000);

// Class of each (r-1)-subset of [q] (colex order) under partition p, read off
// the latent coordinates.
std::vector<int> face_classes(const GridPartition& p, int r, int q, const std::vector<std::vector<double>>& latents);

// Conditional average of w on products of p's classes, renormalized so the
// colors sum to one (diagonal mass is redistributed; fully diagonal class
// tuples become uniform).
StepGraphon step_average(const StepGraphon& w, const GridPartition& p);
inline StepGraphon step_average(const VertexGraphon& w, const GridPartition& p) { return step_average(w.step(), p); }

// Averages the arrays over all r! coordinate permutations.
StepGraphon symmetrize(const StepGraphon& w);
bool arrays_symmetric(const StepGraphon& w, double tol = 1e-12);

// Integral of W^alpha (alpha = 0: the diagonal mass).
double integral(const StepGraphon& w, int alpha);
// sum over colors of the L1 distance; both on a common grid refinement.
double l1_distance(const StepGraphon& a, const StepGraphon& b);

// Both graphons re-expressed on their common grid.
std::pair<StepGraphon, StepGraphon> on_common_grid(const StepGraphon& a, const StepGraphon& b);

// Random symmetric step graphon with t classes on the uniform g-grid.
StepGraphon random_step_graphon(int r, int k, int g, int t, std::uint64_t seed);

}  // namespace hypertest
