#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypertest/common.hpp"
#include "hypertest/graphon.hpp"
#include "hypertest/hypercore.hpp"

namespace hypertest {

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct DensityResult {
  double value = 0;
  double se = 0;  // standard error; zero in exact mode
  Mode mode = Mode::exact;
  std::optional<Rational> exact;
};

// Exact t(F,G) as a fraction: occurrences over n^(q) injections (uniform
// labeling) or C(n,q) subsets (sorted labeling).
Rational density_graph_exact(const SampledColoredGraph& f, const ColoredHypergraph& g,
                             SampleLabeling labeling = SampleLabeling::uniform);
double density_graph(const SampledColoredGraph& f, const ColoredHypergraph& g,
                     SampleLabeling labeling = SampleLabeling::uniform);
DensityResult density_graph_mc(const SampledColoredGraph& f, const ColoredHypergraph& g, std::uint64_t samples,
                               std::uint64_t seed);

// Exact t(F,W) by summation over lower cell configurations and top-level class
// assignments; falls back to Monte Carlo only when mc_fallback is set.
DensityResult density_graphon(const SampledColoredGraph& f, const StepGraphon& w, bool mc_fallback = false,
                              std::uint64_t samples = 100'000, std::uint64_t seed = 0);
inline DensityResult density_graphon(const SampledColoredGraph& f, const VertexGraphon& w, bool mc_fallback = false,
                                     std::uint64_t samples = 100'000, std::uint64_t seed = 0) {
  return density_graphon(f, w.step(), mc_fallback, samples, seed);
}
// Conditional-expectation Monte Carlo: averages prod_e W^{F(e)} over latent draws.
DensityResult density_graphon_mc(const SampledColoredGraph& f, const StepGraphon& w, std::uint64_t samples,
                                 std::uint64_t seed);

// Exact mu(q, .): probabilities of every colored r-graph on [q] over the
// palette [k] plus iota. Index of F = sum_e color(e) (k+1)^e, e in colex order.
class SampleDistribution {
 public:
  SampleDistribution() = default;
  SampleDistribution(int q, int r, int k, bool iota, std::vector<double> probs);

  int q() const { return q_; }
  int r() const { return r_; }
  int k() const { return k_; }
  bool iota() const { return iota_; }
  std::size_t support_size() const { return probs_.size(); }
  const std::vector<double>& probs() const { return probs_; }
  double prob(std::size_t index) const { return probs_[index]; }
  double prob(const SampledColoredGraph& f) const { return probs_[encode(f)]; }
  std::size_t encode(const EdgeColoring& f) const;
  SampledColoredGraph decode(std::size_t index) const;
  static std::string key(const EdgeColoring& f);
  double total() const;

 private:
  int q_ = 0, r_ = 0, k_ = 0;
  bool iota_ = false;
  std::vector<double> probs_;
};

SampleDistribution sample_distribution(const ColoredHypergraph& g, int q,
                                       SampleLabeling labeling = SampleLabeling::uniform);
SampleDistribution sample_distribution(const StepGraphon& w, int q);
inline SampleDistribution sample_distribution(const VertexGraphon& w, int q) { return sample_distribution(w.step(), q); }

struct TvResult {
  double half_sum = 0;   // (1/2) sum_F |a(F) - b(F)|
  double max_event = 0;  // max over events |a(E) - b(E)|
  std::vector<std::size_t> event;  // maximizing event {F : a(F) > b(F)} (or its complement)
};

// Throws if the two forms disagree by more than 1e-9.
TvResult tv_distance(const SampleDistribution& a, const SampleDistribution& b);

struct CountingReport {
  double cut_distance = 0;
  double count_constant = 0;    // C(q,r)
  double max_density_gap = 0;   // max_F |t(F,W) - t(F,U)|
  double worst_slack = 0;       // min_F C(q,r) d - |t(F,W) - t(F,U)|
  int violations = 0;
  double dvar = 0;
  double dvar_bound = 0;        // k^{q^r} q^r / (2 r!) d
  bool dvar_ok = true;
  std::size_t graphs_checked = 0;
};

// Counting-lemma check for two step graphons; the cut distance is exact.
CountingReport counting_bound_check(const StepGraphon& u, const StepGraphon& w, int q);

}  // namespace hypertest
