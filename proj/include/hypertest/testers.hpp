#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypertest/hypercore.hpp"

namespace hypertest {

// A relabeling-invariant real parameter of k-colored r-graphs. Callbacks must
// be pure: trials call them concurrently.
struct ParameterFn {
  std::string name;
  int r = 2;
  int k = 2;
  std::function<double(const ColoredHypergraph&)> fn;
  std::optional<double> lipschitz;
};

// A relabeling-invariant property. `distance` counts the edge recolorings
// needed to enter the property, when known.
struct PropertyFn {
  std::string name;
  int r = 2;
  int k = 2;
  std::function<bool(const ColoredHypergraph&)> member;
  std::function<bool(const ColoredHypergraph&)> sample_member;
  std::function<std::uint64_t(const ColoredHypergraph&)> distance;
};

// Fraction of edges with the given color.
double color_density(const ColoredHypergraph& g, Color c);

ParameterFn edge_density_parameter();
ParameterFn triangle_density_parameter();
// On [2]x[k] palettes: density of (1,1) minus density of (1,2).
ParameterFn signed_color_density(int k);
// On [2]x[k] palettes: density of (1,1).
ParameterFn color11_density(int k);
PropertyFn complete_property();
// Witness property on [2]x[k] palettes: every edge colored (1,1).
PropertyFn all_color11_property(int k);

// Registry lookups by name; k is the refinement palette for witnesses.
// Every returned object passed the relabeling spot check.
ParameterFn lookup_parameter(const std::string& name, int k = 2);
PropertyFn lookup_property(const std::string& name, int k = 2);
std::vector<std::string> parameter_names();
std::vector<std::string> property_names();

// Compares f on `trials` random relabelings of random graphs of the declared
// palette on n vertices.
bool relabel_invariant(const std::function<double(const ColoredHypergraph&)>& f, int r, int k, int n, int trials,
                       std::uint64_t seed);

struct WilsonInterval {
  double lo = 0, hi = 0;
};
// 95% Wilson score interval for `hits` successes out of n.
WilsonInterval wilson(std::uint64_t hits, std::uint64_t n, double z = 1.959963984540054);

struct ProbeRow {
  int q = 0;
  std::uint64_t failures = 0;
  std::uint64_t trials = 0;
  double rate = 0;
  WilsonInterval ci;
};
struct ProbeReport {
  double eps = 0;
  std::vector<ProbeRow> rows;
  std::optional<int> q_star;  // smallest q whose upper CI lies below eps
  bool monotone = true;       // rates nonincreasing up to 2 CI widths
};

ProbeReport probe_sample_complexity(const ParameterFn& f, const ColoredHypergraph& g, double eps,
                                    const std::vector<int>& q_grid, int trials, std::uint64_t seed);

enum class SearchMode { exhaustive, local };

struct NdValue {
  double value = 0;
  bool lower_bound = false;  // true for local search
  ColoredHypergraph coloring;
  SearchMode mode = SearchMode::exhaustive;
};

// max over k-colorings of g of witness. Local mode runs first-improvement hill
// climbing over single-edge recolorings with `restarts` starts.
NdValue nd_parameter(const ParameterFn& witness, const ColoredHypergraph& g, SearchMode mode, std::uint64_t seed,
                     int restarts = 8);

// Property tester built from a witness tester: sample q vertices, accept iff
// some k-coloring H of the sample has t(Q_hat_{q_q}, H) >= accept_threshold.
struct PropertyTester {
  PropertyFn witness;
  int k = 2;
  int q_q = 4;
  double accept_threshold = 0.6;
  double witness_high = 0.8;  // witness tester thresholds
  double witness_low = 0.2;
};

PropertyTester trivial_complete_tester(int k, int q_q);

struct TesterRun {
  bool accepted = false;
  double best_t = 0;
  std::vector<int> sample_vertices;
  ColoredHypergraph best_coloring;
};

// Fraction of q_q-subsets of h in the witness sample property.
double witness_sample_density(const PropertyTester& t, const ColoredHypergraph& h);
// Decision on an already drawn sample.
TesterRun property_decision(const PropertyTester& t, const ColoredHypergraph& sample);
TesterRun property_tester(const PropertyTester& t, const ColoredHypergraph& h, int q, std::uint64_t seed);

struct AcceptanceReport {
  std::uint64_t accepts = 0;
  std::uint64_t trials = 0;
  double frequency = 0;
  WilsonInterval ci;
  double exact = 0;  // over all q-subsets
};
AcceptanceReport acceptance_frequency(const PropertyTester& t, const ColoredHypergraph& h, int q, int trials,
                                      std::uint64_t seed);
// Exact acceptance probability: average decision over all q-subsets of h.
double exact_acceptance(const PropertyTester& t, const ColoredHypergraph& h, int q);

enum class FarNorm { binomial, square };
// h is eps-far from p: at least eps * C(n,r) (or eps * n^2) recolorings needed.
bool eps_far(const PropertyFn& p, const ColoredHypergraph& h, double eps, FarNorm norm = FarNorm::binomial);

}  // namespace hypertest
