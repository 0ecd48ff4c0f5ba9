#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hypertest/common.hpp"
#include "hypertest/cutnorm.hpp"
#include "hypertest/graphon.hpp"
#include "hypertest/hypercore.hpp"

namespace hypertest {

// Per color alpha in [k], a real r-array J^alpha on [q]^r (row-major, first
// index slowest) with sup norm at most one.
class CouplingArray {
 public:
  CouplingArray() = default;
  CouplingArray(int r, int k, int q, std::vector<std::vector<double>> arrays);

  int r() const { return r_; }
  int k() const { return k_; }
  int q() const { return q_; }
  const std::vector<std::vector<double>>& arrays() const { return arrays_; }
  double at(int alpha, std::span<const int> classes) const;
  double at_index(int alpha, std::size_t idx) const { return arrays_[alpha - 1][idx]; }
  std::size_t index(std::span<const int> classes) const;
  CouplingArray operator-() const;

 private:
  int r_ = 0, k_ = 0, q_ = 0;
  std::vector<std::vector<double>> arrays_;
};

// Energy as a sum over terms: each term names the atom (partition unit) of
// every face and carries a color and a weight. Moving one atom changes only
// the terms in its incidence list.
struct EnergyTerm {
  std::array<std::uint32_t, 4> atoms{};
  std::uint16_t color = 1;
  double weight = 0;
};

struct EnergyForm {
  int r = 0;
  int k = 0;
  std::size_t atoms = 0;
  std::vector<EnergyTerm> terms;
  std::vector<std::vector<std::uint32_t>> incidence;
  void build_incidence();
};

// Atoms are the (r-1)-subsets of [n]; one term of weight 1/n^r per ordered
// tuple of distinct vertices.
EnergyForm energy_form(const ColoredHypergraph& h);
// Atoms are symmetry orbits of grid cells; weights are volume times W^alpha.
EnergyForm energy_form(const StepGraphon& w);
// Each form becomes one color (form i -> color i+1) with its real weights.
EnergyForm energy_form(std::span<const CutForm> forms);

double energy(const EnergyForm& f, const CouplingArray& j, std::span<const int> atom_class);
// (1/n^r) sum J(i_1..i_r) e_H(r; P_{i_1}, ..., P_{i_r}).
double energy(const ColoredHypergraph& h, const CouplingArray& j, const TuplePartition& p);

struct AnnealOptions {
  int restarts = 8;
  double cooling = 0.95;
  double final_ratio = 1e-3;
  int moves_per_level = 0;  // 0: atoms * (q - 1), at least 16
};

struct GseResult {
  double value = 0;
  std::vector<int> atom_class;
  Mode mode = Mode::exact;
};

// Exact mode enumerates all q^atoms class assignments; heuristic mode anneals.
GseResult gse_form(const EnergyForm& f, const CouplingArray& j, Mode mode, std::uint64_t seed = 0,
                   const AnnealOptions& opt = {});

struct GraphGseResult {
  double value = 0;
  TuplePartition partition;
  Mode mode = Mode::exact;
};

GraphGseResult gse(const ColoredHypergraph& h, const CouplingArray& j, Mode mode, std::uint64_t seed = 0,
                   const AnnealOptions& opt = {});
// Searches partitions that are unions of cell orbits of w's grid.
GseResult gse_graphon(const StepGraphon& w, const CouplingArray& j, Mode mode, std::uint64_t seed = 0,
                      const AnnealOptions& opt = {});

// B_0 on (2^[r])^r: 1 iff l is in S_l for every l (S_l as a bitmask).
std::vector<double> make_b0(int r);
// J_A^alpha = y_alpha (A tensor B_0); classes are i * 2^r + mask.
CouplingArray make_reduction_arrays(std::span<const int> a, int t, int r, std::span<const double> y);
// Partition of the reduced energy back to a t-class partition (i = class / 2^r).
std::vector<int> reduced_to_partition(std::span<const int> reduced, int r);

struct ConcentrationReport {
  int sample_size = 0;
  int trials = 0;
  std::vector<double> values;
  double mean = 0;
  double q1 = 0, median = 0, q3 = 0;
  double iqr = 0;
  std::vector<double> deviations;    // thresholds
  std::vector<double> tail_freq;     // empirical P(|E - mean| >= dev)
  std::vector<double> azuma_bound;   // 2 exp(-dev^2 n' / (8 r^2))
};

ConcentrationReport concentration_experiment(const ColoredHypergraph& h, const CouplingArray& j, int sample_size,
                                             int trials, std::uint64_t seed,
                                             std::vector<double> deviations = {0.1, 0.25, 0.5},
                                             const AnnealOptions& opt = {});

}  // namespace hypertest
