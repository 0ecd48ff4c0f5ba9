#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hypertest/common.hpp"
#include "hypertest/graphon.hpp"
#include "hypertest/hypercore.hpp"

namespace hypertest {

// Dense symmetric real r-array on [n]^r.
class SymArray {
 public:
  SymArray() = default;
  SymArray(int r, int n, std::vector<double> values);
  static SymArray zeros(int r, int n);
  // A(u) = 1 iff u has distinct entries and the edge {u} has color alpha.
  static SymArray from_color(const EdgeColoring& g, Color alpha);

  int r() const { return r_; }
  int n() const { return n_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  std::size_t index(std::span<const int> u) const;
  double at(std::span<const int> u) const { return values_[index(u)]; }
  // Sets A at u and at all permutations of u.
  void set_symmetric(std::span<const int> u, double v);

  SymArray operator-(const SymArray& o) const;
  SymArray operator+(const SymArray& o) const;

 private:
  int r_ = 0;
  int n_ = 0;
  std::vector<double> values_;
};

// Random symmetric array with entries uniform in [-1, 1]; zero on tuples with
// repeated entries when zero_diagonal is set.
SymArray random_sym_array(int r, int n, std::uint64_t seed, bool zero_diagonal = true);

// Partition of the (r-1)-subsets of [n] (colex order) into t classes (0-based).
struct TuplePartition {
  int n = 0;
  int r_minus_1 = 0;
  int t = 0;
  std::vector<int> classes;

  TuplePartition() = default;
  TuplePartition(int n, int r_minus_1, int t, std::vector<int> classes);
  static TuplePartition trivial(int n, int r_minus_1);
  static TuplePartition random(int n, int r_minus_1, int t, std::uint64_t seed);
};

// Bilinear form over "atoms": value(S_1..S_r) = sum_terms w prod_j [atom_j in S_j].
// For an array the atoms are the (r-1)-subsets of [n] and each ordered tuple u
// contributes A(u)/n^r with atom_j = {u} minus its j-th entry. For graphons
// the atoms are the symmetry orbits of grid cells.
struct CutTerm {
  std::array<std::uint32_t, 4> atoms{};
  double weight = 0;
};

struct CutForm {
  int r = 0;
  std::size_t atoms = 0;
  std::vector<CutTerm> terms;
  // Merges terms with equal atom tuples and drops zeros.
  void aggregate();
};

struct CutWitness {
  std::vector<std::vector<std::uint32_t>> sets;  // S_1..S_r as sorted atom lists
  std::vector<int> signs;                        // cut-P only: sign per class tuple, row-major
};

struct CutResult {
  double value = 0;
  CutWitness witness;
  Mode mode = Mode::exact;
};

CutForm cut_form(const SymArray& a);

struct GraphonCutForms {
  GridGeometry geometry;                   // common grid
  std::vector<std::uint32_t> atom_of_cell;  // orbit id of each (r-1)-grid cell
  std::vector<std::size_t> atom_cell;       // representative cell per atom
  std::size_t atoms = 0;
  std::vector<CutForm> per_color;           // U^alpha - W^alpha, alpha in [k]
};

// Forms for U - W on the common grid of u, w and `extra` (when given).
GraphonCutForms graphon_cut_forms(const StepGraphon& u, const StepGraphon& w,
                                  const GridGeometry* extra = nullptr);

double cut_value(const CutForm& f, const CutWitness& s);
// sum over class tuples of |value restricted to atoms of those classes|.
double cut_p_value(const CutForm& f, std::span<const int> atom_class, int t, const CutWitness& s);

// Exhaustive over S_1..S_{r-1}; the last set is chosen in closed form.
// Throws BudgetExceeded when (r-1) * atoms exceeds max_bits.
CutResult form_cutnorm_exact(const CutForm& f, int max_bits = 24);
CutResult form_cutnorm_heuristic(const CutForm& f, int restarts = 16, std::uint64_t seed = 0);
CutResult form_cutnorm_p_exact(const CutForm& f, std::span<const int> atom_class, int t, int max_bits = 24);
CutResult form_cutnorm_p_heuristic(const CutForm& f, std::span<const int> atom_class, int t, int restarts = 16,
                                   std::uint64_t seed = 0);

struct SupResult {
  double value = 0;
  std::vector<int> atom_class;  // maximizing partition of the atoms
  Mode mode = Mode::exact;
};

// sup over partitions Q of the atoms into at most t classes of
// sum_forms ||form||_{square,Q}. Exact mode enumerates set partitions with
// min(t, atoms) blocks (refining never lowers the norm); heuristic mode uses
// the ground-state-energy reduction.
SupResult sup_cutnorm_over_forms(std::span<const CutForm> forms, int t, Mode mode, std::uint64_t seed = 0);

CutResult cutnorm(const SymArray& a, Mode mode = Mode::exact, std::uint64_t seed = 0);
CutResult cutnorm_p(const SymArray& a, const TuplePartition& p, Mode mode = Mode::exact, std::uint64_t seed = 0);
SupResult sup_cutnorm_over_partitions(const SymArray& a, int t, Mode mode = Mode::exact, std::uint64_t seed = 0);

struct CutDistanceResult {
  double value = 0;
  std::vector<CutResult> per_color;
  Mode mode = Mode::exact;
};

// sum_alpha ||A_G^alpha - A_H^alpha||, optionally the partition-restricted norm.
CutDistanceResult cut_distance(const ColoredHypergraph& g, const ColoredHypergraph& h, Mode mode = Mode::exact,
                               std::uint64_t seed = 0, const TuplePartition* p = nullptr);
CutDistanceResult cut_distance(const StepGraphon& u, const StepGraphon& w, Mode mode = Mode::exact,
                               std::uint64_t seed = 0, const GridPartition* p = nullptr);

}  // namespace hypertest
