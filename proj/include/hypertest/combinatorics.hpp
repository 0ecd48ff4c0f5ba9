#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hypertest {

// Exact binomial coefficient; throws on 64-bit overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);
// Binomial as a double, for budget estimates that may overflow.
double binomial_d(double n, double k);
std::uint64_t ipow(std::uint64_t base, unsigned exp);
double factorial(unsigned n);
// n (n-1) ... (n-q+1)
std::uint64_t falling(std::uint64_t n, std::uint64_t q);

// Colex rank of a sorted 0-based subset: sum_i C(c_i, i+1).
std::size_t colex_rank(std::span<const int> sorted);

// All k-subsets of {0..n-1} in colex order, flattened (k ints per subset).
class SubsetTable {
 public:
  SubsetTable() = default;
  SubsetTable(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  std::size_t size() const { return count_; }
  std::span<const int> operator[](std::size_t i) const {
    return {flat_.data() + i * static_cast<std::size_t>(k_), static_cast<std::size_t>(k_)};
  }
  std::size_t rank(std::span<const int> sorted) const { return colex_rank(sorted); }

 private:
  int n_ = 0;
  int k_ = 0;
  std::size_t count_ = 0;
  std::vector<int> flat_;
};

// Nonempty subsets of {0..m-1} with at most `max_size` elements, ordered by
// (cardinality, lexicographic). Each subset is a sorted vector.
std::vector<std::vector<int>> graded_subsets(int m, int max_size);

// Position of `subset` in graded_subsets(m, max_size).
std::size_t graded_index(int m, int max_size, std::span<const int> subset);

std::vector<std::vector<int>> all_permutations(int m);

// Calls fn with each set partition of {0..a-1} into exactly `blocks` nonempty
// blocks, as a restricted growth string.
void for_each_set_partition(int a, int blocks, const std::function<void(const std::vector<int>&)>& fn);

// Stirling number of the second kind, as a double.
double stirling2(int n, int k);

}  // namespace hypertest
