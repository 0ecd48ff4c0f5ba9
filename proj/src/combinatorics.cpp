#include "hypertest/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hypertest/common.hpp"

namespace hypertest {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > UINT64_MAX) throw Error("binomial overflow");
  }
  return static_cast<std::uint64_t>(acc);
}

double binomial_d(double n, double k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  if (k == std::floor(k) && n == std::floor(n) && k <= 64) {
    // Exact while the partial products stay below 2^53.
    double acc = 1;
    for (double i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    if (acc < 0x1p52) return acc;
  }
  return std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1));
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  unsigned __int128 acc = 1;
  for (unsigned i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > UINT64_MAX) throw Error("integer power overflow");
  }
  return static_cast<std::uint64_t>(acc);
}

double factorial(unsigned n) {
  double f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

std::uint64_t falling(std::uint64_t n, std::uint64_t q) {
  if (q > n) return 0;
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 0; i < q; ++i) {
    acc *= (n - i);
    if (acc > UINT64_MAX) throw Error("falling factorial overflow");
  }
  return static_cast<std::uint64_t>(acc);
}

std::size_t colex_rank(std::span<const int> sorted) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) r += binomial(static_cast<std::uint64_t>(sorted[i]), i + 1);
  return r;
}

SubsetTable::SubsetTable(int n, int k) : n_(n), k_(k) {
  if (k < 0 || n < 0) throw Error("invalid subset table");
  count_ = binomial(n, k);
  flat_.reserve(count_ * static_cast<std::size_t>(k));
  std::vector<int> c(k);
  std::iota(c.begin(), c.end(), 0);
  for (std::size_t idx = 0; idx < count_; ++idx) {
    flat_.insert(flat_.end(), c.begin(), c.end());
    // colex successor: bump the first element that can move
    int j = 0;
    while (j < k && ((j + 1 < k) ? c[j] + 1 == c[j + 1] : c[j] + 1 == n)) ++j;
    if (j == k) break;
    ++c[j];
    for (int i = 0; i < j; ++i) c[i] = i;
  }
}

std::vector<std::vector<int>> graded_subsets(int m, int max_size) {
  std::vector<std::vector<int>> out;
  for (int s = 1; s <= max_size; ++s) {
    std::vector<int> c(s);
    std::iota(c.begin(), c.end(), 0);
    if (s > m) break;
    for (;;) {
      out.push_back(c);
      int i = s - 1;
      while (i >= 0 && c[i] == m - s + i) --i;
      if (i < 0) break;
      ++c[i];
      for (int j = i + 1; j < s; ++j) c[j] = c[j - 1] + 1;
    }
  }
  return out;
}

std::size_t graded_index(int m, int max_size, std::span<const int> subset) {
  static thread_local std::vector<std::pair<std::pair<int, int>, std::vector<std::vector<int>>>> cache;
  const std::vector<std::vector<int>>* table = nullptr;
  for (auto& [key, t] : cache)
    if (key.first == m && key.second == max_size) table = &t;
  if (!table) {
    cache.push_back({{m, max_size}, graded_subsets(m, max_size)});
    table = &cache.back().second;
  }
  for (std::size_t i = 0; i < table->size(); ++i)
    if (std::equal((*table)[i].begin(), (*table)[i].end(), subset.begin(), subset.end())) return i;
  throw Error("subset not found in graded order");
}

std::vector<std::vector<int>> all_permutations(int m) {
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

namespace {

void partitions_rec(int pos, int used, int a, int blocks, std::vector<int>& rgs,
                    const std::function<void(const std::vector<int>&)>& fn) {
  if (pos == a) {
    if (used == blocks) fn(rgs);
    return;
  }
  if (blocks - used > a - pos) return;
  for (int b = 0; b <= used && b < blocks; ++b) {
    rgs[pos] = b;
    partitions_rec(pos + 1, std::max(used, b + 1), a, blocks, rgs, fn);
  }
}

}  // namespace

void for_each_set_partition(int a, int blocks, const std::function<void(const std::vector<int>&)>& fn) {
  if (blocks <= 0 || blocks > a) return;
  std::vector<int> rgs(a, 0);
  partitions_rec(0, 0, a, blocks, rgs, fn);
}

double stirling2(int n, int k) {
  if (k > n || k < 0) return 0;
  std::vector<std::vector<double>> s(n + 1, std::vector<double>(k + 1, 0.0));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= std::min(i, k); ++j) s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
  return s[n][k];
}

}  // namespace hypertest
