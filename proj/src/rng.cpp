#include "hypertest/rng.hpp"

#include <numeric>

#include "hypertest/common.hpp"

namespace hypertest {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += kGamma;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t state = base + stream * kGamma;
  return splitmix64_next(state);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error("Rng::below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    std::uint64_t x = eng_();
    if (x < limit) return x % n;
  }
}

std::vector<int> Rng::ordered_sample(int n, int q) {
  if (q > n || q < 0) throw Error("ordered_sample: q out of range");
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < q; ++i) {
    auto j = i + static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(q);
  return pool;
}

}  // namespace hypertest
