#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace hypertest {

// One splitmix64 step: advances state by the golden gamma and returns the
// mixed output. With state = 0 the first output is 0xE220A8397B1DCDAF.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Derived seed for a stage or trial: splitmix64 output of base advanced by
// (stream + 1) gamma steps. Independent streams never share a state.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

// Seeded generator with platform-independent derived distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  // Uniform in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  bool coin() { return (eng_() >> 63) != 0; }
  // Uniformly random ordered selection of q distinct elements of {0..n-1}.
  std::vector<int> ordered_sample(int n, int q);

 private:
  std::mt19937_64 eng_;
};

}  // namespace hypertest
