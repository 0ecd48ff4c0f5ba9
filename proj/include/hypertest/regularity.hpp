#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypertest/common.hpp"
#include "hypertest/graphon.hpp"

namespace hypertest {

struct RegularityOptions {
  Mode mode = Mode::heuristic;  // how the residual norm is searched
  int max_rounds = 0;           // 0: ceil(1/eps^2)
  int restarts = 16;
  std::uint64_t seed = 0;
};

struct RegularityTraceRow {
  int round = 0;
  double residual = 0;   // detected sum_alpha ||W^alpha - V^alpha||_{square,Q}
  int classes = 0;       // classes of P when the residual was measured
  double log2_s = 0;     // log2 s(round + 1) of the growth sequence s(i+1) = s(i)(s(i)t+1)^{rk}
};

struct RegularityResult {
  StepGraphon v;
  GridPartition p;
  std::vector<RegularityTraceRow> trace;
  int rounds = 0;        // refinement rounds performed
  bool converged = false;
  bool exhausted = false;  // no witness split any class before reaching eps
  double achieved = 0;   // last detected residual
  bool monotone = true;  // residual trace nonincreasing
  Mode mode = Mode::heuristic;
};

// Witness-driven weak regularization of a k-colored step graphon: P starts
// trivial and is refined by the witness sets of the residual cut-Q norm, for
// Q ranging over partitions of w's grid with at most |P| t classes.
RegularityResult weak_regularize(const StepGraphon& w, double eps, int t, const RegularityOptions& opt = {});

std::string trace_csv(const RegularityResult& res);

// t_reg(r,k,eps,t) = (2t)^{(rk+1)^{4/eps^2}}. The exact integer is kept when
// it has at most a million bits; otherwise only logarithms.
struct ClassCountBound {
  std::optional<boost::multiprecision::cpp_int> exact;
  double log2 = 0;       // may be +inf
  double log2log2 = 0;
  bool admits(double m) const;
  std::string to_string() const;
};

ClassCountBound class_count_bound(int r, int k, double eps, int t);

}  // namespace hypertest
