#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace hypertest {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised whenever an exhaustive computation would exceed the enumeration budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

enum class Mode { exact, heuristic, mc };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& s);

inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

// Global enumeration budget. Initialized from HYPERTEST_BUDGET when set.
std::uint64_t enumeration_budget();
void set_enumeration_budget(std::uint64_t b);

// Throws BudgetExceeded when `needed` exceeds the budget.
void require_budget(double needed, const std::string& what);

class ScopedBudget {
 public:
  explicit ScopedBudget(std::uint64_t b) : saved_(enumeration_budget()) { set_enumeration_budget(b); }
  ~ScopedBudget() { set_enumeration_budget(saved_); }
  ScopedBudget(const ScopedBudget&) = delete;
  ScopedBudget& operator=(const ScopedBudget&) = delete;

 private:
  std::uint64_t saved_;
};

// Worker count used by parallel_for. Defaults to the number of logical cores.
unsigned thread_count();
void set_thread_count(unsigned n);

// Runs fn(i) for i in [0, n). Each index must write only its own output slot,
// which keeps results independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hypertest
