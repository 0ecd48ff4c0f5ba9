#include "hypertest/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hypertest {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::exact: return "exact";
    case Mode::heuristic: return "heuristic";
    case Mode::mc: return "mc";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  if (s == "exact") return Mode::exact;
  if (s == "heuristic" || s == "anneal" || s == "local") return Mode::heuristic;
  if (s == "mc") return Mode::mc;
  throw Error("unknown mode '" + s + "'");
}

namespace {

std::uint64_t initial_budget() {
  if (const char* env = std::getenv("HYPERTEST_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return kDefaultBudget;
}

std::atomic<std::uint64_t>& budget_slot() {
  static std::atomic<std::uint64_t> b{initial_budget()};
  return b;
}

std::atomic<unsigned>& threads_slot() {
  static std::atomic<unsigned> t{std::max(1u, std::thread::hardware_concurrency())};
  return t;
}

}  // namespace

std::uint64_t enumeration_budget() { return budget_slot().load(); }
void set_enumeration_budget(std::uint64_t b) { budget_slot().store(b == 0 ? 1 : b); }

void require_budget(double needed, const std::string& what) {
  if (needed > static_cast<double>(enumeration_budget())) {
    throw BudgetExceeded(what + ": needs " + std::to_string(needed) + " enumeration steps, budget is " +
                         std::to_string(enumeration_budget()));
  }
}

unsigned thread_count() { return threads_slot().load(); }
void set_thread_count(unsigned n) { threads_slot().store(std::max(1u, n)); }

namespace {
thread_local bool in_worker = false;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  // Nested calls run inline on the calling worker.
  if (workers <= 1 || in_worker) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto body = [&] {
    in_worker = true;
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hypertest
