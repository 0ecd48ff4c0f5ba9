#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hypertest::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// desk: the full instance counts. smoke: a few instances per criterion, for
// quick CLI runs; its verdicts are not the acceptance verdicts.
enum class Level { desk, smoke };

Level parse_level(const std::string& s);

// Runs every criterion in order; when `live` is set, each line is printed as
// soon as its criterion finishes.
std::vector<CriterionResult> run_all(Level level, std::uint64_t seed, std::ostream* live = nullptr);
std::string format_line(const CriterionResult& c);

}  // namespace hypertest::acceptance
