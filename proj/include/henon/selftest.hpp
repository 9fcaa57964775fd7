#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace henon {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct SelftestOptions {
  std::string map_text = "p = z^2 - 6; a = 0.5";
  std::uint64_t seed = 0;
  std::string out_dir = "selftest-out";
  long pipeline_n_max = 25;
  unsigned force_bits = 0;  // nonzero overrides the precision ladder
};

// Runs the full acceptance suite, prints one pass/fail line per criterion
// to `log`, writes its CSV artifacts under out_dir.
std::vector<CriterionResult> run_selftest(const SelftestOptions& opt, std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace henon
