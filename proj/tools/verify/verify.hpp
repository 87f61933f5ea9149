#pragma once

#include <string>
#include <vector>

namespace zqft::verify {

struct Criterion {
  int id = 0;
  std::string name;
  bool pass = false;
  double measure = 0.0;    // worst residual (or the quantity compared against the bound)
  double tolerance = 0.0;
  double seconds = 0.0;
  double time_limit = 0.0; // 0: none
  std::string detail;
};

constexpr int criterion_count = 12;

// quick: smaller exhaustive bounds and fewer sample points, same tolerances.
Criterion run_criterion(int id, bool quick = false);
// Runs on up to `threads` workers; results are ordered by id.
std::vector<Criterion> run_all(bool quick = false, int threads = 1);

}  // namespace zqft::verify
