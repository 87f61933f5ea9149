// One line per acceptance criterion; exit status is the number of failures.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <algorithm>

#include "verify.hpp"

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i) quick |= std::strcmp(argv[i], "--quick") == 0;
  const char* env = std::getenv("ZQFT_THREADS");
  const int threads = env ? std::max(1, std::atoi(env)) : 4;

  int failed = 0;
  for (const auto& c : zqft::verify::run_all(quick, threads)) {
    const bool slow = c.time_limit > 0 && c.seconds > c.time_limit;
    const bool ok = c.pass && !slow;
    std::printf("[%s] C%-2d %-44s worst/tol=%.3e  %.2fs%s  %s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
                c.measure, c.seconds, slow ? " (over time limit)" : "", c.detail.c_str());
    failed += !ok;
  }
  std::printf("%d/%d criteria passed\n", zqft::verify::criterion_count - failed, zqft::verify::criterion_count);
  return failed == 0 ? 0 : 1;
}
