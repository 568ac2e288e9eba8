// Compares the OpenMP point sweep against the serial reference on the
// heaviest catalog entries.  Residual maxima must agree exactly; timings
// show the parallel speedup on the current machine.

#include <chrono>
#include <cstdio>

#include "solitonlab/parallel.hpp"
#include "solitonlab/runner.hpp"

using namespace solitonlab;

namespace {

double run_once(const CatalogEntry& entry, RunConfig config, bool parallel,
                Report* out) {
  config.parallel = parallel;
  auto start = std::chrono::steady_clock::now();
  Report r = run_verify(entry, config);
  auto stop = std::chrono::steady_clock::now();
  if (out) *out = r;
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main() {
  RunConfig config;
  config.samples = 256;

  std::printf("threads available: %d\n\n", thread_budget());
  std::printf("%-28s %10s %10s %8s  %s\n", "target", "serial[s]", "parallel[s]",
              "speedup", "agreement");

  bool all_equal = true;
  for (const char* target :
       {"hypercylinder?k=3&n=4", "sphere-product?dims=3,2&radii=1.4142135623730951,1",
        "hypersphere?n=3&r=2", "warped?n=4"}) {
    CatalogEntry entry = resolve_target(target);
    Report serial, parallel;
    double ts = run_once(entry, config, false, &serial);
    double tp = run_once(entry, config, true, &parallel);
    bool equal = serial.checks.size() == parallel.checks.size();
    for (size_t i = 0; equal && i < serial.checks.size(); ++i)
      equal = serial.checks[i].name == parallel.checks[i].name &&
              serial.checks[i].max_residual == parallel.checks[i].max_residual;
    all_equal = all_equal && equal;
    std::printf("%-28s %10.3f %10.3f %7.2fx  %s\n", target, ts, tp, ts / tp,
                equal ? "bit-exact" : "MISMATCH");
  }
  return all_equal ? 0 : 1;
}
