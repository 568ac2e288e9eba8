#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "solitonlab/jet.hpp"

namespace solitonlab {

/// Open coordinate box of a chart.
struct ChartBox {
  std::vector<std::array<double, 2>> ranges;  // {lo, hi} per coordinate

  int dim() const { return static_cast<int>(ranges.size()); }
  double lo(int i) const { return ranges[static_cast<size_t>(i)][0]; }
  double hi(int i) const { return ranges[static_cast<size_t>(i)][1]; }
  double width(int i) const { return hi(i) - lo(i); }

  CoordPoint center() const;
  bool contains(const CoordPoint& p, double margin_frac) const;
};

/// Deterministic sample stream: mt19937_64 with the 53-bit mantissa
/// conversion, independent of any library distribution ("mt19937_64/v1"
/// in reports).  Identical output on every platform for a given seed.
class SampleRng {
 public:
  explicit SampleRng(uint64_t seed) : gen_(seed) {}

  static constexpr const char* kName = "mt19937_64/v1";

  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 gen_;
};

/// Uniform samples in the margin-shrunk box.  margin_frac is the
/// fraction of each coordinate width kept clear of the boundary.
std::vector<CoordPoint> sample_points(const ChartBox& box, double margin_frac,
                                      int count, uint64_t seed);

constexpr double kDefaultMargin = 0.05;

}  // namespace solitonlab
