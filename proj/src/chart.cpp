#include "solitonlab/chart.hpp"

namespace solitonlab {

CoordPoint ChartBox::center() const {
  std::vector<double> c(ranges.size());
  for (size_t i = 0; i < ranges.size(); ++i)
    c[i] = 0.5 * (ranges[i][0] + ranges[i][1]);
  return CoordPoint(std::move(c));
}

bool ChartBox::contains(const CoordPoint& p, double margin_frac) const {
  if (p.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    double m = margin_frac * width(i);
    if (p[i] < lo(i) + m || p[i] > hi(i) - m) return false;
  }
  return true;
}

std::vector<CoordPoint> sample_points(const ChartBox& box, double margin_frac,
                                      int count, uint64_t seed) {
  SampleRng rng(seed);
  std::vector<CoordPoint> pts;
  pts.reserve(static_cast<size_t>(count));
  for (int s = 0; s < count; ++s) {
    std::vector<double> c(static_cast<size_t>(box.dim()));
    for (int i = 0; i < box.dim(); ++i) {
      double m = margin_frac * box.width(i);
      c[static_cast<size_t>(i)] = rng.uniform(box.lo(i) + m, box.hi(i) - m);
    }
    pts.emplace_back(std::move(c));
  }
  return pts;
}

}  // namespace solitonlab
