#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "solitonlab/soliton.hpp"

namespace solitonlab {

enum class EntryKind { IntrinsicMetric, EuclideanImmersion, WarpedProduct };

/// What the verification suite must reproduce for an entry.
struct ExpectedVerdict {
  std::optional<double> lambda;
  bool shrinking = false;
  bool trivial = false;
  bool gradient = false;
  bool concurrent_potential = false;
  std::string provenance;  // short reference string shown in reports
};

struct CatalogEntry {
  std::string name;
  EntryKind kind = EntryKind::IntrinsicMetric;
  int dim = 0;
  ChartBox box;
  double margin = kDefaultMargin;
  std::vector<std::string> coord_names;
  std::shared_ptr<const MetricField> metric;
  std::optional<Immersion> immersion;
  std::vector<ExprPtr> potential_exprs;  // empty on immersions: v^T is used
  std::optional<WarpedProductData> warped;
  ExpectedVerdict expected;

  bool is_hypersurface() const {
    return immersion && immersion->ambient_dim == immersion->chart_dim + 1;
  }

  /// Assembles the soliton datum (metric + potential + lambda); lambda
  /// falls back to a per-chart least-squares fit when not recorded.
  SolitonDatum datum(int fit_samples = 16, uint64_t seed = 0) const;
};

/// Intrinsic round sphere S^d(r) in angular coordinates (poles cut at
/// colatitude 0.15); usable directly and as a warped-product fiber.
CatalogEntry make_round_sphere_metric(int d, double r);

/// Embedding of S^d(r) into E^{d+1} as component expressions over the
/// chart variables [var_offset, var_offset + d).
std::vector<ExprPtr> sphere_embedding(int d, double r, int var_offset);

CatalogEntry make_euclidean(int n);

/// Cone over a unit-speed curve on the unit sphere of E^{m-n+1}:
/// phi(s, x2, ..., xn) = (gamma(s) x2, x2, x3, ..., xn).  The curve is
/// given as expressions in the single variable s and is validated
/// numerically (|gamma| = 1, |gamma'| = 1).
CatalogEntry make_cone_over_curve(const std::vector<ExprPtr>& curve, int n,
                                  int m);

/// The default circular cone of dimension n in E^{n+1}.
CatalogEntry make_cone(int n = 2, int m = 3);

CatalogEntry make_spherical_hypercylinder(int k, int n);

CatalogEntry make_product_of_spheres(const std::vector<int>& dims,
                                     const std::vector<double>& radii);

CatalogEntry make_warped_product(ExprPtr f, const CatalogEntry& fiber,
                                 std::array<double, 2> s_interval);

CatalogEntry make_hypersphere(int n, double r);

struct CatalogListing {
  std::string name;
  std::string description;
  std::string provenance;
};
std::vector<CatalogListing> list_catalog();

/// Resolves a CLI target like "hypercylinder?k=2&n=3" to an entry.
/// Throws std::invalid_argument on unknown names or bad parameters.
CatalogEntry resolve_target(const std::string& target);

/// Every entry exercised by the verification suite, in a stable order.
std::vector<CatalogEntry> default_suite_entries();

}  // namespace solitonlab
