#include "solitonlab/catalog.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace solitonlab {

namespace {

constexpr double kPoleCut = 0.15;

ChartBox angular_box(int count) {
  ChartBox box;
  box.ranges.assign(static_cast<size_t>(count),
                    {kPoleCut, std::numbers::pi - kPoleCut});
  return box;
}

std::vector<std::string> angle_names(int count, const std::string& prefix = "t") {
  std::vector<std::string> names;
  for (int i = 0; i < count; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

double fitted_intrinsic_lambda(const CatalogEntry& e, int samples,
                               uint64_t seed);

}  // namespace

std::vector<ExprPtr> sphere_embedding(int d, double r, int var_offset) {
  std::vector<ExprPtr> comps;
  comps.reserve(static_cast<size_t>(d + 1));
  for (int a = 0; a <= d; ++a) {
    ExprPtr e = ex::c(r);
    for (int u = 0; u < std::min(a, d); ++u)
      e = ex::mul(e, ex::sin(ex::var(var_offset + u)));
    if (a < d) e = ex::mul(e, ex::cos(ex::var(var_offset + a)));
    comps.push_back(e);
  }
  return comps;
}

CatalogEntry make_round_sphere_metric(int d, double r) {
  if (d < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  if (r <= 0) throw std::invalid_argument("sphere radius must be positive");
  std::vector<std::vector<ExprPtr>> comp(
      static_cast<size_t>(d), std::vector<ExprPtr>(static_cast<size_t>(d)));
  for (int i = 0; i < d; ++i) {
    ExprPtr e = ex::c(r * r);
    for (int u = 0; u < i; ++u)
      e = ex::mul(e, ex::power(ex::sin(ex::var(u)), 2));
    comp[static_cast<size_t>(i)][static_cast<size_t>(i)] = e;
  }
  CatalogEntry entry;
  entry.name = "round-sphere-metric";
  entry.kind = EntryKind::IntrinsicMetric;
  entry.dim = d;
  entry.box = angular_box(d);
  entry.coord_names = angle_names(d);
  entry.metric = std::make_shared<ExprMetric>(d, std::move(comp));
  entry.expected.provenance = "constant-curvature reference";
  return entry;
}

CatalogEntry make_euclidean(int n) {
  if (n < 1) throw std::invalid_argument("euclidean: dimension must be >= 1");
  CatalogEntry entry;
  entry.name = "euclidean";
  entry.kind = EntryKind::IntrinsicMetric;
  entry.dim = n;
  entry.box.ranges.assign(static_cast<size_t>(n), {-2.0, 2.0});
  for (int i = 0; i < n; ++i) entry.coord_names.push_back("x" + std::to_string(i + 1));
  entry.metric = std::make_shared<ExprMetric>(ExprMetric::identity(n));
  for (int i = 0; i < n; ++i) entry.potential_exprs.push_back(ex::var(i));
  entry.expected = {1.0, true, true, true, true, "position field on E^n"};
  return entry;
}

CatalogEntry make_cone_over_curve(const std::vector<ExprPtr>& curve, int n,
                                  int m) {
  int q = m - n + 1;
  if (n < 2) throw std::invalid_argument("cone: chart dimension must be >= 2");
  if (static_cast<int>(curve.size()) != q)
    throw std::invalid_argument("cone: curve must have m-n+1 components");

  // Numerical guard: gamma lies on the unit sphere and is unit speed.
  for (int t = 0; t <= 32; ++t) {
    double s = 0.1 + (3.0 - 0.1) * t / 32.0;
    CoordPoint p({s});
    double norm2 = 0.0, speed2 = 0.0;
    for (const ExprPtr& c : curve) {
      Jet3 j = eval_jet(*c, p);
      norm2 += j.value() * j.value();
      speed2 += j.d1(0) * j.d1(0);
    }
    if (std::abs(norm2 - 1.0) > 1e-8)
      throw std::invalid_argument("cone: curve leaves the unit sphere (|gamma|^2 = " +
                                  std::to_string(norm2) + " at s = " +
                                  std::to_string(s) + ")");
    if (std::abs(speed2 - 1.0) > 1e-8)
      throw std::invalid_argument("cone: curve is not unit speed (|gamma'|^2 = " +
                                  std::to_string(speed2) + " at s = " +
                                  std::to_string(s) + ")");
  }

  std::vector<ExprPtr> comps;
  for (const ExprPtr& c : curve) comps.push_back(ex::mul(c, ex::var(1)));
  for (int i = 1; i < n; ++i) comps.push_back(ex::var(i));

  CatalogEntry entry;
  entry.name = "cone";
  entry.kind = EntryKind::EuclideanImmersion;
  entry.dim = n;
  entry.box.ranges.push_back({0.1, 3.0});
  entry.box.ranges.push_back({0.5, 2.0});  // x2 = 0 excluded
  for (int i = 2; i < n; ++i) entry.box.ranges.push_back({-2.0, 2.0});
  entry.coord_names.push_back("s");
  for (int i = 2; i <= n; ++i) entry.coord_names.push_back("x" + std::to_string(i));
  entry.immersion = Immersion(n, m, std::move(comps));
  entry.expected = {1.0, true, true, true, true, "cone over a unit-sphere curve"};
  return entry;
}

CatalogEntry make_cone(int n, int m) {
  std::vector<ExprPtr> curve;
  curve.push_back(ex::cos(ex::var(0)));
  curve.push_back(ex::sin(ex::var(0)));
  for (int c = 2; c < m - n + 1; ++c) curve.push_back(ex::c(0.0));
  return make_cone_over_curve(curve, n, m);
}

CatalogEntry make_spherical_hypercylinder(int k, int n) {
  if (k < 2 || k > n - 1)
    throw std::invalid_argument(
        "hypercylinder: need 2 <= k <= n-1 (k = 1 degenerates to radius 0)");
  double r = std::sqrt(static_cast<double>(k - 1));
  std::vector<ExprPtr> comps = sphere_embedding(k, r, 0);
  for (int i = k; i < n; ++i) comps.push_back(ex::var(i));

  CatalogEntry entry;
  entry.name = "hypercylinder";
  entry.kind = EntryKind::EuclideanImmersion;
  entry.dim = n;
  entry.box = angular_box(k);
  for (int i = k; i < n; ++i) entry.box.ranges.push_back({-2.0, 2.0});
  entry.coord_names = angle_names(k);
  for (int i = k; i < n; ++i)
    entry.coord_names.push_back("z" + std::to_string(i - k + 1));
  entry.immersion = Immersion(n, n + 1, std::move(comps));
  entry.expected = {1.0, true, false, true, true, "spherical hypercylinder"};
  return entry;
}

CatalogEntry make_product_of_spheres(const std::vector<int>& dims,
                                     const std::vector<double>& radii) {
  if (dims.empty() || dims.size() != radii.size())
    throw std::invalid_argument("sphere-product: need matching dims and radii");
  double ratio0 = 0.0;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 2)
      throw std::invalid_argument("sphere-product: factor dimensions must be >= 2");
    if (radii[i] <= 0)
      throw std::invalid_argument("sphere-product: radii must be positive");
    double ratio = (dims[i] - 1) / (radii[i] * radii[i]);
    if (i == 0)
      ratio0 = ratio;
    else if (std::abs(ratio - ratio0) > 1e-10)
      throw std::invalid_argument(
          "sphere-product: (n_i - 1)/r_i^2 must agree across factors (got " +
          std::to_string(ratio0) + " vs " + std::to_string(ratio) + ")");
  }

  int n = 0;
  for (int d : dims) n += d;
  std::vector<ExprPtr> comps;
  CatalogEntry entry;
  int offset = 0;
  for (size_t f = 0; f < dims.size(); ++f) {
    auto block = sphere_embedding(dims[f], radii[f], offset);
    comps.insert(comps.end(), block.begin(), block.end());
    ChartBox b = angular_box(dims[f]);
    entry.box.ranges.insert(entry.box.ranges.end(), b.ranges.begin(),
                            b.ranges.end());
    auto names = angle_names(dims[f], "t" + std::to_string(f + 1) + "_");
    entry.coord_names.insert(entry.coord_names.end(), names.begin(), names.end());
    offset += dims[f];
  }
  entry.name = "sphere-product";
  entry.kind = EntryKind::EuclideanImmersion;
  entry.dim = n;
  entry.immersion = Immersion(n, n + static_cast<int>(dims.size()), std::move(comps));
  entry.expected = {ratio0, ratio0 > 0, true, true, true,
                    "standard product of spheres"};
  return entry;
}

CatalogEntry make_warped_product(ExprPtr f, const CatalogEntry& fiber,
                                 std::array<double, 2> s_interval) {
  if (fiber.kind != EntryKind::IntrinsicMetric)
    throw std::invalid_argument("warped: fiber must be an intrinsic metric entry");
  auto fiber_metric = std::dynamic_pointer_cast<const ExprMetric>(fiber.metric);
  if (!fiber_metric)
    throw std::invalid_argument("warped: fiber metric must be closed-form");
  if (!(s_interval[0] < s_interval[1]))
    throw std::invalid_argument("warped: empty s-interval");

  bool f_is_identity = true;
  for (int t = 0; t <= 256; ++t) {
    double s = s_interval[0] +
               (s_interval[1] - s_interval[0]) * t / 256.0;
    double fs = eval_value(*f, CoordPoint({s}));
    if (fs <= 1e-12)
      throw std::invalid_argument("warped: warping function vanishes near s = " +
                                  std::to_string(s));
    if (std::abs(fs - s) > 1e-12) f_is_identity = false;
  }

  WarpedProductData wp;
  wp.f = f;
  wp.fiber_metric = fiber_metric;
  wp.fiber_box = fiber.box;
  wp.box.ranges.push_back({s_interval[0], s_interval[1]});
  wp.box.ranges.insert(wp.box.ranges.end(), fiber.box.ranges.begin(),
                       fiber.box.ranges.end());

  CatalogEntry entry;
  entry.name = "warped";
  entry.kind = EntryKind::WarpedProduct;
  entry.dim = fiber.dim + 1;
  entry.box = wp.box;
  entry.coord_names.push_back("s");
  entry.coord_names.insert(entry.coord_names.end(), fiber.coord_names.begin(),
                           fiber.coord_names.end());
  entry.metric = warped_metric(wp);
  entry.warped = std::move(wp);
  for (int i = 0; i < entry.dim; ++i)
    entry.potential_exprs.push_back(i == 0 ? ex::var(0) : ex::c(0.0));

  entry.expected.concurrent_potential = f_is_identity;
  entry.expected.provenance = "warped product I x_f F";
  if (f_is_identity) {
    // Einstein fiber -> the shrinking lambda = 1 case; probe cheaply.
    MetricEval me = fiber_metric->eval(fiber.box.center());
    double resid = g_norm(metric_inverse(me.g),
                          Eigen::MatrixXd(ricci(riemann(me)) -
                                          (entry.dim - 2.0) * me.g));
    if (resid <= 1e-8) {
      entry.expected.lambda = 1.0;
      entry.expected.shrinking = true;
      entry.expected.trivial = true;  // Ricci flat
      entry.expected.gradient = true;
      entry.expected.provenance = "metric cone over an Einstein fiber";
    }
  }
  return entry;
}

CatalogEntry make_hypersphere(int n, double r) {
  if (r <= 0) throw std::invalid_argument("hypersphere: radius must be positive");
  if (n < 2) throw std::invalid_argument("hypersphere: dimension must be >= 2");
  CatalogEntry entry;
  entry.name = "hypersphere";
  entry.kind = EntryKind::EuclideanImmersion;
  entry.dim = n;
  entry.box = angular_box(n);
  entry.coord_names = angle_names(n);
  entry.immersion = Immersion(n, n + 1, sphere_embedding(n, r, 0));
  entry.expected.concurrent_potential = true;
  entry.expected.trivial = true;
  entry.expected.gradient = true;
  entry.expected.provenance = "totally umbilical hypersurface";
  // Recorded as fitter output rather than a hand-entered value.
  std::vector<CoordPoint> pts = sample_points(entry.box, entry.margin, 8, 0);
  double lam = 0.0;
  for (const CoordPoint& p : pts) lam += criterion_lambda_fit(*entry.immersion, p);
  lam /= static_cast<double>(pts.size());
  entry.expected.lambda = lam;
  entry.expected.shrinking = lam > 0;
  return entry;
}

namespace {

double fitted_intrinsic_lambda(const CatalogEntry& e, int samples,
                               uint64_t seed) {
  auto potential = std::make_shared<ExprVectorField>(e.potential_exprs);
  std::vector<CoordPoint> pts = sample_points(e.box, e.margin, samples, seed);
  double lam = 0.0;
  for (const CoordPoint& p : pts) {
    MetricEval me = e.metric->eval(p);
    Eigen::MatrixXd ginv = metric_inverse(me.g);
    Eigen::MatrixXd lie =
        lie_derivative_metric(me, christoffel(me), potential->eval(p));
    Eigen::MatrixXd C = 0.5 * lie + ricci(riemann(me));
    lam += (ginv * C).trace() / me.dim();
  }
  return lam / static_cast<double>(pts.size());
}

}  // namespace

SolitonDatum CatalogEntry::datum(int fit_samples, uint64_t seed) const {
  SolitonDatum d;
  d.manifold = ChartedManifold{box, metric, margin};
  d.concurrent_construction = expected.concurrent_potential;
  if (immersion) {
    if (!d.manifold.metric)
      d.manifold.metric = std::make_shared<InducedMetric>(*immersion);
    d.potential = std::make_shared<TangentialField>(*immersion);
    if (expected.lambda) {
      d.lambda = *expected.lambda;
    } else {
      std::vector<CoordPoint> pts = sample_points(box, margin, fit_samples, seed);
      double lam = 0.0;
      for (const CoordPoint& p : pts) lam += criterion_lambda_fit(*immersion, p);
      d.lambda = lam / static_cast<double>(pts.size());
    }
  } else {
    d.potential = std::make_shared<ExprVectorField>(potential_exprs);
    d.lambda = expected.lambda ? *expected.lambda
                               : fitted_intrinsic_lambda(*this, fit_samples, seed);
  }
  return d;
}

std::vector<CatalogListing> list_catalog() {
  return {
      {"euclidean", "Euclidean chart with the position potential (n=...)",
       "model concurrent field"},
      {"cone", "cone over a unit-speed spherical curve (n=..., m=...)",
       "flat ruled submanifold, lambda = 1"},
      {"hypercylinder", "S^k(sqrt(k-1)) x E^{n-k} in E^{n+1} (k=..., n=...)",
       "shrinking soliton, lambda = 1"},
      {"sphere-product", "S^{n1}(r1) x ... x S^{np}(rp) (dims=..., radii=...)",
       "shrinking soliton, lambda = (n1-1)/r1^2"},
      {"warped", "warped product I x_f F with v = s d/ds (n=...)",
       "metric cone classification"},
      {"hypersphere", "round S^n(r) in E^{n+1} (n=..., r=...)",
       "totally umbilical, trivial soliton"},
  };
}

namespace {

std::map<std::string, std::string> parse_params(const std::string& query) {
  std::map<std::string, std::string> params;
  size_t pos = 0;
  while (pos < query.size()) {
    size_t amp = query.find('&', pos);
    std::string kv = query.substr(pos, amp == std::string::npos ? std::string::npos
                                                                : amp - pos);
    size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("malformed target parameter '" + kv + "'");
    params[kv.substr(0, eq)] = kv.substr(eq + 1);
    if (amp == std::string::npos) break;
    pos = amp + 1;
  }
  return params;
}

int param_int(const std::map<std::string, std::string>& params,
              const std::string& key, int fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  return std::stoi(it->second);
}

double param_double(const std::map<std::string, std::string>& params,
                    const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  return std::stod(it->second);
}

template <typename T, typename Parse>
std::vector<T> param_list(const std::map<std::string, std::string>& params,
                          const std::string& key, std::vector<T> fallback,
                          Parse parse) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::vector<T> out;
  std::stringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse(tok));
  return out;
}

}  // namespace

CatalogEntry resolve_target(const std::string& target) {
  std::string name = target;
  std::map<std::string, std::string> params;
  size_t q = target.find('?');
  if (q != std::string::npos) {
    name = target.substr(0, q);
    params = parse_params(target.substr(q + 1));
  }
  if (name == "euclidean") return make_euclidean(param_int(params, "n", 3));
  if (name == "cone")
    return make_cone(param_int(params, "n", 2), param_int(params, "m", 3));
  if (name == "hypercylinder")
    return make_spherical_hypercylinder(param_int(params, "k", 2),
                                        param_int(params, "n", 3));
  if (name == "sphere-product") {
    auto dims = param_list<int>(params, "dims", {2, 2},
                                [](const std::string& s) { return std::stoi(s); });
    auto radii = param_list<double>(
        params, "radii", std::vector<double>(dims.size(), 1.0),
        [](const std::string& s) { return std::stod(s); });
    return make_product_of_spheres(dims, radii);
  }
  if (name == "warped") {
    int n = param_int(params, "n", 3);
    if (n < 3) throw std::invalid_argument("warped: need n >= 3");
    CatalogEntry fiber = make_round_sphere_metric(n - 1, 1.0);
    return make_warped_product(ex::var(0), fiber, {0.5, 3.0});
  }
  if (name == "hypersphere")
    return make_hypersphere(param_int(params, "n", 2),
                            param_double(params, "r", 1.0));
  throw std::invalid_argument("unknown catalog target '" + name + "'");
}

std::vector<CatalogEntry> default_suite_entries() {
  std::vector<CatalogEntry> entries;
  for (int n : {2, 3}) {
    CatalogEntry e = make_euclidean(n);
    e.name += "?n=" + std::to_string(n);
    entries.push_back(std::move(e));
  }
  entries.push_back(make_cone(2, 3));
  for (auto [k, n] : {std::pair{2, 3}, {2, 4}, {3, 4}}) {
    CatalogEntry e = make_spherical_hypercylinder(k, n);
    e.name += "?k=" + std::to_string(k) + "&n=" + std::to_string(n);
    entries.push_back(std::move(e));
  }
  {
    CatalogEntry e = make_product_of_spheres({2, 2}, {1.0, 1.0});
    e.name += "?dims=2,2&radii=1,1";
    entries.push_back(std::move(e));
    CatalogEntry e2 = make_product_of_spheres({3, 2}, {std::sqrt(2.0), 1.0});
    e2.name += "?dims=3,2";
    entries.push_back(std::move(e2));
  }
  {
    CatalogEntry e = make_hypersphere(2, 1.0);
    e.name += "?n=2&r=1";
    entries.push_back(std::move(e));
    CatalogEntry e2 = make_hypersphere(3, 2.0);
    e2.name += "?n=3&r=2";
    entries.push_back(std::move(e2));
  }
  for (int n : {3, 4}) {
    CatalogEntry fiber = make_round_sphere_metric(n - 1, 1.0);
    CatalogEntry e = make_warped_product(ex::var(0), fiber, {0.5, 3.0});
    e.name += "?n=" + std::to_string(n);
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace solitonlab
