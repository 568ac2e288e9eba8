#include "solitonlab/soliton.hpp"

#include <cmath>
#include <limits>

namespace solitonlab {

SolitonResidual soliton_residual(const MetricField& metric,
                                 const VectorFieldSource& potential,
                                 const CoordPoint& p, double lambda) {
  MetricEval me = metric.eval(p);
  Christoffel gamma = christoffel(me);
  VectorFieldData xi = potential.eval(p);
  Eigen::MatrixXd lie = lie_derivative_metric(me, gamma, xi);
  Eigen::MatrixXd ric = ricci(riemann(me));
  SolitonResidual out;
  out.matrix = 0.5 * lie + ric - lambda * me.g;
  out.norm = g_norm(metric_inverse(me.g), out.matrix);
  return out;
}

double concurrent_residual(const MetricField& metric,
                           const VectorFieldSource& potential,
                           const CoordPoint& p) {
  MetricEval me = metric.eval(p);
  Christoffel gamma = christoffel(me);
  VectorFieldData v = potential.eval(p);
  int n = me.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd Z = Eigen::VectorXd::Zero(n);
    Z(i) = 1.0;
    Eigen::VectorXd r = covariant_derivative(gamma, v, Z) - Z;
    worst = std::max(worst, g_norm(me.g, r));
  }
  return worst;
}

std::string to_string(SolitonClass c) {
  switch (c) {
    case SolitonClass::Shrinking: return "shrinking";
    case SolitonClass::Steady: return "steady";
    case SolitonClass::Expanding: return "expanding";
  }
  return "?";
}

SolitonReport classify(const SolitonDatum& datum,
                       const std::vector<CoordPoint>& points,
                       double einstein_tol, double gradient_tol) {
  if (points.empty())
    throw std::invalid_argument("classify: needs at least one sample point");
  const MetricField& metric = *datum.manifold.metric;
  SolitonReport rep;
  rep.sample_count = static_cast<int>(points.size());
  rep.lambda = datum.lambda;
  rep.classification = datum.lambda > 0.0   ? SolitonClass::Shrinking
                       : datum.lambda < 0.0 ? SolitonClass::Expanding
                                            : SolitonClass::Steady;

  struct PointData {
    MetricEval me;
    Eigen::MatrixXd g_inv, ric;
  };
  std::vector<PointData> pd;
  pd.reserve(points.size());
  double einstein_c = 0.0;
  for (const CoordPoint& p : points) {
    SolitonResidual sr = soliton_residual(metric, *datum.potential, p,
                                          datum.lambda);
    rep.soliton_norms.push_back(sr.norm);
    rep.concurrent_norms.push_back(
        concurrent_residual(metric, *datum.potential, p));
    PointData d;
    d.me = metric.eval(p);
    d.g_inv = metric_inverse(d.me.g);
    d.ric = ricci(riemann(d.me));
    einstein_c += (d.g_inv * d.ric).trace() / d.me.dim();
    pd.push_back(std::move(d));
  }
  einstein_c /= static_cast<double>(points.size());
  rep.einstein_constant = einstein_c;
  for (const PointData& d : pd)
    rep.einstein_norms.push_back(
        g_norm(d.g_inv, Eigen::MatrixXd(d.ric - einstein_c * d.me.g)));

  double sum = 0.0;
  for (double v : rep.soliton_norms) {
    rep.max_soliton = std::max(rep.max_soliton, v);
    sum += v;
  }
  rep.mean_soliton = sum / static_cast<double>(points.size());
  for (double v : rep.concurrent_norms)
    rep.max_concurrent = std::max(rep.max_concurrent, v);
  for (double v : rep.einstein_norms)
    rep.max_einstein = std::max(rep.max_einstein, v);
  rep.trivial = rep.max_einstein <= einstein_tol;

  if (datum.concurrent_construction) {
    rep.gradient_checked = true;
    double worst = 0.0;
    for (size_t s = 0; s < points.size(); ++s) {
      const CoordPoint& p = points[s];
      const MetricEval& me = pd[s].me;
      VectorFieldData xi = datum.potential->eval(p);
      int n = me.dim();
      // d_k phi with phi = (1/2) g(xi, xi)
      Eigen::VectorXd dphi(n);
      Eigen::VectorXd gxi = me.g * xi.value;
      for (int k = 0; k < n; ++k)
        dphi(k) = 0.5 * xi.value.dot(me.dg[static_cast<size_t>(k)] * xi.value) +
                  gxi.dot(xi.jacobian.row(k));
      Eigen::VectorXd grad = pd[s].g_inv * dphi;
      worst = std::max(worst, g_norm(me.g, Eigen::VectorXd(xi.value - grad)));
    }
    rep.max_gradient_residual = worst;
    rep.gradient = worst <= gradient_tol;
  }
  return rep;
}

std::shared_ptr<ExprMetric> warped_metric(const WarpedProductData& wp) {
  int fdim = wp.fiber_metric->dim();
  int n = fdim + 1;
  std::vector<std::vector<ExprPtr>> comp(
      static_cast<size_t>(n), std::vector<ExprPtr>(static_cast<size_t>(n)));
  comp[0][0] = ex::c(1.0);
  ExprPtr f2 = ex::power(wp.f, 2);
  for (int a = 0; a < fdim; ++a)
    for (int b = a; b < fdim; ++b) {
      const ExprPtr& gf = wp.fiber_metric->component(a, b);
      if (!gf) continue;
      comp[static_cast<size_t>(a + 1)][static_cast<size_t>(b + 1)] =
          ex::mul(f2, shift_vars(gf, 1));
    }
  return std::make_shared<ExprMetric>(n, std::move(comp));
}

std::shared_ptr<ExprVectorField> radial_field(int dim) {
  std::vector<ExprPtr> comps(static_cast<size_t>(dim));
  comps[0] = ex::var(0);
  for (int i = 1; i < dim; ++i) comps[static_cast<size_t>(i)] = ex::c(0.0);
  return std::make_shared<ExprVectorField>(std::move(comps));
}

Theorem31Verdict theorem31_verdict(const WarpedProductData& wp, int samples,
                                   uint64_t seed, double tol) {
  Theorem31Verdict v;
  auto metric = warped_metric(wp);
  int n = metric->dim();
  auto field = radial_field(n);

  std::vector<CoordPoint> pts = sample_points(wp.box, wp.margin, samples, seed);
  for (const CoordPoint& p : pts) {
    v.max_soliton_residual = std::max(
        v.max_soliton_residual, soliton_residual(*metric, *field, p, 1.0).norm);
    v.max_concurrent_residual = std::max(
        v.max_concurrent_residual, concurrent_residual(*metric, *field, p));
  }
  v.soliton_pass = v.max_soliton_residual <= tol;

  // Linear fit f ~ a s + b over the s-interval.
  {
    int count = std::max(samples, 16);
    double lo = wp.box.lo(0) + wp.margin * wp.box.width(0);
    double hi = wp.box.hi(0) - wp.margin * wp.box.width(0);
    double sxx = 0, sx = 0, sy = 0, sxy = 0;
    std::vector<std::pair<double, double>> data;
    for (int i = 0; i < count; ++i) {
      double s = lo + (hi - lo) * i / (count - 1);
      double fs = eval_value(*wp.f, CoordPoint({s}));
      data.emplace_back(s, fs);
      sx += s; sy += fs; sxx += s * s; sxy += s * fs;
    }
    double det = count * sxx - sx * sx;
    double a = (count * sxy - sx * sy) / det;
    double b = (sxx * sy - sx * sxy) / det;
    double rss = 0.0;
    for (auto [s, fs] : data) {
      double r = fs - (a * s + b);
      rss += r * r;
    }
    v.warp_fit_residual = std::sqrt(rss / count);
    v.warp_offset_ratio = std::abs(a) > 0 ? std::abs(b / a)
                                          : std::numeric_limits<double>::infinity();
    v.warping_linear = v.warp_fit_residual <= 1e-6 && v.warp_offset_ratio <= 1e-6;
  }

  // Fiber Einstein condition Ric_F = (n-2) g_F.
  {
    std::vector<CoordPoint> fpts =
        sample_points(wp.fiber_box, wp.margin, samples, seed + 1);
    for (const CoordPoint& p : fpts) {
      MetricEval me = wp.fiber_metric->eval(p);
      Eigen::MatrixXd ric = ricci(riemann(me));
      double r = g_norm(metric_inverse(me.g),
                        Eigen::MatrixXd(ric - (n - 2.0) * me.g));
      v.max_fiber_einstein_residual = std::max(v.max_fiber_einstein_residual, r);
    }
    v.fiber_einstein_pass = v.max_fiber_einstein_residual <= tol;
  }
  return v;
}

}  // namespace solitonlab
