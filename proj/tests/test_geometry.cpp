#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fd_oracle.hpp"
#include "solitonlab/catalog.hpp"
#include "solitonlab/geometry.hpp"

using namespace solitonlab;
using namespace solitonlab::testing;

namespace {

std::vector<std::string> vars(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("v" + std::to_string(i));
  return out;
}

ExprPtr pe(const std::string& src, int n) {
  ParseResult r = parse_expr(src, vars(n));
  REQUIRE(r.ok());
  return r.expr;
}

/// ds^2 + f(s)^2 dt^2 as a 2-d ExprMetric with f given as text in v0.
ExprMetric surface_of_revolution(const std::string& f_squared) {
  std::vector<std::vector<ExprPtr>> comp(2, std::vector<ExprPtr>(2));
  comp[0][0] = pe("1", 2);
  comp[1][1] = pe(f_squared, 2);
  return ExprMetric(2, std::move(comp));
}

/// MetricEval rebuilt from finite differences of g alone.
MetricEval fd_metric_eval(const MetricField& metric, const CoordPoint& p) {
  int n = metric.dim();
  MetricEval out;
  out.g = metric.eval(p).g;
  out.dg.resize(static_cast<size_t>(n));
  out.d2g.resize(static_cast<size_t>(n),
                 std::vector<Eigen::MatrixXd>(static_cast<size_t>(n)));
  auto at = [&](const CoordPoint& q) { return metric.eval(q).g; };
  double h = 1e-4;
  for (int k = 0; k < n; ++k)
    out.dg[static_cast<size_t>(k)] =
        (at(shifted(p, k, h)) - at(shifted(p, k, -h))) / (2 * h);
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      Eigen::MatrixXd d2;
      if (k == l) {
        d2 = (at(shifted(p, k, h)) - 2.0 * out.g + at(shifted(p, k, -h))) /
             (h * h);
      } else {
        d2 = (at(shifted(shifted(p, k, h), l, h)) -
              at(shifted(shifted(p, k, h), l, -h)) -
              at(shifted(shifted(p, k, -h), l, h)) +
              at(shifted(shifted(p, k, -h), l, -h))) /
             (4 * h * h);
      }
      out.d2g[static_cast<size_t>(k)][static_cast<size_t>(l)] = d2;
    }
  return out;
}

}  // namespace

TEST_CASE("flat space: everything vanishes") {
  ExprMetric g = ExprMetric::identity(3);
  CurvatureBundle cb = curvature_bundle(g, CoordPoint{0.4, -1.0, 2.0});
  for (const auto& gamma_k : cb.gamma) CHECK(gamma_k.norm() == 0.0);
  for (double r : cb.riemann.up) CHECK(r == 0.0);
  CHECK(cb.ricci.norm() == 0.0);
  CHECK(cb.scalar == 0.0);
}

TEST_CASE("surface of revolution f = s: nonzero Christoffel symbols") {
  ExprMetric g = surface_of_revolution("v0 ^ 2");
  MetricEval me = g.eval(CoordPoint{2.0, 0.3});
  Christoffel gamma = christoffel(me);
  CHECK(gamma[0](1, 1) == doctest::Approx(-2.0));   // Gamma^s_tt = -s
  CHECK(gamma[1](0, 1) == doctest::Approx(0.5));    // Gamma^t_st = 1/s
  CHECK(gamma[1](1, 0) == doctest::Approx(0.5));
  CHECK(gamma[0](0, 0) == doctest::Approx(0.0));

  // The flat cone: curvature vanishes identically.
  CurvatureBundle cb = curvature_bundle(g, CoordPoint{2.0, 0.3});
  for (double r : cb.riemann.up) CHECK(std::abs(r) < 1e-14);
}

TEST_CASE("round sphere: Ric = ((d-1)/r^2) g and constant scalar curvature") {
  for (auto [d, r] : {std::pair{2, 1.0}, {2, 3.0}, {3, 2.0}}) {
    CatalogEntry sphere = make_round_sphere_metric(d, r);
    for (const CoordPoint& p : sample_points(sphere.box, 0.05, 8, 5)) {
      CurvatureBundle cb = curvature_bundle(*sphere.metric, p);
      double c = (d - 1) / (r * r);
      CHECK(g_norm(cb.g_inv, Eigen::MatrixXd(cb.ricci - c * cb.metric.g)) <
            1e-12);
      // tau = (1/2) trace_g Ric = d(d-1)/(2 r^2), the frame-pair sum.
      CHECK(cb.scalar == doctest::Approx(d * (d - 1) / (2 * r * r)));
    }
  }
}

TEST_CASE("sectional curvature of S^2(r) is 1/r^2 for any plane basis") {
  CatalogEntry sphere = make_round_sphere_metric(2, 2.0);
  CurvatureBundle cb = curvature_bundle(*sphere.metric, CoordPoint{1.1, 0.7});
  Eigen::VectorXd X(2), Y(2);
  X << 1.0, 0.3;
  Y << -0.2, 1.4;
  CHECK(sectional_curvature(cb, X, Y) == doctest::Approx(0.25));
  CHECK_THROWS(sectional_curvature(cb, X, Eigen::VectorXd(2.0 * X)));
}

TEST_CASE("warped product: K(X, d/ds) = -f''/f") {
  // f = s^2 is outside the catalog: K(X, v) = -2/s^2.
  ExprMetric g = surface_of_revolution("v0 ^ 4");
  double s = 1.3;
  CurvatureBundle cb = curvature_bundle(g, CoordPoint{s, 0.4});
  Eigen::VectorXd radial(2), fiber(2);
  radial << 1.0, 0.0;
  fiber << 0.0, 1.0;
  CHECK(sectional_curvature(cb, fiber, radial) ==
        doctest::Approx(-2.0 / (s * s)));
}

TEST_CASE("first Bianchi identity and metric compatibility") {
  CatalogEntry sphere = make_round_sphere_metric(3, 1.5);
  for (const CoordPoint& p : sample_points(sphere.box, 0.05, 4, 3)) {
    CurvatureBundle cb = curvature_bundle(*sphere.metric, p);
    int n = 3;
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            CHECK(std::abs(cb.riemann.up_at(l, i, j, k) +
                           cb.riemann.up_at(l, j, k, i) +
                           cb.riemann.up_at(l, k, i, j)) < 1e-12);
    // nabla_k g_ij = d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il = 0
    for (int k = 0; k < n; ++k) {
      Eigen::MatrixXd nabla_g = cb.metric.dg[static_cast<size_t>(k)];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l)
            nabla_g(i, j) -= cb.gamma[static_cast<size_t>(l)](k, i) *
                                 cb.metric.g(l, j) +
                             cb.gamma[static_cast<size_t>(l)](k, j) *
                                 cb.metric.g(i, l);
      CHECK(nabla_g.norm() < 1e-12);
    }
  }
}

TEST_CASE("Riemann antisymmetry and pair symmetry in the lowered tensor") {
  CatalogEntry sphere = make_round_sphere_metric(3, 1.0);
  CoordPoint p{0.9, 1.3, 0.5};
  RiemannTensor rm = curvature_bundle(*sphere.metric, p).riemann;
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          CHECK(rm.low_at(l, i, j, k) ==
                doctest::Approx(-rm.low_at(l, j, i, k)).epsilon(1e-12));
          CHECK(rm.low_at(l, i, j, k) ==
                doctest::Approx(rm.low_at(j, k, l, i)).epsilon(1e-12));
        }
}

TEST_CASE("jet-based Christoffel and Riemann match the FD oracle") {
  std::vector<CatalogEntry> targets;
  targets.push_back(make_round_sphere_metric(2, 1.0));
  targets.push_back(make_round_sphere_metric(3, 2.0));
  for (CatalogEntry& entry : default_suite_entries())
    targets.push_back(std::move(entry));

  for (CatalogEntry& entry : targets) {
    if (entry.immersion && !entry.metric)
      entry.metric = std::make_shared<InducedMetric>(*entry.immersion);
    const MetricField& metric = *entry.metric;
    for (const CoordPoint& p : sample_points(entry.box, 0.1, 3, 17)) {
      MetricEval exact = metric.eval(p);
      MetricEval fd = fd_metric_eval(metric, p);
      Christoffel ge = christoffel(exact), gf = christoffel(fd);
      RiemannTensor re = riemann(exact), rf = riemann(fd);
      int n = metric.dim();
      for (int k = 0; k < n; ++k)
        CHECK((ge[static_cast<size_t>(k)] - gf[static_cast<size_t>(k)])
                  .cwiseAbs()
                  .maxCoeff() < 1e-5);
      for (size_t i = 0; i < re.up.size(); ++i)
        CHECK(rel_err(re.up[i], rf.up[i]) < 1e-5);
    }
  }
}

TEST_CASE("Lie derivative of g along the position field is 2g") {
  ExprMetric g = ExprMetric::identity(3);
  CoordPoint p{0.5, -0.8, 1.2};
  MetricEval me = g.eval(p);
  std::vector<ExprPtr> position = {pe("v0", 3), pe("v1", 3), pe("v2", 3)};
  Eigen::MatrixXd lie =
      lie_derivative_metric(me, christoffel(me), eval_vector_field(position, p));
  CHECK((lie - 2.0 * me.g).norm() < 1e-14);
}

TEST_CASE("covariant derivative, gradient, norms and frames") {
  ExprMetric g = ExprMetric::identity(2);
  CoordPoint p{1.0, 2.0};
  MetricEval me = g.eval(p);
  Christoffel gamma = christoffel(me);

  std::vector<ExprPtr> v = {pe("v0 ^ 2", 2), pe("v0 * v1", 2)};
  Eigen::VectorXd Z(2);
  Z << 1.0, 0.0;
  Eigen::VectorXd dv = covariant_derivative(gamma, eval_vector_field(v, p), Z);
  CHECK(dv[0] == doctest::Approx(2.0));  // d(v0^2)/dv0 = 2 v0
  CHECK(dv[1] == doctest::Approx(2.0));  // d(v0 v1)/dv0 = v1

  Eigen::VectorXd grad = gradient(g, p, *pe("v0 ^ 2 + v1", 2));
  CHECK(grad[0] == doctest::Approx(2.0));
  CHECK(grad[1] == doctest::Approx(1.0));

  Eigen::MatrixXd g2(2, 2);
  g2 << 4.0, 0.0, 0.0, 9.0;
  CHECK(g_norm(metric_inverse(g2), g2) == doctest::Approx(std::sqrt(2.0)));
  Eigen::MatrixXd frame = orthonormal_frame(g2);
  CHECK((frame.transpose() * g2 * frame - Eigen::MatrixXd::Identity(2, 2))
            .norm() < 1e-12);
}

TEST_CASE("singular metrics are rejected") {
  Eigen::MatrixXd g(2, 2);
  g << 1.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(metric_inverse(g), SingularMetricError);
}
