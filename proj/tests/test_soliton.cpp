#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "solitonlab/catalog.hpp"
#include "solitonlab/soliton.hpp"

using namespace solitonlab;

namespace {

ExprPtr pe(const std::string& src, int n) {
  std::vector<std::string> vars;
  for (int i = 0; i < n; ++i) vars.push_back("v" + std::to_string(i));
  ParseResult r = parse_expr(src, vars);
  REQUIRE(r.ok());
  return r.expr;
}

SolitonDatum euclidean_datum(int n, double lambda) {
  CatalogEntry e = make_euclidean(n);
  SolitonDatum d = e.datum();
  d.lambda = lambda;
  return d;
}

}  // namespace

TEST_CASE("E^n with the position field solves the equation at lambda = 1") {
  SolitonDatum d = euclidean_datum(3, 1.0);
  for (const CoordPoint& p : sample_points(d.manifold.box, 0.05, 8, 1)) {
    SolitonResidual r =
        soliton_residual(*d.manifold.metric, *d.potential, p, d.lambda);
    CHECK(r.norm < 1e-14);
    CHECK(concurrent_residual(*d.manifold.metric, *d.potential, p) < 1e-14);
  }
}

TEST_CASE("wrong lambda leaves the residual |lambda - 1| sqrt(n)") {
  // (1/2) L_v g + Ric - lambda g = (1 - lambda) g on flat space.
  for (double lambda : {0.0, -1.0}) {
    SolitonDatum d = euclidean_datum(2, lambda);
    CoordPoint p{0.4, -0.9};
    SolitonResidual r =
        soliton_residual(*d.manifold.metric, *d.potential, p, lambda);
    CHECK(r.norm ==
          doctest::Approx(std::abs(1.0 - lambda) * std::sqrt(2.0)));
  }
}

TEST_CASE("a non-concurrent field fails the concurrency check") {
  CatalogEntry e = make_euclidean(2);
  auto metric = e.metric;
  ExprVectorField doubled({pe("2 * v0", 2), pe("2 * v1", 2)});
  CHECK(concurrent_residual(*metric, doubled, CoordPoint{0.3, 0.8}) ==
        doctest::Approx(1.0));  // |nabla_Z v - Z| = |Z| per direction
}

TEST_CASE("classification: shrinking/steady/expanding plus triviality") {
  CHECK(to_string(SolitonClass::Shrinking) == "shrinking");
  CHECK(to_string(SolitonClass::Steady) == "steady");
  CHECK(to_string(SolitonClass::Expanding) == "expanding");

  SolitonDatum d = euclidean_datum(2, 1.0);
  std::vector<CoordPoint> pts = sample_points(d.manifold.box, 0.05, 16, 0);
  SolitonReport r = classify(d, pts);
  CHECK(r.classification == SolitonClass::Shrinking);
  CHECK(r.trivial);  // flat space is Einstein with c = 0
  CHECK(r.einstein_constant == doctest::Approx(0.0));
  CHECK(r.gradient_checked);
  CHECK(r.gradient);
  CHECK(r.max_soliton < 1e-12);
}

TEST_CASE("hypercylinder datum: shrinking but non-trivial") {
  CatalogEntry e = make_spherical_hypercylinder(2, 3);
  SolitonDatum d = e.datum();
  std::vector<CoordPoint> pts = sample_points(e.box, 0.05, 16, 0);
  SolitonReport r = classify(d, pts);
  CHECK(r.lambda == doctest::Approx(1.0));
  CHECK(r.classification == SolitonClass::Shrinking);
  CHECK_FALSE(r.trivial);
  CHECK(r.max_soliton < 1e-10);
  CHECK(r.gradient);
}

TEST_CASE("warped metric assembles ds^2 + f(s)^2 g_F") {
  WarpedProductData wp;
  wp.f = pe("v0 ^ 2", 1);
  auto fiber = std::make_shared<ExprMetric>(ExprMetric::identity(2));
  wp.fiber_metric = fiber;
  wp.fiber_box.ranges = {{-1.0, 1.0}, {-1.0, 1.0}};
  wp.box.ranges = {{0.5, 2.0}, {-1.0, 1.0}, {-1.0, 1.0}};
  std::shared_ptr<ExprMetric> g = warped_metric(wp);
  CoordPoint p{1.5, 0.2, -0.4};
  MetricEval me = g->eval(p);
  double f2 = std::pow(1.5, 4);
  CHECK(me.g(0, 0) == 1.0);
  CHECK(me.g(1, 1) == doctest::Approx(f2));
  CHECK(me.g(2, 2) == doctest::Approx(f2));
  CHECK(me.g(0, 1) == 0.0);

  VectorFieldData v = radial_field(3)->eval(p);
  CHECK(v.value[0] == doctest::Approx(1.5));
  CHECK(v.value[1] == 0.0);
  CHECK(v.jacobian(0, 0) == 1.0);
}

TEST_CASE("metric cone over the Einstein fiber passes the full verdict") {
  for (int n : {3, 4}) {
    CatalogEntry fiber = make_round_sphere_metric(n - 1, 1.0);
    CatalogEntry cone = make_warped_product(pe("v0", 1), fiber, {0.5, 3.0});
    REQUIRE(cone.warped.has_value());
    Theorem31Verdict v = theorem31_verdict(*cone.warped, 32, 0);
    CHECK(v.pass());
    CHECK(v.max_soliton_residual < 1e-8);
    CHECK(v.max_concurrent_residual < 1e-8);
    CHECK(v.warp_fit_residual < 1e-12);
    CHECK(v.max_fiber_einstein_residual < 1e-8);
  }
}

TEST_CASE("perturbed warped products fail loudly") {
  CatalogEntry fiber = make_round_sphere_metric(2, 1.0);

  // f = s^2 breaks both linearity and the soliton equation.
  CatalogEntry bent = make_warped_product(pe("v0 ^ 2", 1), fiber, {0.5, 3.0});
  Theorem31Verdict vb = theorem31_verdict(*bent.warped, 32, 0);
  CHECK_FALSE(vb.pass());
  CHECK(vb.max_soliton_residual > 0.05);
  CHECK_FALSE(vb.warping_linear);

  // Fiber S^2(2) is Einstein with the wrong constant for n = 3.
  CatalogEntry wrong_fiber =
      make_warped_product(pe("v0", 1), make_round_sphere_metric(2, 2.0),
                          {0.5, 3.0});
  Theorem31Verdict vf = theorem31_verdict(*wrong_fiber.warped, 32, 0);
  CHECK_FALSE(vf.fiber_einstein_pass);
  CHECK(vf.max_fiber_einstein_residual > 0.05);
  CHECK(vf.max_soliton_residual > 0.05);
}

TEST_CASE("gradient check distinguishes gradient from rotational fields") {
  CatalogEntry e = make_euclidean(2);
  SolitonDatum d = e.datum();
  // Rotation field: solves nothing, and is not the gradient of its
  // half-norm; classify must report gradient = false.
  d.potential = std::make_shared<ExprVectorField>(
      std::vector<ExprPtr>{pe("0 - v1", 2), pe("v0", 2)});
  d.concurrent_construction = true;  // force the gradient diagnostic on
  std::vector<CoordPoint> pts = sample_points(e.box, 0.05, 8, 3);
  SolitonReport r = classify(d, pts);
  CHECK(r.gradient_checked);
  CHECK_FALSE(r.gradient);
}
