// End-to-end acceptance gate.  Each test case prints one line so the
// ctest log shows exactly which guarantees of the verification lab held.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "expr_fuzz.hpp"
#include "fd_oracle.hpp"
#include "solitonlab/descriptor.hpp"
#include "solitonlab/runner.hpp"

using namespace solitonlab;
using namespace solitonlab::testing;

namespace {

void report(int number, const char* title, bool ok) {
  std::printf("[acceptance %2d] %-58s %s\n", number, title,
              ok ? "PASS" : "FAIL");
  CHECK_MESSAGE(ok, "criterion ", number, ": ", title);
}

std::vector<CoordPoint> points64(const CatalogEntry& e) {
  return sample_points(e.box, e.margin, 64, 0);
}

double max_criterion_residual(const CatalogEntry& e, double lambda) {
  double worst = 0.0;
  for (const CoordPoint& p : points64(e))
    worst = std::max(
        worst, soliton_criterion_residual(*e.immersion, p, lambda).norm);
  return worst;
}

ExprPtr pe1(const std::string& src) {
  ParseResult r = parse_expr(src, {"s"});
  REQUIRE(r.ok());
  return r.expr;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(SOLITONLAB_CLI_PATH) + " " + args;
  return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("1: hypercylinders solve the criterion with lambda = 1") {
  bool ok = true;
  for (auto [k, n] : {std::pair{2, 3}, {2, 4}, {3, 4}})
    ok = ok &&
         max_criterion_residual(make_spherical_hypercylinder(k, n), 1.0) <= 1e-8;
  report(1, "hypercylinders S^k(sqrt(k-1)) x E^{n-k}, lambda = 1", ok);
}

TEST_CASE("2: products of spheres pass; mismatched radii are rejected") {
  bool ok =
      max_criterion_residual(make_product_of_spheres({2, 2}, {1.0, 1.0}), 1.0) <=
      1e-8;
  ok = ok && max_criterion_residual(
                 make_product_of_spheres({3, 2}, {std::sqrt(2.0), 1.0}), 1.0) <=
                 1e-8;
  bool rejected = false;
  try {
    make_product_of_spheres({2, 2}, {1.0, 2.0});
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  report(2, "sphere products at lambda = 1; S^2(1) x S^2(2) rejected",
         ok && rejected);
}

TEST_CASE("3: the circular cone is flat with a purely tangential field") {
  CatalogEntry cone = make_cone(2, 3);
  InducedMetric metric(*cone.immersion);
  bool ok = true;
  for (const CoordPoint& p : points64(cone)) {
    CurvatureBundle cb = curvature_bundle(metric, p);
    double riemann_max = 0.0;
    for (double r : cb.riemann.low) riemann_max = std::max(riemann_max, std::abs(r));
    ok = ok && riemann_max <= 1e-8;
    ok = ok && concurrent_split(*cone.immersion, p).v_perp.norm() <= 1e-10;
    ok = ok && soliton_criterion_residual(*cone.immersion, p, 1.0).norm <= 1e-8;
  }
  report(3, "cone over (cos s, sin s): flat, v normal-free, lambda = 1", ok);
}

TEST_CASE("4: metric cones over Einstein fibers, with failing controls") {
  bool ok = true;
  for (int n : {3, 4}) {
    CatalogEntry cone = make_warped_product(
        pe1("s"), make_round_sphere_metric(n - 1, 1.0), {0.5, 3.0});
    Theorem31Verdict v = theorem31_verdict(*cone.warped, 64, 0);
    ok = ok && v.max_concurrent_residual <= 1e-8 &&
         v.max_soliton_residual <= 1e-8 && v.max_fiber_einstein_residual <= 1e-8;

    // Ricci flatness and K(X, v) = 0 for 20 random fiber-orthogonal X.
    SampleRng rng(40 + n);
    std::vector<CoordPoint> pts = sample_points(cone.box, cone.margin, 20, 4);
    for (const CoordPoint& p : pts) {
      CurvatureBundle cb = curvature_bundle(*cone.metric, p);
      ok = ok && g_norm(cb.g_inv, cb.ricci) <= 1e-8;
      Eigen::VectorXd radial = Eigen::VectorXd::Zero(n);
      radial[0] = 1.0;
      Eigen::VectorXd X(n);
      X[0] = 0.0;  // g-orthogonal to s d/ds
      for (int i = 1; i < n; ++i) X[i] = rng.uniform(-1.0, 1.0);
      ok = ok && std::abs(sectional_curvature(cb, X, radial)) <= 1e-8;
    }
  }

  CatalogEntry bent = make_warped_product(
      pe1("s ^ 2"), make_round_sphere_metric(2, 1.0), {0.5, 3.0});
  Theorem31Verdict vb = theorem31_verdict(*bent.warped, 64, 0);
  CatalogEntry wrong = make_warped_product(
      pe1("s"), make_round_sphere_metric(2, 2.0), {0.5, 3.0});
  Theorem31Verdict vw = theorem31_verdict(*wrong.warped, 64, 0);
  ok = ok && vb.max_soliton_residual >= 0.05 &&
       vw.max_fiber_einstein_residual >= 0.05 && vw.max_soliton_residual >= 0.05;

  report(4, "warped f = s, fiber S^{n-1}(1); controls fail by >= 0.05", ok);
}

TEST_CASE("5: no steady or expanding soliton on concurrent catalog data") {
  bool ok = true;
  for (const CatalogEntry& e : default_suite_entries()) {
    if (!e.expected.concurrent_potential) continue;
    SolitonDatum d = e.datum();
    for (const CoordPoint& p : points64(e))
      for (double lambda : {0.0, -1.0}) {
        double res =
            soliton_residual(*d.manifold.metric, *d.potential, p, lambda).norm;
        ok = ok && res >= 0.1;
      }
  }
  report(5, "residual >= 0.1 at every point for lambda = 0 and -1", ok);
}

TEST_CASE("6: intrinsic and extrinsic pipelines agree pointwise") {
  bool ok = true;
  double worst = 0.0;
  for (const CatalogEntry& e : default_suite_entries()) {
    if (!e.immersion) continue;
    SolitonDatum d = e.datum();
    for (const CoordPoint& p : points64(e)) {
      double intrinsic =
          soliton_residual(*d.manifold.metric, *d.potential, p, d.lambda).norm;
      double extrinsic =
          soliton_criterion_residual(*e.immersion, p, d.lambda).norm;
      worst = std::max(worst, std::abs(intrinsic - extrinsic));
    }
  }
  ok = worst <= 1e-8;
  report(6, "|intrinsic - extrinsic residual| <= 1e-8, 64 pts/immersion", ok);
}

TEST_CASE("7: principal curvatures satisfy the quadratic, two-root split") {
  bool ok = true;
  for (const CatalogEntry& e :
       {make_hypersphere(2, 1.0), make_hypersphere(3, 2.0),
        make_spherical_hypercylinder(2, 3), make_spherical_hypercylinder(3, 4)}) {
    SolitonDatum d = e.datum();
    double sign = hypersurface_orientation(*e.immersion, e.box.center());
    for (const CoordPoint& p : points64(e)) {
      PrincipalCurvatureReport pc =
          principal_curvature_check(*e.immersion, p, d.lambda, sign);
      ok = ok && pc.max_quadratic_residual <= 1e-6 && pc.two_root_structure;
    }
  }

  // Hypercylinder root structure: {0, n alpha + rho} with multiplicities
  // {n - k, k}.
  for (auto [k, n] : {std::pair{2, 3}, {2, 4}, {3, 4}}) {
    CatalogEntry e = make_spherical_hypercylinder(k, n);
    double sign = hypersurface_orientation(*e.immersion, e.box.center());
    PrincipalCurvatureReport pc =
        principal_curvature_check(*e.immersion, e.box.center(), 1.0, sign);
    ok = ok && pc.cluster_centers.size() == 2;
    if (pc.cluster_centers.size() == 2) {
      double other = n * pc.alpha + pc.rho;
      ok = ok && std::abs(pc.cluster_centers[0] - other) <= 1e-8 &&
           std::abs(pc.cluster_centers[1]) <= 1e-8 &&
           pc.cluster_sizes[0] == k && pc.cluster_sizes[1] == n - k;
    }
  }
  report(7, "kappa^2 - (n a + r) kappa + lambda - 1 = 0; clustered roots", ok);
}

TEST_CASE("8: gradient structure of psi and the potential function") {
  bool ok = true;
  for (const CatalogEntry& e : default_suite_entries()) {
    if (!e.immersion) continue;
    for (const CoordPoint& p : points64(e)) {
      ConcurrentSplit s = concurrent_split(*e.immersion, p);
      ExtrinsicBundle b = extrinsic_bundle(*e.immersion, p);
      ok = ok && g_norm(b.g, Eigen::VectorXd(s.grad_psi + s.shape_vperp_vtan)) <=
                     1e-6;
      ok = ok &&
           g_norm(b.g, Eigen::VectorXd(s.grad_phi - s.v_tan_chart)) <= 1e-6;
    }
  }

  // On the hypersphere the potential function is constant and the fitted
  // soliton is trivial (Einstein).
  CatalogEntry sphere = make_hypersphere(3, 2.0);
  double lo = 1e300, hi = -1e300;
  for (const CoordPoint& p : points64(sphere)) {
    double phi = concurrent_split(*sphere.immersion, p).phi_pot;
    lo = std::min(lo, phi);
    hi = std::max(hi, phi);
  }
  ok = ok && (hi - lo) <= 1e-9;
  SolitonReport cls = classify(sphere.datum(), points64(sphere));
  ok = ok && cls.trivial && cls.max_einstein <= 1e-6;
  report(8, "grad psi = -A_{v_perp} v^T, v^T = grad phi; sphere trivial", ok);
}

TEST_CASE("9: minimal submanifold scalar curvature tau = n(lambda-1)/2") {
  std::vector<std::string> vars = {"x", "y"};
  ParseResult a = parse_expr("x", vars), b = parse_expr("y", vars),
              c = parse_expr("x + y", vars);
  REQUIRE((a.ok() && b.ok() && c.ok()));
  Immersion plane(2, 3, {a.expr, b.expr, c.expr});
  ChartBox box{{{-2.0, 2.0}, {-2.0, 2.0}}};
  bool ok = true;
  for (const CoordPoint& p : sample_points(box, 0.05, 64, 0)) {
    double lambda = criterion_lambda_fit(plane, p);
    double tau = curvature_bundle(InducedMetric(plane), p).scalar;
    ok = ok && std::abs(lambda - 1.0) <= 1e-10;
    ok = ok && minimal_scalar_check(plane, p, lambda) <= 1e-10;
    ok = ok && std::abs(tau) <= 1e-10;
  }
  report(9, "origin plane: tau = n(lambda - 1)/2 = 0 to 1e-10", ok);
}

TEST_CASE("10: differentiation integrity against the FD oracle and fuzz") {
  bool ok = true;

  // Christoffel symbols of every catalog metric vs finite differences.
  for (const CatalogEntry& e : default_suite_entries()) {
    std::shared_ptr<const MetricField> metric = e.metric;
    if (!metric && e.immersion)
      metric = std::make_shared<InducedMetric>(*e.immersion);
    for (const CoordPoint& p : sample_points(e.box, 0.1, 4, 77)) {
      MetricEval exact = metric->eval(p);
      int n = metric->dim();
      MetricEval fd = exact;
      auto g_at = [&](const CoordPoint& q) { return metric->eval(q).g; };
      double h = 1e-4;
      for (int k = 0; k < n; ++k)
        fd.dg[static_cast<size_t>(k)] =
            (g_at(shifted(p, k, h)) - g_at(shifted(p, k, -h))) / (2 * h);
      Christoffel ge = christoffel(exact), gf = christoffel(fd);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            ok = ok && rel_err(ge[static_cast<size_t>(k)](i, j),
                               gf[static_cast<size_t>(k)](i, j)) <= 1e-5;
      RiemannTensor re = riemann(exact);
      MetricEval fd2e = exact;
      for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) {
          Eigen::MatrixXd d2;
          if (k == l)
            d2 = (g_at(shifted(p, k, h)) - 2.0 * exact.g +
                  g_at(shifted(p, k, -h))) /
                 (h * h);
          else
            d2 = (g_at(shifted(shifted(p, k, h), l, h)) -
                  g_at(shifted(shifted(p, k, h), l, -h)) -
                  g_at(shifted(shifted(p, k, -h), l, h)) +
                  g_at(shifted(shifted(p, k, -h), l, -h))) /
                 (4 * h * h);
          fd2e.d2g[static_cast<size_t>(k)][static_cast<size_t>(l)] = d2;
        }
      fd2e.dg = fd.dg;
      RiemannTensor rf = riemann(fd2e);
      for (size_t i = 0; i < re.up.size(); ++i)
        ok = ok && rel_err(re.up[i], rf.up[i]) <= 1e-5;
    }
  }

  // 200 random expressions: jets vs central differences.
  ExprFuzzer fuzz(3, 424242);
  int done = 0;
  while (done < 200) {
    CoordPoint p = fuzz.random_point();
    ExprPtr e = fuzz.tame_expression(p);
    ScalarFn f = [&](const CoordPoint& q) { return eval_value(*e, q); };
    try {
      Jet3 j = eval_jet(*e, p);
      for (int i = 0; i < 3; ++i) {
        ok = ok && rel_err(j.d1(i), fd1(f, p, i)) <= 1e-5;
        for (int jj = i; jj < 3; ++jj)
          ok = ok && rel_err(j.d2(i, jj), fd2(f, p, i, jj)) <= 1e-5;
      }
    } catch (const std::runtime_error&) {
      continue;  // FD stencil left the domain; draw another expression
    }
    ++done;
  }

  // 1e5 random inputs: the parser must stay total.
  SampleRng rng(1);
  const std::string alphabet = "xyz sincosexpqrt()+-*/^.0123456789e_";
  for (int trial = 0; trial < 100000; ++trial) {
    int len = static_cast<int>(rng.uniform(0.0, 48.0));
    std::string src;
    for (int i = 0; i < len; ++i)
      src += alphabet[static_cast<size_t>(
          rng.uniform(0.0, static_cast<double>(alphabet.size())))];
    ParseResult r = parse_expr(src, {"x", "y", "z"});
    if (!r.ok()) ok = ok && r.error->begin <= r.error->end;
  }

  report(10, "jets vs FD oracle (1e-5); 200-expr fuzz; 1e5 parse fuzz", ok);
}

TEST_CASE("11: suite --seed 0 emits byte-identical JSON twice") {
  bool ok =
      run_cli("suite --seed 0 --format json --out /tmp/acc_suite_a.json") == 0;
  ok = ok &&
       run_cli("suite --seed 0 --format json --out /tmp/acc_suite_b.json") == 0;
  std::string a = slurp("/tmp/acc_suite_a.json");
  ok = ok && !a.empty() && a == slurp("/tmp/acc_suite_b.json");
  report(11, "deterministic suite JSON under --seed 0", ok);
}
