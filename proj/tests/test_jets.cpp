#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "expr_fuzz.hpp"
#include "fd_oracle.hpp"
#include "solitonlab/expr.hpp"
#include "solitonlab/jet.hpp"

using namespace solitonlab;
using namespace solitonlab::testing;

namespace {

double jet_deriv(const Jet3& j, const std::vector<int>& idx) {
  switch (idx.size()) {
    case 0: return j.value();
    case 1: return j.d1(idx[0]);
    case 2: return j.d2(idx[0], idx[1]);
    default: return j.d3(idx[0], idx[1], idx[2]);
  }
}

void check_jets_equal(const Jet3& a, const Jet3& b, double tol) {
  int n = a.vars();
  REQUIRE(b.vars() == n);
  CHECK(a.value() == doctest::Approx(b.value()).epsilon(tol));
  for (int i = 0; i < n; ++i) {
    CHECK(a.d1(i) == doctest::Approx(b.d1(i)).epsilon(tol));
    for (int j = i; j < n; ++j) {
      CHECK(a.d2(i, j) == doctest::Approx(b.d2(i, j)).epsilon(tol));
      for (int k = j; k < n; ++k)
        CHECK(a.d3(i, j, k) == doctest::Approx(b.d3(i, j, k)).epsilon(tol));
    }
  }
}

}  // namespace

TEST_CASE("constants and seeds carry the expected derivatives") {
  Jet3 c = Jet3::constant(2, 4.5);
  CHECK(c.value() == 4.5);
  CHECK(c.d1(0) == 0.0);
  CHECK(c.d2(1, 1) == 0.0);
  CHECK(c.d3(0, 1, 1) == 0.0);

  CoordPoint p{1.0, 2.0};
  Jet3 x = Jet3::seed(p, 0);
  Jet3 y = Jet3::seed(p, 1);
  CHECK(x.value() == 1.0);
  CHECK(x.d1(0) == 1.0);
  CHECK(x.d1(1) == 0.0);
  CHECK(y.d1(1) == 1.0);
  CHECK(x.d2(0, 0) == 0.0);
}

TEST_CASE("packed symmetric storage makes index order irrelevant") {
  CoordPoint p{0.3, 0.7, 1.1};
  Jet3 x = Jet3::seed(p, 0), y = Jet3::seed(p, 1), z = Jet3::seed(p, 2);
  Jet3 f = x * y * z + sin(x * y);
  CHECK(f.d2(0, 2) == f.d2(2, 0));
  CHECK(f.d3(0, 1, 2) == f.d3(2, 1, 0));
  CHECK(f.d3(1, 0, 2) == f.d3(2, 0, 1));
}

TEST_CASE("product rule: d3(xyz)/dxdydz = 1 exactly") {
  CoordPoint p{0.3, 0.7, 1.1};
  Jet3 f = Jet3::seed(p, 0) * Jet3::seed(p, 1) * Jet3::seed(p, 2);
  CHECK(f.value() == doctest::Approx(0.3 * 0.7 * 1.1));
  CHECK(f.d3(0, 1, 2) == doctest::Approx(1.0));
  CHECK(f.d3(0, 0, 1) == doctest::Approx(0.0));
}

TEST_CASE("ring axioms hold to machine precision on random jets") {
  ExprFuzzer fuzz(3, 11);
  for (int trial = 0; trial < 25; ++trial) {
    CoordPoint p = fuzz.random_point();
    Jet3 a = eval_jet(*fuzz.tame_expression(p), p);
    Jet3 b = eval_jet(*fuzz.tame_expression(p), p);
    Jet3 c = eval_jet(*fuzz.tame_expression(p), p);
    check_jets_equal((a + b) * c, a * c + b * c, 1e-12);
    check_jets_equal(a * b, b * a, 1e-12);
    check_jets_equal((a + b) + c, a + (b + c), 1e-12);
    check_jets_equal(a - a, Jet3::constant(3, 0.0), 1e-12);
    check_jets_equal(a * (b * c), (a * b) * c, 1e-11);
  }
}

TEST_CASE("division is the inverse of multiplication") {
  ExprFuzzer fuzz(2, 13);
  for (int trial = 0; trial < 25; ++trial) {
    CoordPoint p = fuzz.random_point();
    Jet3 a = eval_jet(*fuzz.tame_expression(p), p);
    Jet3 b = eval_jet(*fuzz.tame_expression(p), p);
    if (std::abs(b.value()) < 1e-3) continue;
    check_jets_equal(a * b / b, a, 1e-9);
  }
}

TEST_CASE("elementary functions match their closed-form derivatives") {
  CoordPoint p{0.6};
  Jet3 x = Jet3::seed(p, 0);
  double t = 0.6;

  Jet3 s = sin(x);
  CHECK(s.value() == doctest::Approx(std::sin(t)));
  CHECK(s.d1(0) == doctest::Approx(std::cos(t)));
  CHECK(s.d2(0, 0) == doctest::Approx(-std::sin(t)));
  CHECK(s.d3(0, 0, 0) == doctest::Approx(-std::cos(t)));

  Jet3 e = exp(x * x);
  CHECK(e.d1(0) == doctest::Approx(2 * t * std::exp(t * t)));

  Jet3 r = sqrt(x);
  CHECK(r.d1(0) == doctest::Approx(0.5 / std::sqrt(t)));
  CHECK(r.d2(0, 0) == doctest::Approx(-0.25 * std::pow(t, -1.5)));

  Jet3 q = pow(x, -3);
  CHECK(q.value() == doctest::Approx(std::pow(t, -3)));
  CHECK(q.d1(0) == doctest::Approx(-3 * std::pow(t, -4)));
}

TEST_CASE("chain rule composition via compose()") {
  CoordPoint p{0.4, 0.9};
  Jet3 u = Jet3::seed(p, 0) * Jet3::seed(p, 1);
  double v = u.value();
  // f(u) = u^2 by hand through compose, against u * u.
  Jet3 composed = u.compose(v * v, 2 * v, 2.0, 0.0);
  check_jets_equal(composed, u * u, 1e-13);
}

TEST_CASE("domain violations raise JetDomainError") {
  CoordPoint p{0.5};
  Jet3 x = Jet3::seed(p, 0);
  CHECK_THROWS_AS(x / (x + -0.5), JetDomainError);
  CHECK_THROWS_AS(sqrt(x + -2.0), JetDomainError);
  CHECK_THROWS_AS(pow(x + -0.5, -1), JetDomainError);
}

TEST_CASE("200 random expressions agree with the finite-difference oracle") {
  ExprFuzzer fuzz(3, 2026);
  int done = 0;
  while (done < 200) {
    CoordPoint p = fuzz.random_point();
    ExprPtr e = fuzz.tame_expression(p, 1e3);
    ScalarFn f = [&](const CoordPoint& q) { return eval_value(*e, q); };

    Jet3 j = Jet3::constant(3, 0.0);
    bool usable = true;
    try {
      j = eval_jet(*e, p);
      // The FD stencil needs a neighbourhood, not just the point.
      for (int i = 0; i < 3 && usable; ++i) {
        f(shifted(p, i, 2.2e-3));
        f(shifted(p, i, -2.2e-3));
      }
    } catch (const std::runtime_error&) {
      usable = false;
    }
    if (!usable) continue;

    bool all_ok = true;
    try {
      for (int i = 0; i < 3; ++i) {
        all_ok &= rel_err(j.d1(i), fd1(f, p, i)) < 1e-5;
        for (int jj = i; jj < 3; ++jj) {
          all_ok &= rel_err(j.d2(i, jj), fd2(f, p, i, jj)) < 1e-5;
          for (int k = jj; k < 3; ++k) {
            // Richardson extrapolation removes the O(h^2) truncation term,
            // which dominates once fifth derivatives get large.
            double coarse = fd3(f, p, i, jj, k, 1e-3);
            double fine = fd3(f, p, i, jj, k, 5e-4);
            all_ok &= rel_err(j.d3(i, jj, k), (4 * fine - coarse) / 3) < 1e-4;
          }
        }
      }
    } catch (const std::runtime_error&) {
      continue;  // stencil left the domain; draw another expression
    }
    CHECK(all_ok);
    if (!all_ok) MESSAGE("failing expression: ", unparse(*e), " at ", p.to_string());
    ++done;
  }
}
