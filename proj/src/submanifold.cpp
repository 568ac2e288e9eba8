#include "solitonlab/submanifold.hpp"

#include <cmath>

namespace solitonlab {

namespace {

size_t pack2(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return static_cast<size_t>(i) * n - static_cast<size_t>(i) * (i - 1) / 2 +
         static_cast<size_t>(j - i);
}

}  // namespace

ImmersionJets eval_immersion(const Immersion& imm, const CoordPoint& p) {
  if (p.dim() != imm.chart_dim)
    throw std::invalid_argument("eval_immersion: point dimension mismatch");
  ImmersionJets jets;
  jets.chart_dim = imm.chart_dim;
  jets.phi.reserve(static_cast<size_t>(imm.ambient_dim));
  for (const ExprPtr& e : imm.components) jets.phi.push_back(eval_jet(*e, p));
  return jets;
}

MetricEval induced_metric_eval(const ImmersionJets& jets) {
  int n = jets.chart_dim;
  int m = jets.ambient_dim();
  MetricEval me;
  me.g = Eigen::MatrixXd::Zero(n, n);
  me.dg.assign(static_cast<size_t>(n), Eigen::MatrixXd::Zero(n, n));
  me.d2g.assign(static_cast<size_t>(n),
                std::vector<Eigen::MatrixXd>(static_cast<size_t>(n),
                                             Eigen::MatrixXd::Zero(n, n)));
  // g_ij = sum_a phi^a_i phi^a_j, differentiated by the product rule;
  // the third immersion derivatives feed the second metric partials.
  for (int a = 0; a < m; ++a) {
    const Jet3& f = jets.phi[static_cast<size_t>(a)];
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double gij = f.d1(i) * f.d1(j);
        me.g(i, j) += gij;
        if (i != j) me.g(j, i) += gij;
        for (int k = 0; k < n; ++k) {
          double dk = f.d2(i, k) * f.d1(j) + f.d1(i) * f.d2(j, k);
          me.dg[static_cast<size_t>(k)](i, j) += dk;
          if (i != j) me.dg[static_cast<size_t>(k)](j, i) += dk;
          for (int l = k; l < n; ++l) {
            double dkl = f.d3(i, k, l) * f.d1(j) + f.d2(i, k) * f.d2(j, l) +
                         f.d2(i, l) * f.d2(j, k) + f.d1(i) * f.d3(j, k, l);
            me.d2g[static_cast<size_t>(k)][static_cast<size_t>(l)](i, j) += dkl;
            if (i != j)
              me.d2g[static_cast<size_t>(k)][static_cast<size_t>(l)](j, i) += dkl;
          }
        }
      }
  }
  return me;
}

const Eigen::VectorXd& ExtrinsicBundle::h_at(int i, int j) const {
  return h[pack2(n(), i, j)];
}

Eigen::MatrixXd ExtrinsicBundle::h_contracted(const Eigen::VectorXd& w) const {
  Eigen::MatrixXd out(n(), n());
  for (int i = 0; i < n(); ++i)
    for (int j = i; j < n(); ++j) {
      double v = w.dot(h_at(i, j));
      out(i, j) = out(j, i) = v;
    }
  return out;
}

Eigen::MatrixXd ExtrinsicBundle::shape_operator(const Eigen::VectorXd& eta) const {
  return g_inv * h_contracted(eta);
}

Eigen::VectorXd ExtrinsicBundle::shape_eigenvalues(const Eigen::VectorXd& eta) const {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(h_contracted(eta), g);
  return es.eigenvalues();
}

ExtrinsicBundle extrinsic_bundle(const Immersion& imm, const CoordPoint& p) {
  ImmersionJets jets = eval_immersion(imm, p);
  int n = imm.chart_dim, m = imm.ambient_dim;
  ExtrinsicBundle b;
  b.point = p;
  b.jacobian = Eigen::MatrixXd(m, n);
  b.position = Eigen::VectorXd(m);
  for (int a = 0; a < m; ++a) {
    b.position(a) = jets.phi[static_cast<size_t>(a)].value() - imm.origin(a);
    for (int i = 0; i < n; ++i)
      b.jacobian(a, i) = jets.phi[static_cast<size_t>(a)].d1(i);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b.jacobian);
  if (svd.singularValues().minCoeff() <= 1e-8)
    throw RankDeficientError("immersion differential rank-deficient at " +
                             p.to_string());

  b.g = b.jacobian.transpose() * b.jacobian;
  b.g_inv = metric_inverse(b.g);

  // Orthonormal complement of the tangent space from a full QR.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(b.jacobian);
  Eigen::MatrixXd Q = qr.householderQ();
  b.normal_basis = Q.rightCols(m - n);
  Eigen::MatrixXd normal_proj = b.normal_basis * b.normal_basis.transpose();

  b.h.resize(static_cast<size_t>(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Eigen::VectorXd second(m);
      for (int a = 0; a < m; ++a)
        second(a) = jets.phi[static_cast<size_t>(a)].d2(i, j);
      b.h[pack2(n, i, j)] = normal_proj * second;
    }

  b.mean_curvature = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      b.mean_curvature += b.g_inv(i, j) * b.h_at(i, j);
  b.mean_curvature /= n;
  return b;
}

Eigen::VectorXd hypersurface_normal(const ExtrinsicBundle& b, double sign) {
  int n = b.n(), m = b.m();
  if (m != n + 1)
    throw PreconditionError("hypersurface_normal: ambient dimension must be n+1");
  Eigen::VectorXd c(m);
  for (int a = 0; a < m; ++a) {
    Eigen::MatrixXd minor(n, n);
    int r = 0;
    for (int row = 0; row < m; ++row) {
      if (row == a) continue;
      minor.row(r++) = b.jacobian.row(row);
    }
    c(a) = ((a % 2) == 0 ? 1.0 : -1.0) * minor.determinant();
  }
  double len = c.norm();
  if (len <= 1e-12)
    throw RankDeficientError("hypersurface_normal: degenerate Jacobian");
  return sign * c / len;
}

double hypersurface_orientation(const Immersion& imm, const CoordPoint& center) {
  ExtrinsicBundle b = extrinsic_bundle(imm, center);
  Eigen::VectorXd nvec = hypersurface_normal(b, 1.0);
  for (int a = b.m() - 1; a >= 0; --a)
    if (std::abs(nvec(a)) > 1e-8) return nvec(a) > 0 ? 1.0 : -1.0;
  return 1.0;
}

ConcurrentSplit concurrent_split(const Immersion& imm, const CoordPoint& p) {
  ImmersionJets jets = eval_immersion(imm, p);
  ExtrinsicBundle bundle = extrinsic_bundle(imm, p);
  int n = imm.chart_dim, m = imm.ambient_dim;

  ConcurrentSplit cs;
  cs.v_ambient = bundle.position;
  Eigen::VectorXd b = bundle.jacobian.transpose() * cs.v_ambient;
  cs.v_tan_chart = bundle.g_inv * b;
  cs.v_tan_ambient = bundle.jacobian * cs.v_tan_chart;
  cs.v_perp = cs.v_ambient - cs.v_tan_ambient;
  cs.psi = 0.5 * cs.v_perp.squaredNorm();
  cs.phi_pot = 0.5 * cs.v_ambient.squaredNorm();

  // d_k b_i = sum_a phi^a_ik (phi^a - o_a) + phi^a_i phi^a_k
  Eigen::MatrixXd db = Eigen::MatrixXd::Zero(n, n);  // (k, i)
  for (int a = 0; a < m; ++a) {
    const Jet3& f = jets.phi[static_cast<size_t>(a)];
    double va = cs.v_ambient(a);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        db(k, i) += f.d2(i, k) * va + f.d1(i) * f.d1(k);
  }

  MetricEval me = induced_metric_eval(jets);

  // grad phi: d_k phi_pot = b_k
  cs.grad_phi = bundle.g_inv * b;

  // grad psi: d_k psi = b_k - (d_k b) . w + (1/2) w^T (d_k g) w
  Eigen::VectorXd dpsi(n);
  const Eigen::VectorXd& w = cs.v_tan_chart;
  for (int k = 0; k < n; ++k)
    dpsi(k) = b(k) - db.row(k).dot(w) +
              0.5 * w.dot(me.dg[static_cast<size_t>(k)] * w);
  cs.grad_psi = bundle.g_inv * dpsi;

  cs.shape_vperp_vtan = bundle.shape_operator(cs.v_perp) * cs.v_tan_chart;
  return cs;
}

VectorFieldData tangential_field_data(const Immersion& imm, const CoordPoint& p) {
  ImmersionJets jets = eval_immersion(imm, p);
  ExtrinsicBundle bundle = extrinsic_bundle(imm, p);
  MetricEval me = induced_metric_eval(jets);
  int n = imm.chart_dim, m = imm.ambient_dim;

  Eigen::VectorXd v = bundle.position;
  Eigen::VectorXd b = bundle.jacobian.transpose() * v;
  Eigen::VectorXd w = bundle.g_inv * b;

  Eigen::MatrixXd db = Eigen::MatrixXd::Zero(n, n);  // (k, i)
  for (int a = 0; a < m; ++a) {
    const Jet3& f = jets.phi[static_cast<size_t>(a)];
    double va = v(a);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        db(k, i) += f.d2(i, k) * va + f.d1(i) * f.d1(k);
  }

  VectorFieldData out;
  out.value = w;
  out.jacobian = Eigen::MatrixXd::Zero(n, n);  // (k, j) = d_k w^j
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXd dginv = -bundle.g_inv * me.dg[static_cast<size_t>(k)] *
                            bundle.g_inv;
    Eigen::VectorXd dwk = dginv * b + bundle.g_inv * db.row(k).transpose();
    out.jacobian.row(k) = dwk.transpose();
  }
  return out;
}

double gauss_residual(const Immersion& imm, const CoordPoint& p,
                      const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                      const Eigen::VectorXd& Z, const Eigen::VectorXd& W) {
  ImmersionJets jets = eval_immersion(imm, p);
  ExtrinsicBundle bundle = extrinsic_bundle(imm, p);
  RiemannTensor r = riemann(induced_metric_eval(jets));
  int n = imm.chart_dim;

  double lhs = 0.0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          lhs += r.low_at(l, i, j, k) * W(l) * X(i) * Y(j) * Z(k);

  auto h_of = [&](const Eigen::VectorXd& A, const Eigen::VectorXd& B) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(imm.ambient_dim);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out += A(i) * B(j) * bundle.h_at(i, j);
    return out;
  };
  double rhs = h_of(X, W).dot(h_of(Y, Z)) - h_of(X, Z).dot(h_of(Y, W));
  return std::abs(lhs - rhs);
}

namespace {

// h(Y,Z) as an ambient vector at a shifted chart point.
Eigen::VectorXd h_field(const Immersion& imm, const CoordPoint& p,
                        const Eigen::VectorXd& Y, const Eigen::VectorXd& Z) {
  ExtrinsicBundle b = extrinsic_bundle(imm, p);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(imm.ambient_dim);
  for (int i = 0; i < imm.chart_dim; ++i)
    for (int j = 0; j < imm.chart_dim; ++j) out += Y(i) * Z(j) * b.h_at(i, j);
  return out;
}

CoordPoint shifted(const CoordPoint& p, const Eigen::VectorXd& dir, double t) {
  std::vector<double> c = p.coords;
  for (size_t i = 0; i < c.size(); ++i) c[i] += t * dir(static_cast<Eigen::Index>(i));
  return CoordPoint(std::move(c));
}

}  // namespace

double codazzi_residual(const Immersion& imm, const CoordPoint& p,
                        const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                        const Eigen::VectorXd& Z, double step) {
  ExtrinsicBundle bundle = extrinsic_bundle(imm, p);
  MetricEval me = induced_metric_eval(eval_immersion(imm, p));
  Christoffel gamma = christoffel(me);
  int n = imm.chart_dim;
  Eigen::MatrixXd normal_proj =
      bundle.normal_basis * bundle.normal_basis.transpose();

  auto nabla = [&](const Eigen::VectorXd& A, const Eigen::VectorXd& B) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          out(k) += gamma[static_cast<size_t>(k)](i, j) * A(i) * B(j);
    return out;
  };

  // (bar-nabla_X h)(Y,Z) with D_X taken as the normal projection of a
  // central difference of the ambient field h(Y,Z).
  auto nabla_bar_h = [&](const Eigen::VectorXd& A, const Eigen::VectorXd& B,
                         const Eigen::VectorXd& C) {
    Eigen::VectorXd plus = h_field(imm, shifted(p, A, step), B, C);
    Eigen::VectorXd minus = h_field(imm, shifted(p, A, -step), B, C);
    Eigen::VectorXd d_h = normal_proj * ((plus - minus) / (2.0 * step));
    Eigen::VectorXd out = d_h;
    Eigen::VectorXd nAB = nabla(A, B), nAC = nabla(A, C);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out -= nAB(i) * C(j) * bundle.h_at(i, j) +
               B(i) * nAC(j) * bundle.h_at(i, j);
    return out;
  };

  Eigen::VectorXd diff = nabla_bar_h(X, Y, Z) - nabla_bar_h(Y, X, Z);
  return diff.norm();
}

CriterionResidual soliton_criterion_residual(const Immersion& imm,
                                             const CoordPoint& p,
                                             double lambda) {
  ImmersionJets jets = eval_immersion(imm, p);
  ExtrinsicBundle bundle = extrinsic_bundle(imm, p);
  ConcurrentSplit cs = concurrent_split(imm, p);
  MetricEval me = induced_metric_eval(jets);
  Eigen::MatrixXd ric = ricci(riemann(me));
  CriterionResidual out;
  out.matrix = ric - (lambda - 1.0) * me.g + bundle.h_contracted(cs.v_perp);
  out.norm = g_norm(bundle.g_inv, out.matrix);
  return out;
}

double criterion_lambda_fit(const Immersion& imm, const CoordPoint& p) {
  ImmersionJets jets = eval_immersion(imm, p);
  ExtrinsicBundle bundle = extrinsic_bundle(imm, p);
  ConcurrentSplit cs = concurrent_split(imm, p);
  MetricEval me = induced_metric_eval(jets);
  Eigen::MatrixXd ric = ricci(riemann(me));
  // residual(lambda) = C - lambda g; the g-inner-product least squares
  // solution is trace(g^{-1} C) / n.
  Eigen::MatrixXd C = ric + me.g + bundle.h_contracted(cs.v_perp);
  return (bundle.g_inv * C).trace() / imm.chart_dim;
}

std::pair<double, double> tangential_derivative_check(const Immersion& imm,
                                                      const CoordPoint& p,
                                                      double step) {
  ExtrinsicBundle bundle = extrinsic_bundle(imm, p);
  ConcurrentSplit cs = concurrent_split(imm, p);
  MetricEval me = induced_metric_eval(eval_immersion(imm, p));
  Christoffel gamma = christoffel(me);
  VectorFieldData vt = tangential_field_data(imm, p);
  Eigen::MatrixXd shape_vperp = bundle.shape_operator(cs.v_perp);
  Eigen::MatrixXd normal_proj =
      bundle.normal_basis * bundle.normal_basis.transpose();
  int n = imm.chart_dim;

  double tangential = 0.0, normal = 0.0;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd Z = Eigen::VectorXd::Zero(n);
    Z(i) = 1.0;
    Eigen::VectorXd lhs = covariant_derivative(gamma, vt, Z);
    Eigen::VectorXd rhs = shape_vperp * Z + Z;
    tangential = std::max(tangential, g_norm(me.g, Eigen::VectorXd(lhs - rhs)));

    // h(e_i, v^T) + D_{e_i} v_perp, the normal part by central differences
    Eigen::VectorXd h_term = Eigen::VectorXd::Zero(imm.ambient_dim);
    for (int j = 0; j < n; ++j) h_term += vt.value(j) * bundle.h_at(i, j);
    Eigen::VectorXd vperp_plus = concurrent_split(imm, shifted(p, Z, step)).v_perp;
    Eigen::VectorXd vperp_minus = concurrent_split(imm, shifted(p, Z, -step)).v_perp;
    Eigen::VectorXd d_vperp =
        normal_proj * ((vperp_plus - vperp_minus) / (2.0 * step));
    normal = std::max(normal, (h_term + d_vperp).norm());
  }
  return {tangential, normal};
}

PrincipalCurvatureReport principal_curvature_check(const Immersion& imm,
                                                   const CoordPoint& p,
                                                   double lambda,
                                                   double orientation_sign) {
  if (imm.ambient_dim != imm.chart_dim + 1)
    throw PreconditionError("principal_curvature_check: not a hypersurface");
  ExtrinsicBundle bundle = extrinsic_bundle(imm, p);
  int n = imm.chart_dim;
  Eigen::VectorXd N = hypersurface_normal(bundle, orientation_sign);

  PrincipalCurvatureReport rep;
  rep.kappa = bundle.shape_eigenvalues(N);
  rep.alpha = rep.kappa.sum() / n;
  rep.rho = N.dot(bundle.position);

  double na_rho = n * rep.alpha + rep.rho;
  rep.max_quadratic_residual = 0.0;
  for (int i = 0; i < n; ++i) {
    double k = rep.kappa(i);
    double r = std::abs(k * k - na_rho * k + lambda - 1.0);
    rep.quadratic_residuals.push_back(r);
    rep.max_quadratic_residual = std::max(rep.max_quadratic_residual, r);
  }

  // Cluster the ascending eigenvalues with the spec'd gap threshold.
  double gap = 1e-6 * (1.0 + rep.kappa.cwiseAbs().maxCoeff());
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || rep.kappa(i) - rep.kappa(i - 1) > gap) {
      double sum = 0.0;
      for (int t = start; t < i; ++t) sum += rep.kappa(t);
      rep.cluster_centers.push_back(sum / (i - start));
      rep.cluster_sizes.push_back(i - start);
      start = i;
    }
  }

  // Two-root structure: at most two clusters, each matching a root of
  // kappa^2 - (n alpha + rho) kappa + lambda - 1 = 0.
  rep.two_root_structure = false;
  double disc = na_rho * na_rho + 4.0 - 4.0 * lambda;
  if (rep.cluster_centers.size() <= 2 && disc >= -1e-12) {
    double sq = std::sqrt(std::max(disc, 0.0));
    double r1 = 0.5 * (na_rho - sq), r2 = 0.5 * (na_rho + sq);
    double tol = 1e-6 * (1.0 + std::abs(na_rho));
    bool ok = true;
    for (double c : rep.cluster_centers)
      ok = ok && (std::abs(c - r1) <= tol || std::abs(c - r2) <= tol);
    rep.two_root_structure = ok;
  }
  return rep;
}

double minimal_scalar_check(const Immersion& imm, const CoordPoint& p,
                            double lambda) {
  ExtrinsicBundle bundle = extrinsic_bundle(imm, p);
  if (bundle.mean_curvature.norm() > 1e-8)
    throw PreconditionError("minimal_scalar_check: submanifold not minimal at " +
                            p.to_string());
  MetricEval me = induced_metric_eval(eval_immersion(imm, p));
  double tau = scalar_curvature(me, ricci(riemann(me)));
  return std::abs(tau - imm.chart_dim * (lambda - 1.0) / 2.0);
}

UmbilicityReport umbilicity_check(const Immersion& imm, const CoordPoint& p) {
  ExtrinsicBundle bundle = extrinsic_bundle(imm, p);
  ConcurrentSplit cs = concurrent_split(imm, p);
  Eigen::VectorXd ev = bundle.shape_eigenvalues(cs.v_perp);
  UmbilicityReport rep;
  rep.factor = ev.mean();
  rep.deviation = std::sqrt((ev.array() - rep.factor).square().sum());
  rep.umbilical = rep.deviation <= 1e-8;
  return rep;
}

}  // namespace solitonlab
