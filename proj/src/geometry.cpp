#include "solitonlab/geometry.hpp"

#include <cmath>

namespace solitonlab {

VectorFieldData eval_vector_field(const std::vector<ExprPtr>& components,
                                  const CoordPoint& p) {
  int n = p.dim();
  VectorFieldData v;
  v.value = Eigen::VectorXd::Zero(n);
  v.jacobian = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < static_cast<int>(components.size()); ++k) {
    const ExprPtr& e = components[static_cast<size_t>(k)];
    if (!e) continue;
    Jet3 j = eval_jet(*e, p);
    v.value(k) = j.value();
    for (int i = 0; i < n; ++i) v.jacobian(i, k) = j.d1(i);
  }
  return v;
}

Eigen::MatrixXd metric_inverse(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  if (lo <= 1e-9 || hi / lo > 1e12)
    throw SingularMetricError(
        "metric not positive definite or ill-conditioned (eigenvalues in [" +
        std::to_string(lo) + ", " + std::to_string(hi) + "])");
  return g.inverse();
}

Christoffel christoffel(const MetricEval& me) {
  int n = me.dim();
  Eigen::MatrixXd ginv = metric_inverse(me.g);
  Christoffel gamma(static_cast<size_t>(n), Eigen::MatrixXd::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += ginv(k, l) * (me.dg[static_cast<size_t>(i)](j, l) +
                             me.dg[static_cast<size_t>(j)](i, l) -
                             me.dg[static_cast<size_t>(l)](i, j));
        gamma[static_cast<size_t>(k)](i, j) = 0.5 * s;
        gamma[static_cast<size_t>(k)](j, i) = 0.5 * s;
      }
  return gamma;
}

std::vector<Christoffel> christoffel_partials(const MetricEval& me) {
  int n = me.dim();
  Eigen::MatrixXd ginv = metric_inverse(me.g);
  // d_m g^{kl} = -g^{ka} (d_m g_ab) g^{bl}
  std::vector<Eigen::MatrixXd> dginv(static_cast<size_t>(n));
  for (int m = 0; m < n; ++m)
    dginv[static_cast<size_t>(m)] =
        -ginv * me.dg[static_cast<size_t>(m)] * ginv;

  std::vector<Christoffel> dgamma(
      static_cast<size_t>(n),
      Christoffel(static_cast<size_t>(n), Eigen::MatrixXd::Zero(n, n)));
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            double bracket = me.dg[static_cast<size_t>(i)](j, l) +
                             me.dg[static_cast<size_t>(j)](i, l) -
                             me.dg[static_cast<size_t>(l)](i, j);
            double dbracket = me.d2(m, i)(j, l) + me.d2(m, j)(i, l) -
                              me.d2(m, l)(i, j);
            s += dginv[static_cast<size_t>(m)](k, l) * bracket +
                 ginv(k, l) * dbracket;
          }
          dgamma[static_cast<size_t>(m)][static_cast<size_t>(k)](i, j) = 0.5 * s;
          dgamma[static_cast<size_t>(m)][static_cast<size_t>(k)](j, i) = 0.5 * s;
        }
  return dgamma;
}

RiemannTensor riemann(const MetricEval& me) {
  int n = me.dim();
  Christoffel gamma = christoffel(me);
  std::vector<Christoffel> dgamma = christoffel_partials(me);
  RiemannTensor r;
  r.n = n;
  r.up.assign(static_cast<size_t>(n * n * n * n), 0.0);
  r.low.assign(static_cast<size_t>(n * n * n * n), 0.0);
  auto at = [n](std::vector<double>& v, int l, int i, int j, int k) -> double& {
    return v[static_cast<size_t>(((l * n + i) * n + j) * n + k)];
  };
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = dgamma[static_cast<size_t>(i)][static_cast<size_t>(l)](j, k) -
                     dgamma[static_cast<size_t>(j)][static_cast<size_t>(l)](i, k);
          for (int m = 0; m < n; ++m)
            s += gamma[static_cast<size_t>(l)](i, m) *
                     gamma[static_cast<size_t>(m)](j, k) -
                 gamma[static_cast<size_t>(l)](j, m) *
                     gamma[static_cast<size_t>(m)](i, k);
          at(r.up, l, i, j, k) = s;
        }
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int m = 0; m < n; ++m)
            s += me.g(l, m) * r.up_at(m, i, j, k);
          at(r.low, l, i, j, k) = s;
        }
  return r;
}

Eigen::MatrixXd ricci(const RiemannTensor& r) {
  int n = r.n;
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  // Ric(Y, Z) = trace(X -> R(X, Y) Z)
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.up_at(i, i, j, k);
      ric(j, k) = s;
    }
  return ric;
}

double scalar_curvature(const MetricEval& me, const Eigen::MatrixXd& ric) {
  Eigen::MatrixXd ginv = metric_inverse(me.g);
  return 0.5 * (ginv * ric).trace();
}

CurvatureBundle curvature_bundle(const MetricEval& me) {
  CurvatureBundle cb;
  cb.metric = me;
  cb.g_inv = metric_inverse(me.g);
  cb.gamma = christoffel(me);
  cb.riemann = riemann(me);
  cb.ricci = ricci(cb.riemann);
  cb.scalar = 0.5 * (cb.g_inv * cb.ricci).trace();
  return cb;
}

CurvatureBundle curvature_bundle(const MetricField& metric,
                                 const CoordPoint& p) {
  return curvature_bundle(metric.eval(p));
}

double sectional_curvature(const CurvatureBundle& cb, const Eigen::VectorXd& X,
                           const Eigen::VectorXd& Y) {
  int n = cb.riemann.n;
  double xx = X.dot(cb.metric.g * X);
  double yy = Y.dot(cb.metric.g * Y);
  double xy = X.dot(cb.metric.g * Y);
  double gram = xx * yy - xy * xy;
  if (gram <= 1e-10)
    throw std::invalid_argument("sectional_curvature: degenerate plane");
  // g(R(X,Y)Y, X) = R_lijk X^l X^i Y^j Y^k with slots (l; i j k) where
  // R(d_i, d_j) d_k lowered against d_l.
  double num = 0.0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          num += cb.riemann.low_at(l, i, j, k) * X(l) * X(i) * Y(j) * Y(k);
  return num / gram;
}

Eigen::VectorXd covariant_derivative(const Christoffel& gamma,
                                     const VectorFieldData& v,
                                     const Eigen::VectorXd& Z) {
  int n = static_cast<int>(Z.size());
  Eigen::VectorXd out = v.jacobian.transpose() * Z;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out(k) += gamma[static_cast<size_t>(k)](i, j) * Z(i) * v.value(j);
  return out;
}

Eigen::MatrixXd lie_derivative_metric(const MetricEval& me,
                                      const Christoffel& gamma,
                                      const VectorFieldData& v) {
  int n = me.dim();
  // (nabla_i v)^k = d_i v^k + Gamma^k_im v^m
  Eigen::MatrixXd nabla_v = Eigen::MatrixXd::Zero(n, n);  // (i, k)
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double s = v.jacobian(i, k);
      for (int m = 0; m < n; ++m)
        s += gamma[static_cast<size_t>(k)](i, m) * v.value(m);
      nabla_v(i, k) = s;
    }
  Eigen::MatrixXd lie = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += me.g(k, j) * nabla_v(i, k) + me.g(i, k) * nabla_v(j, k);
      lie(i, j) = s;
    }
  return lie;
}

Eigen::VectorXd gradient(const Eigen::MatrixXd& g_inv,
                         const Eigen::VectorXd& df) {
  return g_inv * df;
}

Eigen::VectorXd gradient(const MetricField& metric, const CoordPoint& p,
                         const Expr& f) {
  MetricEval me = metric.eval(p);
  Jet3 j = eval_jet(f, p);
  Eigen::VectorXd df(me.dim());
  for (int i = 0; i < me.dim(); ++i) df(i) = j.d1(i);
  return metric_inverse(me.g) * df;
}

double g_norm(const Eigen::MatrixXd& g_inv, const Eigen::MatrixXd& T) {
  Eigen::MatrixXd m = g_inv * T;
  return std::sqrt(std::abs((m * m).trace()));
}

double g_norm(const Eigen::MatrixXd& g, const Eigen::VectorXd& X) {
  return std::sqrt(std::abs(X.dot(g * X)));
}

Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd& g) {
  int n = static_cast<int>(g.rows());
  Eigen::MatrixXd frame = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v = frame.col(i);
    for (int j = 0; j < i; ++j)
      v -= frame.col(j).dot(g * v) * frame.col(j);
    double len = std::sqrt(v.dot(g * v));
    if (len < 1e-12)
      throw SingularMetricError("orthonormal_frame: degenerate metric");
    frame.col(i) = v / len;
  }
  return frame;
}

}  // namespace solitonlab
