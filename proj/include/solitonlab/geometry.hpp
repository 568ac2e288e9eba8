#pragma once

#include <Eigen/Dense>
#include <vector>

#include "solitonlab/metric.hpp"

namespace solitonlab {

/// Christoffel symbols of the second kind: gamma[k](i,j) = Gamma^k_ij.
using Christoffel = std::vector<Eigen::MatrixXd>;

/// R^l_ijk in the convention R(d_i, d_j) d_k = R^l_ijk d_l, with the
/// sign fixed so that the unit round sphere has sectional curvature +1.
struct RiemannTensor {
  int n = 0;
  std::vector<double> up;   // R^l_ijk
  std::vector<double> low;  // R_lijk = g_lm R^m_ijk

  double up_at(int l, int i, int j, int k) const {
    return up[static_cast<size_t>(((l * n + i) * n + j) * n + k)];
  }
  double low_at(int l, int i, int j, int k) const {
    return low[static_cast<size_t>(((l * n + i) * n + j) * n + k)];
  }
};

struct CurvatureBundle {
  MetricEval metric;
  Eigen::MatrixXd g_inv;
  Christoffel gamma;
  RiemannTensor riemann;
  Eigen::MatrixXd ricci;
  double scalar = 0.0;  // tau = (1/2) trace_g Ric (frame-pair sum convention)
};

/// A vector field's value and first partials at a point:
/// jacobian(i, k) = d_i v^k.
struct VectorFieldData {
  Eigen::VectorXd value;
  Eigen::MatrixXd jacobian;
};

VectorFieldData eval_vector_field(const std::vector<ExprPtr>& components,
                                  const CoordPoint& p);

/// Inverse with a condition-number guard (throws SingularMetricError).
Eigen::MatrixXd metric_inverse(const Eigen::MatrixXd& g);

Christoffel christoffel(const MetricEval& me);

/// dgamma[m][k](i,j) = d_m Gamma^k_ij, from the exact second metric partials.
std::vector<Christoffel> christoffel_partials(const MetricEval& me);

RiemannTensor riemann(const MetricEval& me);
Eigen::MatrixXd ricci(const RiemannTensor& r);
double scalar_curvature(const MetricEval& me, const Eigen::MatrixXd& ric);

CurvatureBundle curvature_bundle(const MetricEval& me);
CurvatureBundle curvature_bundle(const MetricField& metric, const CoordPoint& p);

/// K(X,Y) = g(R(X,Y)Y, X) / (|X|^2 |Y|^2 - g(X,Y)^2); throws on a
/// degenerate plane.
double sectional_curvature(const CurvatureBundle& cb, const Eigen::VectorXd& X,
                           const Eigen::VectorXd& Y);

/// (nabla_Z v)^k = Z^i d_i v^k + Gamma^k_ij Z^i v^j.
Eigen::VectorXd covariant_derivative(const Christoffel& gamma,
                                     const VectorFieldData& v,
                                     const Eigen::VectorXd& Z);

/// (L_v g)(X,Y) = g(nabla_X v, Y) + g(nabla_Y v, X) on the coordinate basis.
Eigen::MatrixXd lie_derivative_metric(const MetricEval& me,
                                      const Christoffel& gamma,
                                      const VectorFieldData& v);

/// (grad f)^k = g^{ki} d_i f.
Eigen::VectorXd gradient(const Eigen::MatrixXd& g_inv,
                         const Eigen::VectorXd& df);
Eigen::VectorXd gradient(const MetricField& metric, const CoordPoint& p,
                         const Expr& f);

/// sqrt(g^{ik} g^{jl} T_ij T_kl): the Frobenius norm of a symmetric
/// bilinear form measured against the metric.
double g_norm(const Eigen::MatrixXd& g_inv, const Eigen::MatrixXd& T);
/// sqrt(g_ij X^i X^j)
double g_norm(const Eigen::MatrixXd& g, const Eigen::VectorXd& X);

/// Orthonormal frame against g, Gram-Schmidt on the coordinate basis in
/// index order (columns of the result are the frame vectors).
Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd& g);

}  // namespace solitonlab
