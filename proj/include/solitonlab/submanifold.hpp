#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "solitonlab/geometry.hpp"
#include "solitonlab/metric.hpp"

namespace solitonlab {

struct RankDeficientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Smooth map from an n-dimensional chart into Euclidean m-space.  The
/// ambient concurrent field is v(q) = q - origin.
struct Immersion {
  int chart_dim = 0;
  int ambient_dim = 0;
  std::vector<ExprPtr> components;  // size ambient_dim
  Eigen::VectorXd origin;           // size ambient_dim (zero by default)

  Immersion() = default;
  Immersion(int n, int m, std::vector<ExprPtr> comps)
      : chart_dim(n), ambient_dim(m), components(std::move(comps)),
        origin(Eigen::VectorXd::Zero(m)) {}
};

/// Order-3 jets of every ambient component at one chart point.
struct ImmersionJets {
  std::vector<Jet3> phi;
  int chart_dim = 0;

  int ambient_dim() const { return static_cast<int>(phi.size()); }
};

ImmersionJets eval_immersion(const Immersion& imm, const CoordPoint& p);

/// Induced metric with exact first and second partials: g_ij = sum_a
/// d_i phi^a d_j phi^a, differentiated through the immersion jets.
MetricEval induced_metric_eval(const ImmersionJets& jets);

class InducedMetric : public MetricField {
 public:
  explicit InducedMetric(Immersion imm) : imm_(std::move(imm)) {}
  int dim() const override { return imm_.chart_dim; }
  MetricEval eval(const CoordPoint& p) const override {
    return induced_metric_eval(eval_immersion(imm_, p));
  }
  const Immersion& immersion() const { return imm_; }

 private:
  Immersion imm_;
};

/// All first-order extrinsic data at a point: tangent basis, induced
/// metric, orthonormal normal basis, second fundamental form (ambient
/// normal-valued), mean curvature vector and shape operators.
struct ExtrinsicBundle {
  CoordPoint point;
  Eigen::VectorXd position;      // phi(p) - origin, the ambient concurrent field
  Eigen::MatrixXd jacobian;      // m x n, tangent basis as columns
  Eigen::MatrixXd g, g_inv;      // n x n induced metric
  Eigen::MatrixXd normal_basis;  // m x (m-n), orthonormal columns
  std::vector<Eigen::VectorXd> h;  // packed i <= j, ambient normal vectors
  Eigen::VectorXd mean_curvature;  // ambient, H = (1/n) trace_g h

  int n() const { return static_cast<int>(jacobian.cols()); }
  int m() const { return static_cast<int>(jacobian.rows()); }
  const Eigen::VectorXd& h_at(int i, int j) const;

  /// A_eta = g^{-1} (eta . h): self-adjoint with respect to g.
  Eigen::MatrixXd shape_operator(const Eigen::VectorXd& eta) const;

  /// g-orthonormal ascending eigenvalues of a shape operator.
  Eigen::VectorXd shape_eigenvalues(const Eigen::VectorXd& eta) const;

  /// Matrix with entries tilde-g(h(d_i, d_j), w) for an ambient vector w.
  Eigen::MatrixXd h_contracted(const Eigen::VectorXd& w) const;
};

ExtrinsicBundle extrinsic_bundle(const Immersion& imm, const CoordPoint& p);

/// Continuous unit normal of a hypersurface (m = n+1) built from the
/// cofactors of the Jacobian; `sign` flips the global orientation.
Eigen::VectorXd hypersurface_normal(const ExtrinsicBundle& b, double sign = 1.0);

/// Orientation fixed at the chart center: the last component of the
/// normal with magnitude above 1e-8 is made positive.
double hypersurface_orientation(const Immersion& imm, const CoordPoint& center);

/// Tangential/normal splitting of the ambient concurrent field, with
/// the exact gradients needed by the soliton machinery:
/// psi = (1/2)|v_perp|^2, phi_pot = (1/2)|v|^2.
struct ConcurrentSplit {
  Eigen::VectorXd v_ambient;
  Eigen::VectorXd v_tan_chart;    // chart components of v^T
  Eigen::VectorXd v_tan_ambient;
  Eigen::VectorXd v_perp;         // ambient components
  double psi = 0.0, phi_pot = 0.0;
  Eigen::VectorXd grad_psi;       // chart components of grad psi
  Eigen::VectorXd grad_phi;       // chart components of grad phi_pot
  Eigen::VectorXd shape_vperp_vtan;  // A_{v_perp} v^T in chart components
};

ConcurrentSplit concurrent_split(const Immersion& imm, const CoordPoint& p);

/// Value and exact first partials of the tangential field v^T as a
/// chart vector field (for the intrinsic soliton pipeline).
VectorFieldData tangential_field_data(const Immersion& imm, const CoordPoint& p);

/// |g(R(X,Y)Z,W) - gt(h(X,W),h(Y,Z)) + gt(h(X,Z),h(Y,W))| for a flat ambient.
double gauss_residual(const Immersion& imm, const CoordPoint& p,
                      const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                      const Eigen::VectorXd& Z, const Eigen::VectorXd& W);

/// Norm of (bar-nabla_X h)(Y,Z) - (bar-nabla_Y h)(X,Z); the covariant
/// derivative of h is taken by central differences of the bundle.
double codazzi_residual(const Immersion& imm, const CoordPoint& p,
                        const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                        const Eigen::VectorXd& Z, double step = 1e-4);

/// Residual matrix of Ric = (lambda - 1) g - gt(h, v_perp) and its
/// g-normalized Frobenius norm.
struct CriterionResidual {
  Eigen::MatrixXd matrix;
  double norm = 0.0;
};
CriterionResidual soliton_criterion_residual(const Immersion& imm,
                                             const CoordPoint& p, double lambda);

/// The lambda minimizing the criterion residual at p (least squares in
/// the g-inner product).
double criterion_lambda_fit(const Immersion& imm, const CoordPoint& p);

/// Residuals of nabla_X v^T = A_{v_perp} X + X (tangential part, exact)
/// and h(X, v^T) = -D_X v_perp (normal part, one finite-difference layer),
/// maximized over the coordinate basis.
std::pair<double, double> tangential_derivative_check(const Immersion& imm,
                                                      const CoordPoint& p,
                                                      double step = 1e-4);

/// Principal-curvature analysis of a hypersurface soliton: eigenvalues
/// of A_N, the quadratic each must satisfy, and the two-root structure.
struct PrincipalCurvatureReport {
  Eigen::VectorXd kappa;        // ascending
  double alpha = 0.0;           // mean curvature, H = alpha N
  double rho = 0.0;             // support function <N, x>
  std::vector<double> quadratic_residuals;  // |k^2 - (n a + r) k + l - 1|
  double max_quadratic_residual = 0.0;
  std::vector<double> cluster_centers;      // distinct eigenvalue clusters
  std::vector<int> cluster_sizes;
  bool two_root_structure = false;  // clusters match the quadratic's roots
};
PrincipalCurvatureReport principal_curvature_check(const Immersion& imm,
                                                   const CoordPoint& p,
                                                   double lambda,
                                                   double orientation_sign);

/// |tau - n (lambda - 1)/2| on a minimal submanifold (|H| <= 1e-8 required).
double minimal_scalar_check(const Immersion& imm, const CoordPoint& p,
                            double lambda);

/// Deviation of A_{v_perp} from a multiple of the identity; the soliton
/// is trivial exactly when this vanishes.
struct UmbilicityReport {
  double factor = 0.0;     // trace / n
  double deviation = 0.0;  // rms spread of the eigenvalues of A_{v_perp}
  bool umbilical = false;  // deviation <= 1e-8
};
UmbilicityReport umbilicity_check(const Immersion& imm, const CoordPoint& p);

}  // namespace solitonlab
