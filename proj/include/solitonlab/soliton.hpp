#pragma once

#include <memory>
#include <string>
#include <vector>

#include "solitonlab/geometry.hpp"
#include "solitonlab/metric.hpp"
#include "solitonlab/submanifold.hpp"

namespace solitonlab {

/// Potential vector field, evaluable to value + first partials.
class VectorFieldSource {
 public:
  virtual ~VectorFieldSource() = default;
  virtual VectorFieldData eval(const CoordPoint& p) const = 0;
};

class ExprVectorField : public VectorFieldSource {
 public:
  explicit ExprVectorField(std::vector<ExprPtr> comps)
      : comps_(std::move(comps)) {}
  VectorFieldData eval(const CoordPoint& p) const override {
    return eval_vector_field(comps_, p);
  }
  const std::vector<ExprPtr>& components() const { return comps_; }

 private:
  std::vector<ExprPtr> comps_;
};

/// Tangential part of the ambient concurrent field of an immersion.
class TangentialField : public VectorFieldSource {
 public:
  explicit TangentialField(Immersion imm) : imm_(std::move(imm)) {}
  VectorFieldData eval(const CoordPoint& p) const override {
    return tangential_field_data(imm_, p);
  }

 private:
  Immersion imm_;
};

/// A candidate Ricci soliton: chart + metric + potential + constant.
struct SolitonDatum {
  ChartedManifold manifold;
  std::shared_ptr<const VectorFieldSource> potential;
  double lambda = 0.0;
  /// True when the potential comes from a (tangential projection of a)
  /// concurrent field, enabling the gradient check.
  bool concurrent_construction = false;
};

struct SolitonResidual {
  Eigen::MatrixXd matrix;  // (1/2) L_xi g + Ric - lambda g
  double norm = 0.0;       // g-normalized Frobenius norm
};

SolitonResidual soliton_residual(const MetricField& metric,
                                 const VectorFieldSource& potential,
                                 const CoordPoint& p, double lambda);

/// max over coordinate directions Z of |nabla_Z v - Z|_g.
double concurrent_residual(const MetricField& metric,
                           const VectorFieldSource& potential,
                           const CoordPoint& p);

enum class SolitonClass { Shrinking, Steady, Expanding };

std::string to_string(SolitonClass c);

struct SolitonReport {
  int sample_count = 0;
  double lambda = 0.0;
  std::vector<double> soliton_norms;
  std::vector<double> concurrent_norms;
  std::vector<double> einstein_norms;
  double max_soliton = 0.0, mean_soliton = 0.0;
  double max_concurrent = 0.0;
  double max_einstein = 0.0;
  double einstein_constant = 0.0;
  SolitonClass classification = SolitonClass::Steady;
  bool trivial = false;      // Einstein residual within tolerance
  bool gradient_checked = false;
  bool gradient = false;     // xi = grad((1/2) g(xi, xi)) within tolerance
  double max_gradient_residual = 0.0;
};

SolitonReport classify(const SolitonDatum& datum,
                       const std::vector<CoordPoint>& points,
                       double einstein_tol = 1e-6, double gradient_tol = 1e-6);

/// Warped-product chart: s is coordinate 0, the fiber coordinates follow.
struct WarpedProductData {
  ExprPtr f;  // warping function of var 0
  std::shared_ptr<const ExprMetric> fiber_metric;
  ChartBox fiber_box;
  ChartBox box;  // s-interval followed by the fiber box
  double margin = kDefaultMargin;
};

/// g = ds^2 + f(s)^2 g_F as expression components on the product chart.
std::shared_ptr<ExprMetric> warped_metric(const WarpedProductData& wp);

/// v = s d/ds on the product chart.
std::shared_ptr<ExprVectorField> radial_field(int dim);

/// Numerical check of the warped-product classification: soliton
/// equation at lambda = 1 under v = s d/ds, linearity of the warping
/// function (a s + b fit with b ~ 0), and the fiber Einstein condition
/// Ric_F = (n-2) g_F.
struct Theorem31Verdict {
  bool soliton_pass = false;
  double max_soliton_residual = 0.0;
  double max_concurrent_residual = 0.0;
  bool warping_linear = false;
  double warp_fit_residual = 0.0;
  double warp_offset_ratio = 0.0;  // |b / a| after the linear fit
  bool fiber_einstein_pass = false;
  double max_fiber_einstein_residual = 0.0;
  bool pass() const {
    return soliton_pass && warping_linear && fiber_einstein_pass;
  }
};

Theorem31Verdict theorem31_verdict(const WarpedProductData& wp, int samples,
                                   uint64_t seed, double tol = 1e-8);

}  // namespace solitonlab
