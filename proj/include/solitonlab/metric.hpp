#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "solitonlab/chart.hpp"
#include "solitonlab/expr.hpp"

namespace solitonlab {

struct SingularMetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Metric components with their first and second coordinate partials
/// at one chart point.  dg[k](i,j) = d_k g_ij, d2g[k][l](i,j) = d_k d_l g_ij
/// (only k <= l is populated; use d2(k,l)).
struct MetricEval {
  Eigen::MatrixXd g;
  std::vector<Eigen::MatrixXd> dg;
  std::vector<std::vector<Eigen::MatrixXd>> d2g;

  int dim() const { return static_cast<int>(g.rows()); }
  const Eigen::MatrixXd& d2(int k, int l) const {
    return k <= l ? d2g[static_cast<size_t>(k)][static_cast<size_t>(l)]
                  : d2g[static_cast<size_t>(l)][static_cast<size_t>(k)];
  }
};

class MetricField {
 public:
  virtual ~MetricField() = default;
  virtual int dim() const = 0;
  virtual MetricEval eval(const CoordPoint& p) const = 0;
};

/// Metric given by closed-form component expressions.  Missing (null)
/// components are zero; only i <= j needs to be supplied.
class ExprMetric : public MetricField {
 public:
  ExprMetric(int n, std::vector<std::vector<ExprPtr>> components);

  static ExprMetric identity(int n);

  int dim() const override { return n_; }
  MetricEval eval(const CoordPoint& p) const override;

  const ExprPtr& component(int i, int j) const;

 private:
  int n_;
  std::vector<std::vector<ExprPtr>> comp_;  // n x n, symmetric storage
};

/// A chart together with its metric source.
struct ChartedManifold {
  ChartBox box;
  std::shared_ptr<const MetricField> metric;
  double margin = kDefaultMargin;

  int dim() const { return box.dim(); }
};

/// Builds the MetricEval from order-3 jets of the component
/// expressions of g_ij (used by ExprMetric and by induced metrics).
MetricEval metric_eval_from_jets(
    int n, const std::function<Jet3(int, int)>& component_jet);

}  // namespace solitonlab
