#include "solitonlab/metric.hpp"

#include <functional>

namespace solitonlab {

ExprMetric::ExprMetric(int n, std::vector<std::vector<ExprPtr>> components)
    : n_(n), comp_(std::move(components)) {
  comp_.resize(static_cast<size_t>(n));
  for (auto& row : comp_) row.resize(static_cast<size_t>(n));
  // mirror the lower triangle so lookups are uniform
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (!comp_[static_cast<size_t>(i)][static_cast<size_t>(j)])
        comp_[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            comp_[static_cast<size_t>(j)][static_cast<size_t>(i)];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!comp_[static_cast<size_t>(i)][static_cast<size_t>(j)])
        comp_[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            comp_[static_cast<size_t>(j)][static_cast<size_t>(i)];
}

ExprMetric ExprMetric::identity(int n) {
  std::vector<std::vector<ExprPtr>> comp(static_cast<size_t>(n),
                                         std::vector<ExprPtr>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i)
    comp[static_cast<size_t>(i)][static_cast<size_t>(i)] = ex::c(1.0);
  return ExprMetric(n, std::move(comp));
}

const ExprPtr& ExprMetric::component(int i, int j) const {
  return comp_[static_cast<size_t>(i)][static_cast<size_t>(j)];
}

MetricEval metric_eval_from_jets(
    int n, const std::function<Jet3(int, int)>& component_jet) {
  MetricEval me;
  me.g = Eigen::MatrixXd::Zero(n, n);
  me.dg.assign(static_cast<size_t>(n), Eigen::MatrixXd::Zero(n, n));
  me.d2g.assign(static_cast<size_t>(n),
                std::vector<Eigen::MatrixXd>(static_cast<size_t>(n),
                                             Eigen::MatrixXd::Zero(n, n)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet3 gij = component_jet(i, j);
      me.g(i, j) = me.g(j, i) = gij.value();
      for (int k = 0; k < n; ++k) {
        me.dg[static_cast<size_t>(k)](i, j) = gij.d1(k);
        me.dg[static_cast<size_t>(k)](j, i) = gij.d1(k);
        for (int l = k; l < n; ++l) {
          me.d2g[static_cast<size_t>(k)][static_cast<size_t>(l)](i, j) =
              gij.d2(k, l);
          me.d2g[static_cast<size_t>(k)][static_cast<size_t>(l)](j, i) =
              gij.d2(k, l);
        }
      }
    }
  return me;
}

MetricEval ExprMetric::eval(const CoordPoint& p) const {
  return metric_eval_from_jets(n_, [&](int i, int j) {
    const ExprPtr& e = component(i, j);
    if (!e) return Jet3::constant(n_, 0.0);
    return eval_jet(*e, p);
  });
}

}  // namespace solitonlab
