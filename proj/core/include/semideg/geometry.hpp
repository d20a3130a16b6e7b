#pragma once

#include <cstddef>
#include <vector>

#include "semideg/tensor.hpp"

namespace semideg {

using Matrix = std::vector<std::vector<RationalFunction>>;

/// Exact determinant by Laplace expansion over column subsets.
RationalFunction determinant(const Matrix& m);
/// adj(m) with m * adj(m) = det(m) * I.
Matrix adjugate(const Matrix& m);

/// Levi-Civita data of a metric, computed once at construction.
///
/// Christoffel symbols are stored as G[k][i][j] = Gamma^k_ij, the Riemann
/// tensor as R[m][i][j][k] = R^m_ijk with the convention
/// V_,ijk - V_,ikj = R^m_ijk V_,m, and Ric_ij = R^a_iaj.
class Metric {
 public:
  /// Throws DegenerateMetric when det g vanishes identically.
  explicit Metric(Tensor g);
  static Metric euclidean(ChartPtr chart);

  const ChartPtr& chart() const { return g_.chart(); }
  std::size_t dim() const { return g_.dim(); }
  const Tensor& g() const { return g_; }
  const Tensor& g_inv() const { return g_inv_; }
  const Tensor& christoffel() const { return gamma_; }
  const Tensor& riemann() const { return riemann_; }
  const Tensor& ricci() const { return ricci_; }
  const RationalFunction& det() const { return det_; }
  bool is_flat_chart() const { return flat_chart_; }

 private:
  Tensor g_, g_inv_, gamma_, riemann_, ricci_;
  RationalFunction det_;
  bool flat_chart_ = false;
};

inline const Tensor& christoffel(const Metric& m) { return m.christoffel(); }
inline const Tensor& riemann(const Metric& m) { return m.riemann(); }
inline const Tensor& ricci(const Metric& m) { return m.ricci(); }

/// Covariant derivative; the derivative slot is appended last (lower).
Tensor cov_derivative(const Tensor& t, const Metric& metric);

/// Metric trace over two slots of any variance.
Tensor trace(const Tensor& t, std::size_t slot_a, std::size_t slot_b, const Metric& metric);
Tensor raise(const Tensor& t, std::size_t slot, const Metric& metric);
Tensor lower(const Tensor& t, std::size_t slot, const Metric& metric);
Tensor lower_all(const Tensor& t, const Metric& metric);

/// Projector onto the trace-free hook part of an all-lower order-3 tensor:
/// (1/3)(2 M_(ij)k - M_ikj - M_jki) + 2/(3(n-1)) (g_ij m_k - g_k(i m_j)),
/// m_j = M^i_ji - M^i_ij, round brackets averaging. Throws WrongOrder.
Tensor hook_project_21(const Tensor& m, const Metric& metric);

/// Kronecker delta as a (1,1) tensor.
Tensor identity(const ChartPtr& chart);

}  // namespace semideg
