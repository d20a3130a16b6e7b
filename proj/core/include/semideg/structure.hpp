#pragma once

#include <cstddef>
#include <vector>

#include "semideg/checks.hpp"
#include "semideg/expr.hpp"
#include "semideg/geometry.hpp"

namespace semideg {

/// Basis of an (n+1)-dimensional potential space: n+1 expressions, exactly one
/// of them constant.
class PotentialFamily {
 public:
  /// Throws InvalidFamily (wrong count, no or several constants) and
  /// NonRationalExpression for entries that do not normalize.
  PotentialFamily(Metric metric, std::vector<Expr> basis);

  const Metric& metric() const { return metric_; }
  const ChartPtr& chart() const { return metric_.chart(); }
  const std::vector<Expr>& basis() const { return basis_; }
  const std::vector<RationalFunction>& values() const { return values_; }
  std::size_t constant_index() const { return constant_index_; }
  /// Indices of the n non-constant entries, in basis order.
  std::vector<std::size_t> gradient_indices() const;

 private:
  Metric metric_;
  std::vector<Expr> basis_;
  std::vector<RationalFunction> values_;
  std::size_t constant_index_ = 0;
};

/// Largest canonical form (terms in numerator plus denominator) extract_D accepts.
inline constexpr std::size_t kDefaultSizeBound = 20000;

/// Structure tensor D_ij^m (lower, lower, upper) solving V_,ij = D_ij^m V_,m
/// for every basis potential. Throws GradientsDependent, NonPolynomialBlowup.
Tensor extract_D(const PotentialFamily& family, std::size_t size_bound = kDefaultSizeBound);

/// V_,ij - D_ij^m V_,m for the k-th basis entry, as an all-lower 2-tensor.
Tensor hessian_residual(const PotentialFamily& family, const Tensor& D, std::size_t k);

/// Alt_jk(D_ij^m_,k + D_ij^a D_ak^m) - R^m_ijk, stored as [i][j][k][m].
Tensor check_D_integrability(const Tensor& D, const Metric& metric);

enum class Verdict { Extendable, NonExtendable };

struct StructureReport {
  Tensor D;        // D_ij^m
  Tensor D_lower;  // D_ijk
  Tensor S, N;     // all lower
  Tensor d, s, t;  // lower 1-forms
  Verdict verdict = Verdict::NonExtendable;
  std::vector<CheckOutcome> residuals;
};

/// d_k = D_ka^a, s_k = D^a_ak, t = d - s/n, N = hook part, S = trace-free
/// totally symmetric part. Fills the verdict, leaves residuals empty.
StructureReport decompose_D(const Tensor& D, const Metric& metric);

/// Totally symmetric, trace-free part of an all-lower order-3 tensor.
Tensor symmetric_tracefree_part(const Tensor& m, const Metric& metric);

/// Order-3 tensor with the metric on result slots gi, gj and the 1-form a on slot ak.
Tensor metric_times(const Tensor& a, const Metric& metric, std::size_t gi, std::size_t gj, std::size_t ak);

/// Right-hand side of the decomposition rebuilt from S, N, d, s (all lower).
Tensor reassemble_D(const StructureReport& report, const Metric& metric);

Verdict verdict(const StructureReport& report);

/// omega_j,k - omega_k,j stored as [j][k].
Tensor exterior_derivative(const Tensor& omega);
bool check_closed(const Tensor& omega);
/// True when omega = df exactly; f may contain ln.
bool find_exactness_witness(const Tensor& omega, const Expr& f);

/// ((n-2)/(n-1)) (s_l,k - s_k,l) minus the N, S, s, d expression, as [k][l].
Tensor ds_formula_check(const StructureReport& report, const Metric& metric);
/// Alt_km(s_m,k - grad^i D_ikm + s^a D_akm - D_k^ia D_aim + Ric_km): the traced
/// integrability condition, zero for every genuine D.
Tensor ds_trace_route(const StructureReport& report, const Metric& metric);

/// extract_D, decompose_D and the structure-level checks: v-prolong,
/// decomposition, d-closed, ts-closed, ds-formula.
StructureReport analyze_structure(const PotentialFamily& family, std::size_t size_bound = kDefaultSizeBound);

}  // namespace semideg
