#pragma once

#include <span>
#include <string>
#include <vector>

#include "semideg/expr.hpp"
#include "semideg/extension.hpp"

namespace semideg {

/// Symmetric all-lower 2-tensor K_ij with a free-text label.
struct KillingCandidate {
  Tensor K;
  std::string label;

  /// Throws InputError unless K is an all-lower order-2 tensor with K_ij = K_ji exactly.
  KillingCandidate(Tensor K, std::string label = {});
};

/// K_(ij,k) with the averaged symmetrizer, stored [i][j][k].
Tensor is_killing(const KillingCandidate& K, const Metric& metric);

/// d(K dV): (K_j^a V_,a)_,k - (K_k^a V_,a)_,j stored [j][k].
Tensor bertrand_darboux(const KillingCandidate& K, const RationalFunction& V, const Metric& metric);
Tensor bertrand_darboux(const KillingCandidate& K, const Expr& V, const Metric& metric);

struct WSamples {
  std::vector<double> values;     // W at the targets, W(base) = 0
  double path_disagreement = 0.0;  // straight path against the axis staircase
};

/// Integrates W_,k = K_k^a V_,a from the base point. Throws NotClosed when
/// d(K dV) is not exactly zero, SingularPath when a path meets a pole and
/// PathDependence when the two paths differ by more than `tolerance`.
WSamples reconstruct_W(const KillingCandidate& K, const RationalFunction& V, const Metric& metric,
                       std::span<const double> base, const std::vector<std::vector<double>>& targets,
                       double tolerance = 1e-8);

/// 3 K_ij,k - [(K_jb T^b_ik - K_ib T^b_jk) + 2 (K_kb T^b_ji - K_jb T^b_ki)], stored [i][j][k].
Tensor killing_prolongation_residual(const KillingCandidate& K, const NonDegStructure& nd, const Metric& metric);

/// d(K dV) for the solution with jet `state` of the non-degenerate prolongation,
/// with second derivatives V_,ij = T_ij^a V_,a + g_ij Lap V / n. Evaluated
/// numerically; returns the largest absolute component.
class NumericBertrandDarboux {
 public:
  NumericBertrandDarboux(const KillingCandidate& K, const NonDegStructure& nd, const Metric& metric);
  double max_residual(std::span<const double> point, std::span<const double> state) const;

 private:
  std::size_t n_;
  Tensor dK_;    // K_i^a,j stored [i][a][j]
  Tensor K_;     // K_i^a
  Tensor T_;     // T_ij^c
  Tensor g_;
};

struct ConservationReport {
  double H0 = 0.0, F0 = 0.0;
  double H_drift = 0.0;  // max |H(t) - H0| / |H0|
  double F_drift = 0.0;  // max |F(t) - F0| / |F0|
  std::size_t steps = 0;
};

/// Follows H = g^ij p_i p_j + V with a fourth-order symplectic splitting and
/// monitors F = K^ij p_i p_j + W, W reconstructed from the start point. Needs a
/// metric with constant components (separable H); throws InputError otherwise.
ConservationReport check_conservation(const KillingCandidate& K, const RationalFunction& V, const Metric& metric,
                                      std::span<const double> x0, std::span<const double> p0, double step = 1e-3,
                                      std::size_t steps = 10000);

}  // namespace semideg
