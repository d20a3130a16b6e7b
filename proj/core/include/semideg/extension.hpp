#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "semideg/structure.hpp"

namespace semideg {

struct NamedResidual {
  std::string name;
  Tensor residual;
};

/// Non-degenerate structure built from an extendable D.
struct NonDegStructure {
  Tensor T;      // T_ij^m
  Tensor T_low;  // T_ijm
  Tensor t;      // T_ka^a
  Tensor t_bar;  // n/((n-1)(n+2)) t
  Tensor Q;      // Q_ijk^m stored [i][j][k][m]
  Tensor q;      // q_j^m
  Tensor q_low;  // q_jm
};

/// T_ij^k = D_ij^k - (1/n) g_ij D^a_a^k. Throws NotExtendable when N != 0.
NonDegStructure build_T(const Tensor& D, const Metric& metric);
/// Same, without the N check (used for perturbation probes).
NonDegStructure nondeg_from_T(const Tensor& T, const Metric& metric);

/// star-1 .. star-4, t-decomposition, t-closed, q-symmetric.
std::vector<NamedResidual> nondeg_condition_residuals(const NonDegStructure& nd, const Metric& metric);
std::vector<CheckOutcome> check_nondeg_conditions(const NonDegStructure& nd, const Metric& metric);

/// F_ak(s) = (n/(n-1)) q_ka + (1/(n-1)) t_k s_a - T_bka s^b - (1/n) s_k s_a, the
/// value of s_a,k forced on the 1-form s. Symbolic, [a][k].
Tensor restriction_rhs(const NonDegStructure& nd, const Tensor& s, const Metric& metric);
/// Numeric version at a point, row-major [a][k]. Throws SingularPoint.
std::vector<double> restriction_rhs(const NonDegStructure& nd, std::span<const double> s_value, const Metric& metric,
                                    std::span<const double> point);
/// s_a,k - F_ak(s), [a][k].
Tensor d2s_residual(const NonDegStructure& nd, const Tensor& s, const Metric& metric);
/// Ricci identity of the restriction equation with s replaced by free symbols
/// sigma_<coord>: grad_b F_ak - grad_k F_ab - R^l_akb sigma_l, [a][k][b].
Tensor s_integrability_residual(const NonDegStructure& nd, const Metric& metric);

struct TorsionView {
  Tensor torsion;             // T'^k_ij = g^kc (D_cij - D_cji), [k][i][j]
  Tensor vectorial_residual;  // torsion minus its pure-trace part
  Tensor u;                   // (s - d)/(n-1)
};
TorsionView torsion_view(const StructureReport& report, const Metric& metric);
/// N^k_ij - N^k_ji + u_j delta^k_i - u_i delta^k_j, with u = (1/n)(s - (n+2) t_bar).
Tensor torsion_from_parts(const StructureReport& report, const Metric& metric);

/// Jet (V, V_,k, Lap V) at a point.
struct ProlongationState {
  std::vector<double> point;
  double V = 0.0;
  std::vector<double> grad;
  double lap = 0.0;

  std::vector<double> flat() const;
  static ProlongationState from_flat(std::vector<double> point, std::span<const double> values);
};

/// The prolongation system dy/dx^k = A_k(x) y on y = (V, V_,1..V_,n, Lap V),
/// with the coefficients compiled once.
class Prolongation {
 public:
  Prolongation(const NonDegStructure& nd, const Metric& metric);

  std::size_t dim() const { return n_; }
  std::size_t state_size() const { return n_ + 2; }

  /// A_k(x), row-major. Throws SingularPoint.
  std::vector<double> coefficient(std::span<const double> point, std::size_t k) const;
  /// dy/dx^k for every k.
  std::vector<std::vector<double>> rhs(std::span<const double> point, std::span<const double> state) const;

  /// Fundamental matrix along the straight segment a -> b, row-major.
  /// Throws SingularPath when the segment meets a pole or a bad radicand.
  std::vector<double> transport(std::span<const double> a, std::span<const double> b) const;
  /// Single solution along a straight segment.
  std::vector<double> integrate_state(std::span<const double> a, std::span<const double> b,
                                      std::span<const double> initial) const;
  /// Throws SingularPath if the segment is unusable.
  void check_segment(std::span<const double> a, std::span<const double> b) const;

 private:
  std::size_t n_;
  std::vector<RationalFunction> coeffs_;  // A_k entries, [k][row][col]
  std::vector<std::size_t> nonzero_;      // flat indices into coeffs_
  std::vector<Polynomial> denominators_;
  std::vector<Polynomial> radicands_;
  ChartPtr chart_;
};

std::vector<std::vector<double>> prolong_rhs(const ProlongationState& state, const NonDegStructure& nd,
                                             const Metric& metric);

/// Fundamental matrices at the targets; column c is the solution with the
/// c-th unit initial state at the base.
struct BasisSolution {
  std::vector<double> base;
  std::vector<std::vector<double>> targets;
  std::vector<std::vector<double>> fundamental;
  double path_disagreement = 0.0;

  std::size_t state_size() const;
  /// State at target i of the solution with the given initial state.
  std::vector<double> state(std::size_t target, std::span<const double> initial) const;
};

/// Straight path plus an axis-aligned staircase for the path-independence
/// certificate. Throws SingularPath, PathDependence.
BasisSolution integrate_basis(const Prolongation& prolongation, std::span<const double> base,
                              const std::vector<std::vector<double>>& targets, double tolerance = 1e-8);

/// Box grid of counts[k] points per axis, centred on `center`.
struct Grid {
  std::vector<std::size_t> counts;
  double spacing = 0.25;
  std::vector<double> center;

  std::vector<std::vector<double>> points() const;
};

enum class FitStatus { Fitted, FitFailed };

struct ExtensionResult {
  std::vector<std::vector<double>> points;
  std::vector<std::vector<double>> samples;  // complementary solution, flat states
  std::vector<double> direction;             // its initial state at the base
  double family_residual = 0.0;              // worst relative residual over the family
  FitStatus fit_status = FitStatus::FitFailed;
  std::string fit_message;
  std::vector<double> coefficients;        // dictionary coefficients, scaled to max |c| = 1
  std::vector<Rational> exact_coefficients;
  std::string fit_expression;
  double fit_residual = 0.0;
};

/// Locates the family inside the integrated solution space by least squares
/// on values and gradients, returns a complementary solution and fits it
/// against the dictionary modulo the family. Throws FamilyNotContained.
/// `basis` must be integrated from the base point to the grid points.
ExtensionResult extension_direction(const BasisSolution& basis, const PotentialFamily& family,
                                    const std::vector<Expr>& dictionary, double tolerance = 1e-7);

/// One row per point: coordinates, V, V_,k, Lap V with 17 significant digits.
std::string sample_table(const std::vector<std::vector<double>>& points, const std::vector<std::vector<double>>& samples,
                         const Chart& chart);

}  // namespace semideg
