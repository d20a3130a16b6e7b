#include "semideg/extension.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "semideg/errors.hpp"

namespace semideg {

namespace {

using Mat = std::vector<double>;  // row-major square matrix

RationalFunction zero(const ChartPtr& chart) { return RationalFunction(chart, Rational(0)); }

Rational inverse_of(long v) { return Rational(1, v); }

Mat matmul(const Mat& a, const Mat& b, std::size_t m) {
  Mat c(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      const double aik = a[i * m + k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i * m + j] += aik * b[k * m + j];
    }
  return c;
}

Mat identity_matrix(std::size_t m) {
  Mat id(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) id[i * m + i] = 1.0;
  return id;
}

// Best rational with denominator <= max_den, by continued fractions.
Rational rationalize(double x, long max_den) {
  const bool negative = x < 0;
  double v = std::fabs(x);
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 40; ++iter) {
    const double a = std::floor(v);
    const long ai = static_cast<long>(a);
    const long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    if (v - a < 1e-15) break;
    v = 1.0 / (v - a);
  }
  Rational r(negative ? -p1 : p1, q1 == 0 ? 1 : q1);
  r.canonicalize();
  return r;
}

// Least squares; returns the solution and the relative residual.
std::pair<Eigen::VectorXd, double> least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
  const double norm = b.norm();
  const double res = (A * x - b).norm();
  return {x, norm > 0 ? res / norm : res};
}

}  // namespace

NonDegStructure nondeg_from_T(const Tensor& T, const Metric& metric) {
  const std::size_t n = T.dim();
  const long nl = static_cast<long>(n);
  NonDegStructure nd;
  nd.T = T;
  nd.T_low = lower(T, 2, metric);
  nd.t = contract(T, 1, 2);
  nd.t_bar = nd.t * Rational(nl, (nl - 1) * (nl + 2));
  Tensor dT = cov_derivative(T, metric);  // [i][j][m][k]
  const Tensor& R = metric.riemann();
  nd.Q = Tensor(T.chart(), {Variance::Lower, Variance::Lower, Variance::Lower, Variance::Upper});
  nd.Q.for_each_index([&](const Index& idx) {
    const std::size_t i = idx[0], j = idx[1], k = idx[2], m = idx[3];
    RationalFunction v = dT.at({i, j, m, k}) - R.at({m, i, j, k});
    for (std::size_t l = 0; l < n; ++l) {
      const RationalFunction& a = T.at({i, j, l});
      if (!a.is_zero() && !T.at({l, k, m}).is_zero()) v += a * T.at({l, k, m});
    }
    nd.Q[idx] = v;
  });
  nd.q = contract(raise(nd.Q, 0, metric), 0, 2);
  nd.q_low = lower(nd.q, 1, metric);
  return nd;
}

NonDegStructure build_T(const Tensor& D, const Metric& metric) {
  Tensor N = hook_project_21(lower(D, 2, metric), metric);
  if (auto idx = N.first_nonzero()) throw NotExtendable("obstruction tensor N is nonzero: N" + describe_component(N, *idx));
  const std::size_t n = D.dim();
  Tensor s_up = trace(D, 0, 1, metric);
  const Tensor& g = metric.g();
  Tensor T = D;
  T.for_each_index([&](const Index& idx) {
    const RationalFunction& gv = g.at({idx[0], idx[1]});
    if (!gv.is_zero() && !s_up.at({idx[2]}).is_zero())
      T[idx] -= gv * s_up.at({idx[2]}) * inverse_of(static_cast<long>(n));
  });
  return nondeg_from_T(T, metric);
}

std::vector<NamedResidual> nondeg_condition_residuals(const NonDegStructure& nd, const Metric& metric) {
  const ChartPtr& chart = nd.T.chart();
  const std::size_t n = nd.T.dim();
  const long nl = static_cast<long>(n);
  const Rational c1 = inverse_of(nl - 1);
  const Tensor& g = metric.g();
  const Tensor& R = metric.riemann();
  std::vector<NamedResidual> out;

  // (*1): Alt_jk(T_ij^m,k + T_ij^l T_lk^m + g_ij q_k^m/(n-1)) - R^m_ijk
  Tensor P = nd.Q;
  P.for_each_index([&](const Index& idx) { P[idx] += R.at({idx[3], idx[0], idx[1], idx[2]}); });
  Tensor star1(chart, P.variance());
  star1.for_each_index([&](const Index& idx) {
    const std::size_t i = idx[0], j = idx[1], k = idx[2], m = idx[3];
    if (j == k) return;
    RationalFunction v = P.at({i, j, k, m}) - P.at({i, k, j, m}) - R.at({m, i, j, k});
    v += (g.at({i, j}) * nd.q.at({k, m}) - g.at({i, k}) * nd.q.at({j, m})) * c1;
    star1[idx] = v;
  });
  out.push_back({"star-1", star1});

  // (*2): Alt_jk(T_ijk + g_ij t_k/(n-1))
  Tensor star2 = Tensor::all_lower(chart, 3);
  star2.for_each_index([&](const Index& idx) {
    const std::size_t i = idx[0], j = idx[1], k = idx[2];
    if (j == k) return;
    star2[idx] = nd.T_low.at({i, j, k}) - nd.T_low.at({i, k, j}) +
                 (g.at({i, j}) * nd.t.at({k}) - g.at({i, k}) * nd.t.at({j})) * c1;
  });
  out.push_back({"star-2", star2});

  // (*3): Alt_kl(q_k^m_,l + T_al^m q_k^a + t_k q_l^m/(n-1))
  Tensor dq = cov_derivative(nd.q, metric);  // [k][m][l]
  Tensor X(chart, {Variance::Lower, Variance::Lower, Variance::Upper});
  X.for_each_index([&](const Index& idx) {
    const std::size_t k = idx[0], l = idx[1], m = idx[2];
    RationalFunction v = dq.at({k, m, l}) + nd.t.at({k}) * nd.q.at({l, m}) * c1;
    for (std::size_t a = 0; a < n; ++a) {
      const RationalFunction& qa = nd.q.at({k, a});
      if (!qa.is_zero() && !nd.T.at({a, l, m}).is_zero()) v += nd.T.at({a, l, m}) * qa;
    }
    X[idx] = v;
  });
  out.push_back({"star-3", X - permute(X, {1, 0, 2})});

  // (*4): Alt_kl(t_k,l + q_kl)
  Tensor Y = cov_derivative(nd.t, metric) + nd.q_low;
  out.push_back({"star-4", Y - permute(Y, {1, 0})});

  // T = T° + t_bar_i g_jk + t_bar_j g_ik - (2/n) g_ij t_bar_k with T° symmetric trace-free
  Tensor hook = metric_times(nd.t_bar, metric, 1, 2, 0) + metric_times(nd.t_bar, metric, 0, 2, 1) -
                metric_times(nd.t_bar, metric, 0, 1, 2) * Rational(2, nl);
  out.push_back({"t-decomposition", nd.T_low - symmetric_tracefree_part(nd.T_low, metric) - hook});
  out.push_back({"t-closed", exterior_derivative(nd.t)});
  out.push_back({"q-symmetric", nd.q_low - permute(nd.q_low, {1, 0})});
  return out;
}

std::vector<CheckOutcome> check_nondeg_conditions(const NonDegStructure& nd, const Metric& metric) {
  std::vector<CheckOutcome> out;
  for (const auto& r : nondeg_condition_residuals(nd, metric)) out.push_back(CheckOutcome::of(r.name, r.residual));
  return out;
}

Tensor restriction_rhs(const NonDegStructure& nd, const Tensor& s, const Metric& metric) {
  const std::size_t n = nd.T.dim();
  const long nl = static_cast<long>(n);
  Tensor s_up = raise(s, 0, metric);
  Tensor F = Tensor::all_lower(s.chart(), 2);
  F.for_each_index([&](const Index& idx) {
    const std::size_t a = idx[0], k = idx[1];
    RationalFunction v = nd.q_low.at({k, a}) * Rational(nl, nl - 1);
    v += nd.t.at({k}) * s.at({a}) * inverse_of(nl - 1);
    v -= s.at({k}) * s.at({a}) * inverse_of(nl);
    for (std::size_t b = 0; b < n; ++b)
      if (!s_up.at({b}).is_zero() && !nd.T_low.at({b, k, a}).is_zero()) v -= nd.T_low.at({b, k, a}) * s_up.at({b});
    F[idx] = v;
  });
  return F;
}

std::vector<double> restriction_rhs(const NonDegStructure& nd, std::span<const double> s_value, const Metric& metric,
                                    std::span<const double> point) {
  const std::size_t n = nd.T.dim();
  const double nd_ = static_cast<double>(n);
  const Tensor& g_inv = metric.g_inv();
  std::vector<double> s_up(n, 0.0);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t c = 0; c < n; ++c) s_up[b] += g_inv.at({b, c}).eval(point) * s_value[c];
  std::vector<double> F(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t k = 0; k < n; ++k) {
      double v = nd_ / (nd_ - 1) * nd.q_low.at({k, a}).eval(point) +
                 nd.t.at({k}).eval(point) * s_value[a] / (nd_ - 1) - s_value[k] * s_value[a] / nd_;
      for (std::size_t b = 0; b < n; ++b) v -= nd.T_low.at({b, k, a}).eval(point) * s_up[b];
      F[a * n + k] = v;
    }
  return F;
}

Tensor d2s_residual(const NonDegStructure& nd, const Tensor& s, const Metric& metric) {
  return cov_derivative(s, metric) - restriction_rhs(nd, s, metric);
}

Tensor s_integrability_residual(const NonDegStructure& nd, const Metric& metric) {
  const ChartPtr& base = nd.T.chart();
  const std::size_t n = nd.T.dim();
  std::vector<std::string> names;
  for (const auto& c : base->coordinates()) names.push_back("sigma_" + c);
  ChartPtr chart = base->with_parameters(names);
  Metric m2(metric.g().rebind(chart));
  NonDegStructure nd2;
  nd2.T = nd.T.rebind(chart);
  nd2.T_low = nd.T_low.rebind(chart);
  nd2.t = nd.t.rebind(chart);
  nd2.q_low = nd.q_low.rebind(chart);
  Tensor sigma = Tensor::all_lower(chart, 1);
  std::vector<std::size_t> sigma_var(n);
  for (std::size_t c = 0; c < n; ++c) {
    sigma_var[c] = chart->parameter_var(base->num_parameters() + c);
    sigma.at({c}) = RationalFunction::variable(chart, sigma_var[c]);
  }
  Tensor F = restriction_rhs(nd2, sigma, m2);
  const Tensor& G = m2.christoffel();
  const Tensor& R = m2.riemann();

  // Partial derivative of sigma_c along b on solutions: F_cb + Gamma^e_bc sigma_e.
  Tensor dsigma = Tensor::all_lower(chart, 2);  // [c][b]
  dsigma.for_each_index([&](const Index& idx) {
    RationalFunction v = F.at({idx[0], idx[1]});
    for (std::size_t e = 0; e < n; ++e)
      if (!G.at({e, idx[1], idx[0]}).is_zero()) v += G.at({e, idx[1], idx[0]}) * sigma.at({e});
    dsigma[idx] = v;
  });
  // grad_b F_ak along solutions, [a][k][b].
  Tensor dF = Tensor::all_lower(chart, 3);
  dF.for_each_index([&](const Index& idx) {
    const std::size_t a = idx[0], k = idx[1], b = idx[2];
    const RationalFunction& f = F.at({a, k});
    RationalFunction v = f.diff(b);
    for (std::size_t c = 0; c < n; ++c) {
      RationalFunction p = f.partial(sigma_var[c]);
      if (!p.is_zero()) v += p * dsigma.at({c, b});
    }
    for (std::size_t e = 0; e < n; ++e) {
      if (!G.at({e, b, a}).is_zero()) v -= G.at({e, b, a}) * F.at({e, k});
      if (!G.at({e, b, k}).is_zero()) v -= G.at({e, b, k}) * F.at({a, e});
    }
    dF[idx] = v;
  });
  Tensor out = Tensor::all_lower(chart, 3);
  out.for_each_index([&](const Index& idx) {
    const std::size_t a = idx[0], k = idx[1], b = idx[2];
    if (k == b) return;
    RationalFunction v = dF.at({a, k, b}) - dF.at({a, b, k});
    for (std::size_t l = 0; l < n; ++l)
      if (!R.at({l, a, k, b}).is_zero()) v -= R.at({l, a, k, b}) * sigma.at({l});
    out[idx] = v;
  });
  return out;
}

TorsionView torsion_view(const StructureReport& r, const Metric& metric) {
  const long n = static_cast<long>(r.D.dim());
  TorsionView v;
  v.torsion = raise(r.D_lower - permute(r.D_lower, {0, 2, 1}), 0, metric);
  Tensor c = contract(v.torsion, 0, 1);  // T'^k_kj
  Tensor delta = identity(r.D.chart());
  // (c_j delta^k_i - c_i delta^k_j)/(n-1), [k][i][j]
  Tensor dc = outer(delta, c);
  Tensor vec = dc - permute(dc, {0, 2, 1});
  v.vectorial_residual = v.torsion - vec * inverse_of(n - 1);
  v.u = (r.s - r.d) * inverse_of(n - 1);
  return v;
}

Tensor torsion_from_parts(const StructureReport& r, const Metric& metric) {
  const long n = static_cast<long>(r.D.dim());
  Tensor t_bar = r.t * Rational(n, (n - 1) * (n + 2));
  Tensor u = (r.s - t_bar * Rational(n + 2)) * inverse_of(n);
  Tensor delta = identity(r.D.chart());
  Tensor hook = raise(r.N - permute(r.N, {0, 2, 1}), 0, metric);
  // u_j delta^k_i - u_i delta^k_j
  return hook + outer(delta, u) - permute(outer(delta, u), {0, 2, 1});
}

std::vector<double> ProlongationState::flat() const {
  std::vector<double> y{V};
  y.insert(y.end(), grad.begin(), grad.end());
  y.push_back(lap);
  return y;
}

ProlongationState ProlongationState::from_flat(std::vector<double> point, std::span<const double> values) {
  ProlongationState s;
  s.point = std::move(point);
  s.V = values.front();
  s.grad.assign(values.begin() + 1, values.end() - 1);
  s.lap = values.back();
  return s;
}

Prolongation::Prolongation(const NonDegStructure& nd, const Metric& metric) : n_(nd.T.dim()), chart_(nd.T.chart()) {
  const std::size_t m = n_ + 2;
  const long nl = static_cast<long>(n_);
  const Tensor& G = metric.christoffel();
  const Tensor& g = metric.g();
  coeffs_.assign(n_ * m * m, zero(chart_));
  auto at = [&](std::size_t k, std::size_t row, std::size_t col) -> RationalFunction& {
    return coeffs_[(k * m + row) * m + col];
  };
  for (std::size_t k = 0; k < n_; ++k) {
    at(k, 0, 1 + k) = RationalFunction(chart_, Rational(1));
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t a = 0; a < n_; ++a) at(k, 1 + i, 1 + a) = nd.T.at({i, k, a}) + G.at({a, k, i});
      at(k, 1 + i, n_ + 1) = g.at({i, k}) * inverse_of(nl);
    }
    for (std::size_t a = 0; a < n_; ++a) at(k, n_ + 1, 1 + a) = nd.q.at({k, a}) * Rational(nl, nl - 1);
    at(k, n_ + 1, n_ + 1) = nd.t.at({k}) * inverse_of(nl - 1);
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    nonzero_.push_back(i);
    const Polynomial& den = coeffs_[i].den();
    if (den.is_constant()) continue;
    if (std::find(denominators_.begin(), denominators_.end(), den) == denominators_.end()) denominators_.push_back(den);
  }
  for (const auto& atom : chart_->atoms()) radicands_.push_back(atom.radicand);
}

std::vector<double> Prolongation::coefficient(std::span<const double> point, std::size_t k) const {
  const std::size_t m = n_ + 2;
  std::vector<double> vals = variable_values(*chart_, point, {});
  std::vector<double> A(m * m, 0.0);
  for (std::size_t idx : nonzero_) {
    if (idx / (m * m) != k) continue;
    const RationalFunction& f = coeffs_[idx];
    const double den = f.den().eval(vals);
    if (den == 0.0) throw SingularPoint("pole of the prolongation coefficients");
    A[idx % (m * m)] = f.num().eval(vals) / den;
  }
  return A;
}

std::vector<std::vector<double>> Prolongation::rhs(std::span<const double> point, std::span<const double> state) const {
  const std::size_t m = n_ + 2;
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < n_; ++k) {
    std::vector<double> A = coefficient(point, k), dy(m, 0.0);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) dy[r] += A[r * m + c] * state[c];
    out.push_back(std::move(dy));
  }
  return out;
}

void Prolongation::check_segment(std::span<const double> a, std::span<const double> b) const {
  constexpr int kSamples = 256;
  constexpr double kMargin = 1e-9;
  std::vector<double> x(n_), vals(kMaxVariables, 0.0), previous(denominators_.size(), 0.0);
  for (int s = 0; s <= kSamples; ++s) {
    const double tau = static_cast<double>(s) / kSamples;
    for (std::size_t i = 0; i < n_; ++i) x[i] = a[i] + tau * (b[i] - a[i]);
    std::fill(vals.begin(), vals.end(), 0.0);
    std::copy(x.begin(), x.end(), vals.begin());
    for (const auto& p : radicands_)
      if (!(p.eval(vals) > kMargin)) throw SingularPath("path meets a non-positive radicand");
    for (std::size_t d = 0; d < denominators_.size(); ++d) {
      // Denominators are atom-free polynomials in the coordinates.
      const double v = denominators_[d].eval(vals);
      if (!std::isfinite(v) || std::fabs(v) < kMargin || (s > 0 && (v > 0) != (previous[d] > 0)))
        throw SingularPath("path meets a pole of the prolongation coefficients");
      previous[d] = v;
    }
  }
}

std::vector<double> Prolongation::transport(std::span<const double> a, std::span<const double> b) const {
  const std::size_t m = n_ + 2;
  check_segment(a, b);
  std::vector<double> y = identity_matrix(m);
  std::vector<double> dir(b.begin(), b.end());
  for (std::size_t i = 0; i < n_; ++i) dir[i] -= a[i];
  if (std::all_of(dir.begin(), dir.end(), [](double v) { return v == 0.0; })) return y;
  std::vector<double> x(n_), M(m * m);
  auto system = [&](const std::vector<double>& Y, std::vector<double>& dY, double tau) {
    for (std::size_t i = 0; i < n_; ++i) x[i] = a[i] + tau * dir[i];
    std::fill(M.begin(), M.end(), 0.0);
    for (std::size_t k = 0; k < n_; ++k) {
      if (dir[k] == 0.0) continue;
      std::vector<double> A = coefficient(x, k);
      for (std::size_t i = 0; i < m * m; ++i) M[i] += dir[k] * A[i];
    }
    dY = matmul(M, Y, m);
  };
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled(1e-12, 1e-12, ode::runge_kutta_dopri5<std::vector<double>>());
  ode::integrate_adaptive(stepper, system, y, 0.0, 1.0, 1e-2);
  return y;
}

std::vector<double> Prolongation::integrate_state(std::span<const double> a, std::span<const double> b,
                                                  std::span<const double> initial) const {
  const std::size_t m = n_ + 2;
  check_segment(a, b);
  std::vector<double> y(initial.begin(), initial.end());
  std::vector<double> dir(b.begin(), b.end());
  for (std::size_t i = 0; i < n_; ++i) dir[i] -= a[i];
  std::vector<double> x(n_);
  auto system = [&](const std::vector<double>& Y, std::vector<double>& dY, double tau) {
    for (std::size_t i = 0; i < n_; ++i) x[i] = a[i] + tau * dir[i];
    dY.assign(m, 0.0);
    for (std::size_t k = 0; k < n_; ++k) {
      if (dir[k] == 0.0) continue;
      std::vector<double> A = coefficient(x, k);
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) dY[r] += dir[k] * A[r * m + c] * Y[c];
    }
  };
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled(1e-12, 1e-12, ode::runge_kutta_dopri5<std::vector<double>>());
  ode::integrate_adaptive(stepper, system, y, 0.0, 1.0, 1e-2);
  return y;
}

std::vector<std::vector<double>> prolong_rhs(const ProlongationState& state, const NonDegStructure& nd,
                                             const Metric& metric) {
  return Prolongation(nd, metric).rhs(state.point, state.flat());
}

std::size_t BasisSolution::state_size() const {
  return static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(fundamental.front().size()))));
}

std::vector<double> BasisSolution::state(std::size_t target, std::span<const double> initial) const {
  const std::size_t m = state_size();
  const Mat& F = fundamental.at(target);
  std::vector<double> y(m, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) y[r] += F[r * m + c] * initial[c];
  return y;
}

namespace {

Mat staircase(const Prolongation& p, std::span<const double> base, const std::vector<double>& target,
              const std::vector<std::size_t>& order) {
  const std::size_t m = p.state_size();
  Mat total = identity_matrix(m);
  std::vector<double> from(base.begin(), base.end());
  for (std::size_t axis : order) {
    if (from[axis] == target[axis]) continue;
    std::vector<double> to = from;
    to[axis] = target[axis];
    total = matmul(p.transport(from, to), total, m);
    from = to;
  }
  return total;
}

}  // namespace

BasisSolution integrate_basis(const Prolongation& p, std::span<const double> base,
                              const std::vector<std::vector<double>>& targets, double tolerance) {
  const std::size_t n = p.dim();
  BasisSolution out;
  out.base.assign(base.begin(), base.end());
  out.targets = targets;
  std::vector<std::size_t> forward(n), backward(n);
  for (std::size_t i = 0; i < n; ++i) forward[i] = i, backward[i] = n - 1 - i;
  for (const auto& target : targets) {
    Mat direct = p.transport(base, target);
    Mat second;
    try {
      second = staircase(p, base, target, forward);
    } catch (const SingularPath&) {
      second = staircase(p, base, target, backward);
    }
    double gap = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i) gap = std::max(gap, std::fabs(direct[i] - second[i]));
    out.path_disagreement = std::max(out.path_disagreement, gap);
    if (gap > tolerance) {
      std::ostringstream msg;
      msg << "two paths to the same target disagree by " << gap;
      throw PathDependence(msg.str());
    }
    out.fundamental.push_back(std::move(direct));
  }
  return out;
}

std::vector<std::vector<double>> Grid::points() const {
  if (counts.size() != center.size()) throw InputError("grid and centre dimensions differ");
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> idx(counts.size(), 0);
  if (std::any_of(counts.begin(), counts.end(), [](std::size_t c) { return c == 0; })) return out;
  while (true) {
    std::vector<double> p(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k)
      p[k] = center[k] + (static_cast<double>(idx[k]) - 0.5 * static_cast<double>(counts[k] - 1)) * spacing;
    out.push_back(std::move(p));
    std::size_t k = counts.size();
    while (k-- > 0) {
      if (++idx[k] < counts[k]) break;
      idx[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

ExtensionResult extension_direction(const BasisSolution& basis, const PotentialFamily& family,
                                    const std::vector<Expr>& dictionary, double tolerance) {
  const ChartPtr& chart = family.chart();
  const std::size_t n = chart->dim(), m = n + 2, P = basis.targets.size();
  const Eigen::Index rows = static_cast<Eigen::Index>(P * (n + 1));

  // Values and gradients of a rational function at the grid points.
  auto sample = [&](const RationalFunction& f) {
    Eigen::VectorXd v(rows);
    std::vector<RationalFunction> grad;
    for (std::size_t k = 0; k < n; ++k) grad.push_back(f.diff(k));
    for (std::size_t p = 0; p < P; ++p) {
      const auto& x = basis.targets[p];
      v(static_cast<Eigen::Index>(p * (n + 1))) = f.eval(x);
      for (std::size_t k = 0; k < n; ++k) v(static_cast<Eigen::Index>(p * (n + 1) + 1 + k)) = grad[k].eval(x);
    }
    return v;
  };

  Eigen::MatrixXd S(rows, static_cast<Eigen::Index>(m));
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t r = 0; r <= n; ++r)
      for (std::size_t c = 0; c < m; ++c)
        S(static_cast<Eigen::Index>(p * (n + 1) + r), static_cast<Eigen::Index>(c)) = basis.fundamental[p][r * m + c];

  ExtensionResult out;
  out.points = basis.targets;
  const std::size_t fam_size = family.values().size();
  Eigen::MatrixXd C(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(fam_size));
  Eigen::MatrixXd family_samples(rows, static_cast<Eigen::Index>(fam_size));
  for (std::size_t j = 0; j < fam_size; ++j) {
    Eigen::VectorXd f = sample(family.values()[j]);
    family_samples.col(static_cast<Eigen::Index>(j)) = f;
    auto [c, res] = least_squares(S, f);
    C.col(static_cast<Eigen::Index>(j)) = c;
    out.family_residual = std::max(out.family_residual, res);
  }
  if (out.family_residual > tolerance) {
    std::ostringstream msg;
    msg << "family is not contained in the integrated solution space (relative residual " << out.family_residual << ")";
    throw FamilyNotContained(msg.str());
  }

  // Complement of the family's initial data.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(C);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::VectorXd e = Q.col(static_cast<Eigen::Index>(m - 1));
  Eigen::Index big = 0;
  e.cwiseAbs().maxCoeff(&big);
  if (e(big) < 0) e = -e;
  out.direction.assign(e.data(), e.data() + e.size());
  Eigen::VectorXd target(rows);
  for (std::size_t p = 0; p < P; ++p) {
    out.samples.push_back(basis.state(p, out.direction));
    for (std::size_t r = 0; r <= n; ++r) target(static_cast<Eigen::Index>(p * (n + 1) + r)) = out.samples.back()[r];
  }

  if (dictionary.empty()) {
    out.fit_message = "FitFailed: empty dictionary";
    return out;
  }
  Eigen::MatrixXd A(rows, static_cast<Eigen::Index>(fam_size + dictionary.size()));
  A.leftCols(static_cast<Eigen::Index>(fam_size)) = family_samples;
  for (std::size_t d = 0; d < dictionary.size(); ++d)
    A.col(static_cast<Eigen::Index>(fam_size + d)) = sample(normalize(dictionary[d], chart));
  auto [x, res] = least_squares(A, target);
  out.fit_residual = res;
  Eigen::VectorXd b = x.tail(static_cast<Eigen::Index>(dictionary.size()));
  Eigen::Index lead = 0;
  b.cwiseAbs().maxCoeff(&lead);
  if (res > tolerance || std::fabs(b(lead)) < 1e-12) {
    std::ostringstream msg;
    msg << "FitFailed: relative residual " << res << " against the dictionary";
    out.fit_message = msg.str();
    return out;
  }
  b /= b(lead);
  std::vector<Expr> terms;
  for (Eigen::Index d = 0; d < b.size(); ++d) {
    out.coefficients.push_back(b(d));
    Rational q = rationalize(b(d), 1000);
    out.exact_coefficients.push_back(q);
    if (q != 0) terms.push_back(Expr::constant(q) * dictionary[static_cast<std::size_t>(d)]);
  }
  out.fit_expression = to_string(Expr::sum(terms), *chart);
  out.fit_status = FitStatus::Fitted;
  out.fit_message = "fitted";
  return out;
}

std::string sample_table(const std::vector<std::vector<double>>& points, const std::vector<std::vector<double>>& samples,
                         const Chart& chart) {
  std::ostringstream os;
  os << "#";
  for (const auto& c : chart.coordinates()) os << " " << c;
  os << " V";
  for (const auto& c : chart.coordinates()) os << " V_" << c;
  os << " LapV\n";
  os << std::setprecision(17);
  for (std::size_t p = 0; p < points.size(); ++p) {
    bool first = true;
    for (double v : points[p]) {
      os << (first ? "" : " ") << v;
      first = false;
    }
    for (double v : samples[p]) os << " " << v;
    os << "\n";
  }
  return os.str();
}

}  // namespace semideg
