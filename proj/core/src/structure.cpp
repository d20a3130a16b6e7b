#include "semideg/structure.hpp"

#include "semideg/errors.hpp"

namespace semideg {

namespace {

RationalFunction zero(const ChartPtr& chart) { return RationalFunction(chart, Rational(0)); }

Tensor gradient(const RationalFunction& v) {
  Tensor g = Tensor::all_lower(v.chart(), 1);
  for (std::size_t k = 0; k < v.chart()->dim(); ++k) g.at({k}) = v.diff(k);
  return g;
}

void check_size(const RationalFunction& f, std::size_t bound) {
  if (f.size() > bound)
    throw NonPolynomialBlowup("canonical form has " + std::to_string(f.size()) + " terms, bound is " +
                              std::to_string(bound));
}

}  // namespace

PotentialFamily::PotentialFamily(Metric metric, std::vector<Expr> basis)
    : metric_(std::move(metric)), basis_(std::move(basis)) {
  const std::size_t n = metric_.dim();
  if (basis_.size() != n + 1)
    throw InvalidFamily("expected " + std::to_string(n + 1) + " potentials, got " + std::to_string(basis_.size()));
  std::size_t constants = 0;
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    values_.push_back(normalize(basis_[k], chart()));
    bool constant = true;
    for (std::size_t i = 0; i < n && constant; ++i) constant = values_.back().diff(i).is_zero();
    if (constant) {
      constant_index_ = k;
      ++constants;
    }
  }
  if (constants != 1)
    throw InvalidFamily("exactly one potential must be constant, found " + std::to_string(constants));
}

std::vector<std::size_t> PotentialFamily::gradient_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < basis_.size(); ++k)
    if (k != constant_index_) out.push_back(k);
  return out;
}

Tensor extract_D(const PotentialFamily& family, std::size_t size_bound) {
  const Metric& metric = family.metric();
  const ChartPtr& chart = family.chart();
  const std::size_t n = metric.dim();
  const auto rows = family.gradient_indices();

  // G_km = (V_k)_,m and the covariant Hessians of the n gradient potentials.
  Matrix G(n, std::vector<RationalFunction>(n));
  std::vector<Tensor> hess;
  for (std::size_t k = 0; k < n; ++k) {
    Tensor grad = gradient(family.values()[rows[k]]);
    for (std::size_t m = 0; m < n; ++m) G[k][m] = grad.at({m});
    hess.push_back(cov_derivative(grad, metric));
  }
  RationalFunction det = determinant(G);
  if (det.is_zero()) throw GradientsDependent("gradients of the non-constant potentials are linearly dependent");
  Matrix adj = adjugate(G);
  RationalFunction inv_det = det.inverse();

  // D_ij^m = sum_k H_k,ij (G^-1)_mk
  Tensor D(chart, {Variance::Lower, Variance::Lower, Variance::Upper});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m) {
        RationalFunction acc = zero(chart);
        for (std::size_t k = 0; k < n; ++k) {
          const RationalFunction& h = hess[k].at({i, j});
          if (!h.is_zero() && !adj[m][k].is_zero()) acc += h * adj[m][k];
        }
        if (!acc.is_zero()) acc *= inv_det;
        check_size(acc, size_bound);
        D.at({i, j, m}) = acc;
        D.at({j, i, m}) = acc;
      }
  return D;
}

Tensor hessian_residual(const PotentialFamily& family, const Tensor& D, std::size_t k) {
  Tensor grad = gradient(family.values().at(k));
  Tensor out = cov_derivative(grad, family.metric());
  out.for_each_index([&](const Index& idx) {
    for (std::size_t m = 0; m < D.dim(); ++m) out[idx] -= D.at({idx[0], idx[1], m}) * grad.at({m});
  });
  return out;
}

Tensor check_D_integrability(const Tensor& D, const Metric& metric) {
  const std::size_t n = D.dim();
  const ChartPtr& chart = D.chart();
  Tensor dD = cov_derivative(D, metric);  // [i][j][m][k]
  const Tensor& R = metric.riemann();
  Tensor out(chart, {Variance::Lower, Variance::Lower, Variance::Lower, Variance::Upper});
  auto term = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t m) {
    RationalFunction v = dD.at({i, j, m, k});
    for (std::size_t a = 0; a < n; ++a) {
      const RationalFunction& da = D.at({i, j, a});
      if (!da.is_zero() && !D.at({a, k, m}).is_zero()) v += da * D.at({a, k, m});
    }
    return v;
  };
  out.for_each_index([&](const Index& idx) {
    const std::size_t i = idx[0], j = idx[1], k = idx[2], m = idx[3];
    if (j == k) return;
    out[idx] = term(i, j, k, m) - term(i, k, j, m) - R.at({m, i, j, k});
  });
  return out;
}

Tensor metric_times(const Tensor& a, const Metric& metric, std::size_t gi, std::size_t gj, std::size_t ak) {
  Tensor out = Tensor::all_lower(metric.chart(), 3);
  const Tensor& g = metric.g();
  out.for_each_index([&](const Index& idx) {
    const RationalFunction& gv = g.at({idx[gi], idx[gj]});
    const RationalFunction& av = a.at({idx[ak]});
    if (!gv.is_zero() && !av.is_zero()) out[idx] = gv * av;
  });
  return out;
}

Tensor symmetric_tracefree_part(const Tensor& m, const Metric& metric) {
  const long n = static_cast<long>(m.dim());
  Tensor W = symmetrize(m, {0, 1, 2}) * Rational(1, 6);
  Tensor w = trace(W, 0, 1, metric);
  Tensor trace_part = metric_times(w, metric, 0, 1, 2) + metric_times(w, metric, 0, 2, 1) + metric_times(w, metric, 1, 2, 0);
  return W - trace_part * Rational(1, n + 2);
}

StructureReport decompose_D(const Tensor& D, const Metric& metric) {
  StructureReport r;
  const std::size_t n = D.dim();
  r.D = D;
  r.D_lower = lower(D, 2, metric);
  r.d = contract(D, 1, 2);
  r.s = trace(r.D_lower, 0, 1, metric);
  r.t = r.d - r.s * Rational(1, static_cast<long>(n));
  r.N = hook_project_21(r.D_lower, metric);
  r.S = symmetric_tracefree_part(r.D_lower, metric);
  r.verdict = r.N.is_zero() ? Verdict::Extendable : Verdict::NonExtendable;
  return r;
}

Tensor reassemble_D(const StructureReport& r, const Metric& metric) {
  const long n = static_cast<long>(r.D.dim());
  const Rational alpha(n, (n + 2) * (n - 1)), beta(1, (n + 2) * (n - 1));
  // alpha (d_i g_jk + d_j g_ik - (2/n) g_ij d_k) - beta (s_i g_jk + s_j g_ik - (n+1) g_ij s_k)
  Tensor d_part = metric_times(r.d, metric, 1, 2, 0) + metric_times(r.d, metric, 0, 2, 1) -
                  metric_times(r.d, metric, 0, 1, 2) * Rational(2, n);
  Tensor s_part = metric_times(r.s, metric, 1, 2, 0) + metric_times(r.s, metric, 0, 2, 1) -
                  metric_times(r.s, metric, 0, 1, 2) * Rational(n + 1);
  return r.S + r.N + d_part * alpha - s_part * beta;
}

Verdict verdict(const StructureReport& report) {
  return report.N.is_zero() ? Verdict::Extendable : Verdict::NonExtendable;
}

Tensor exterior_derivative(const Tensor& omega) {
  if (omega.order() != 1 || omega.variance(0) != Variance::Lower) throw WrongOrder("expected a lower 1-form");
  Tensor out = Tensor::all_lower(omega.chart(), 2);
  out.for_each_index([&](const Index& idx) {
    if (idx[0] != idx[1]) out[idx] = omega.at({idx[0]}).diff(idx[1]) - omega.at({idx[1]}).diff(idx[0]);
  });
  return out;
}

bool check_closed(const Tensor& omega) { return exterior_derivative(omega).is_zero(); }

bool find_exactness_witness(const Tensor& omega, const Expr& f) {
  const ChartPtr& chart = omega.chart();
  for (std::size_t k = 0; k < omega.dim(); ++k)
    if (!(normalize(diff(f, k, *chart), chart) == omega.at({k}))) return false;
  return true;
}

Tensor ds_formula_check(const StructureReport& r, const Metric& metric) {
  const ChartPtr& chart = r.D.chart();
  const std::size_t n = r.D.dim();
  const long nl = static_cast<long>(n);
  Tensor N_up = raise(r.N, 0, metric);      // N^m_kl
  Tensor divN = contract(cov_derivative(N_up, metric), 0, 3);  // N^m_kl,m
  Tensor S_up = raise(raise(r.S, 1, metric), 2, metric);       // S_k^jm
  Tensor s_up = raise(r.s, 0, metric), d_up = raise(r.d, 0, metric);
  const Rational cs(nl + 1, nl + 2), cd(2, nl + 2), lhs_c(nl - 2, nl - 1);

  Tensor X = Tensor::all_lower(chart, 2);  // bracketed expression, [k][l]
  X.for_each_index([&](const Index& idx) {
    const std::size_t k = idx[0], l = idx[1];
    RationalFunction v = divN.at({k, l});
    for (std::size_t m = 0; m < n; ++m) {
      const RationalFunction& nm = r.N.at({m, k, l});
      if (!nm.is_zero()) {
        if (!s_up.at({m}).is_zero()) v -= cs * s_up.at({m}) * nm;
        if (!d_up.at({m}).is_zero()) v += cd * d_up.at({m}) * nm;
      }
      for (std::size_t j = 0; j < n; ++j) {
        const RationalFunction& sv = S_up.at({k, j, m});
        if (sv.is_zero()) continue;
        RationalFunction diffN = r.N.at({m, j, l}) - r.N.at({m, l, j});
        if (!diffN.is_zero()) v += sv * diffN;
      }
    }
    X[idx] = v;
  });
  Tensor ds = exterior_derivative(r.s);  // [l][k] = s_l,k - s_k,l
  Tensor out = Tensor::all_lower(chart, 2);
  out.for_each_index([&](const Index& idx) {
    const std::size_t k = idx[0], l = idx[1];
    if (k != l) out[idx] = lhs_c * ds.at({l, k}) - (X.at({k, l}) - X.at({l, k}));
  });
  return out;
}

Tensor ds_trace_route(const StructureReport& r, const Metric& metric) {
  const ChartPtr& chart = r.D.chart();
  const std::size_t n = r.D.dim();
  Tensor D_up = raise(r.D_lower, 0, metric);                       // D^i_km
  Tensor divD = contract(cov_derivative(D_up, metric), 0, 3);      // grad^i D_ikm
  Tensor s_up = raise(r.s, 0, metric);
  Tensor D_mixed = raise(r.D_lower, 1, metric);                    // D_a^i_m
  const Tensor& ric = metric.ricci();
  Tensor ds_s = Tensor::all_lower(chart, 2);  // s_m,k as [m][k]
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k) ds_s.at({m, k}) = r.s.at({m}).diff(k);
  Tensor Y = Tensor::all_lower(chart, 2);  // [k][m]
  Y.for_each_index([&](const Index& idx) {
    const std::size_t k = idx[0], m = idx[1];
    RationalFunction v = ds_s.at({m, k}) - divD.at({k, m}) + ric.at({k, m});
    for (std::size_t a = 0; a < n; ++a) {
      if (!s_up.at({a}).is_zero()) v += s_up.at({a}) * r.D_lower.at({a, k, m});
      for (std::size_t i = 0; i < n; ++i) {
        // D_k^ia D_aim = D_ki^a D_a^i_m
        const RationalFunction& x = r.D.at({k, i, a});
        if (!x.is_zero() && !D_mixed.at({a, i, m}).is_zero()) v -= x * D_mixed.at({a, i, m});
      }
    }
    Y[idx] = v;
  });
  Tensor out = Tensor::all_lower(chart, 2);
  out.for_each_index([&](const Index& idx) {
    if (idx[0] != idx[1]) out[idx] = Y.at({idx[0], idx[1]}) - Y.at({idx[1], idx[0]});
  });
  return out;
}

StructureReport analyze_structure(const PotentialFamily& family, std::size_t size_bound) {
  const Metric& metric = family.metric();
  Tensor D = extract_D(family, size_bound);
  StructureReport r = decompose_D(D, metric);
  const long n = static_cast<long>(metric.dim());
  r.residuals.push_back(CheckOutcome::of("v-prolong", check_D_integrability(D, metric)));
  r.residuals.push_back(CheckOutcome::of("decomposition", reassemble_D(r, metric) - r.D_lower));
  Tensor dd = exterior_derivative(r.d), ds = exterior_derivative(r.s), dt = exterior_derivative(r.t);
  r.residuals.push_back(CheckOutcome::of("d-closed", dd));
  r.residuals.push_back(CheckOutcome::of("ts-closed", dt * Rational(n) + ds));
  r.residuals.push_back(CheckOutcome::of("ds-formula", ds_formula_check(r, metric)));
  r.residuals.push_back(CheckOutcome::of("ds-trace", ds_trace_route(r, metric)));
  return r;
}

}  // namespace semideg
