#include "semideg/geometry.hpp"

#include <map>

#include "semideg/errors.hpp"

namespace semideg {

namespace {


// det of the rows [row, n) restricted to the columns in `mask`.
RationalFunction minor_det(const Matrix& m, std::size_t row, unsigned mask, std::map<unsigned, RationalFunction>& memo) {
  const std::size_t n = m.size();
  if (row == n) return RationalFunction(m[0][0].chart(), Rational(1));
  if (auto it = memo.find(mask); it != memo.end()) return it->second;
  RationalFunction acc(m[0][0].chart(), Rational(0));
  int sign = 1;
  for (std::size_t c = 0; c < n; ++c) {
    if (!(mask & (1U << c))) continue;
    if (!m[row][c].is_zero()) {
      RationalFunction term = m[row][c] * minor_det(m, row + 1, mask & ~(1U << c), memo);
      if (sign > 0) acc += term;
      else acc -= term;
    }
    sign = -sign;
  }
  memo.emplace(mask, acc);
  return acc;
}

}  // namespace

RationalFunction determinant(const Matrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return RationalFunction();
  std::map<unsigned, RationalFunction> memo;
  return minor_det(m, 0, (1U << n) - 1, memo);
}

Matrix adjugate(const Matrix& m) {
  const std::size_t n = m.size();
  Matrix adj(n, std::vector<RationalFunction>(n));
  if (n == 1) {
    adj[0][0] = RationalFunction(m[0][0].chart(), Rational(1));
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Matrix sub;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        std::vector<RationalFunction> row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != j) row.push_back(m[r][c]);
        sub.push_back(std::move(row));
      }
      RationalFunction cof = determinant(sub);
      if ((i + j) % 2 == 1) cof = -cof;
      adj[j][i] = cof;  // transpose of the cofactor matrix
    }
  return adj;
}

Tensor identity(const ChartPtr& chart) {
  Tensor d(chart, {Variance::Upper, Variance::Lower});
  for (std::size_t i = 0; i < chart->dim(); ++i) d.at({i, i}) = RationalFunction(chart, Rational(1));
  return d;
}

Metric::Metric(Tensor g) : g_(std::move(g)) {
  if (g_.order() != 2 || g_.variance(0) != Variance::Lower || g_.variance(1) != Variance::Lower)
    throw DegenerateMetric("metric must be a covariant 2-tensor");
  const ChartPtr& chart = g_.chart();
  const std::size_t n = g_.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!(g_.at({i, j}) == g_.at({j, i}))) throw DegenerateMetric("metric is not symmetric");

  Matrix m(n, std::vector<RationalFunction>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = g_.at({i, j});
  det_ = determinant(m);
  if (det_.is_zero()) throw DegenerateMetric("det g vanishes identically");
  Matrix adj = adjugate(m);
  RationalFunction inv_det = det_.inverse();
  g_inv_ = Tensor(chart, {Variance::Upper, Variance::Upper});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g_inv_.at({i, j}) = adj[i][j] * inv_det;

  flat_chart_ = true;
  for (std::size_t i = 0; i < g_.size(); ++i)
    if (!g_.component(i).is_constant()) flat_chart_ = false;

  // dg[a][i][j] = g_ai,j
  gamma_ = Tensor(chart, {Variance::Upper, Variance::Lower, Variance::Lower});
  riemann_ = Tensor(chart, {Variance::Upper, Variance::Lower, Variance::Lower, Variance::Lower});
  ricci_ = Tensor(chart, {Variance::Lower, Variance::Lower});
  if (flat_chart_) return;

  Tensor dg(chart, {Variance::Lower, Variance::Lower, Variance::Lower});
  dg.for_each_index([&](const Index& idx) { dg[idx] = g_.at({idx[0], idx[1]}).diff(idx[2]); });
  Tensor lowered(chart, {Variance::Lower, Variance::Lower, Variance::Lower});
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        RationalFunction v = (dg.at({a, i, j}) + dg.at({a, j, i}) - dg.at({i, j, a})) * Rational(1, 2);
        lowered.at({a, i, j}) = v;
        lowered.at({a, j, i}) = v;
      }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        RationalFunction acc(chart, Rational(0));
        for (std::size_t a = 0; a < n; ++a)
          if (!g_inv_.at({k, a}).is_zero() && !lowered.at({a, i, j}).is_zero())
            acc += g_inv_.at({k, a}) * lowered.at({a, i, j});
        gamma_.at({k, i, j}) = acc;
        gamma_.at({k, j, i}) = acc;
      }

  // R^a_bcd = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d) {
          RationalFunction v = gamma_.at({a, d, b}).diff(c) - gamma_.at({a, c, b}).diff(d);
          for (std::size_t e = 0; e < n; ++e) {
            v += gamma_.at({a, c, e}) * gamma_.at({e, d, b});
            v -= gamma_.at({a, d, e}) * gamma_.at({e, c, b});
          }
          riemann_.at({a, b, c, d}) = v;
          riemann_.at({a, b, d, c}) = -v;
        }
  ricci_ = contract(riemann_, 0, 2);
}

Metric Metric::euclidean(ChartPtr chart) {
  Tensor g = Tensor::all_lower(chart, 2);
  for (std::size_t i = 0; i < chart->dim(); ++i) g.at({i, i}) = RationalFunction(chart, Rational(1));
  return Metric(std::move(g));
}

Tensor cov_derivative(const Tensor& t, const Metric& metric) {
  std::vector<Variance> v = t.variance();
  v.push_back(Variance::Lower);
  Tensor out(t.chart(), v);
  const Tensor& gamma = metric.christoffel();
  const std::size_t n = t.dim(), k = t.order();
  const bool flat = metric.is_flat_chart();
  Index src(k);
  out.for_each_index([&](const Index& idx) {
    const std::size_t d = idx[k];
    std::copy(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), src.begin());
    RationalFunction acc = t[src].diff(d);
    if (!flat) {
      for (std::size_t s = 0; s < k; ++s) {
        const std::size_t orig = src[s];
        for (std::size_t c = 0; c < n; ++c) {
          src[s] = c;
          const RationalFunction& tv = t[src];
          if (tv.is_zero()) continue;
          if (t.variance(s) == Variance::Upper) {
            const RationalFunction& gv = gamma.at({orig, d, c});
            if (!gv.is_zero()) acc += gv * tv;
          } else {
            const RationalFunction& gv = gamma.at({c, d, orig});
            if (!gv.is_zero()) acc -= gv * tv;
          }
        }
        src[s] = orig;
      }
    }
    out[idx] = acc;
  });
  return out;
}

namespace {

// Contracts slot `slot` of t with the first index of a 2-tensor m, keeping the slot position.
Tensor apply_on_slot(const Tensor& t, std::size_t slot, const Tensor& m, Variance result) {
  if (slot >= t.order()) throw SlotOutOfRange("slot out of range");
  std::vector<Variance> v = t.variance();
  v[slot] = result;
  Tensor out(t.chart(), v);
  Index src;
  out.for_each_index([&](const Index& idx) {
    src = idx;
    RationalFunction acc(t.chart(), Rational(0));
    for (std::size_t a = 0; a < t.dim(); ++a) {
      const RationalFunction& mv = m.at({idx[slot], a});
      if (mv.is_zero()) continue;
      src[slot] = a;
      const RationalFunction& tv = t[src];
      if (!tv.is_zero()) acc += mv * tv;
    }
    out[idx] = acc;
  });
  return out;
}

}  // namespace

Tensor raise(const Tensor& t, std::size_t slot, const Metric& metric) {
  if (slot >= t.order()) throw SlotOutOfRange("slot out of range");
  if (t.variance(slot) == Variance::Upper) return t;
  return apply_on_slot(t, slot, metric.g_inv(), Variance::Upper);
}

Tensor lower(const Tensor& t, std::size_t slot, const Metric& metric) {
  if (slot >= t.order()) throw SlotOutOfRange("slot out of range");
  if (t.variance(slot) == Variance::Lower) return t;
  return apply_on_slot(t, slot, metric.g(), Variance::Lower);
}

Tensor lower_all(const Tensor& t, const Metric& metric) {
  Tensor out = t;
  for (std::size_t s = 0; s < t.order(); ++s) out = lower(out, s, metric);
  return out;
}

Tensor trace(const Tensor& t, std::size_t slot_a, std::size_t slot_b, const Metric& metric) {
  if (slot_a >= t.order() || slot_b >= t.order() || slot_a == slot_b) throw SlotOutOfRange("bad trace slots");
  if (t.variance(slot_a) != t.variance(slot_b)) return contract(t, slot_a, slot_b);
  Tensor mixed = t.variance(slot_a) == Variance::Lower ? raise(t, slot_a, metric) : lower(t, slot_a, metric);
  return contract(mixed, slot_a, slot_b);
}

Tensor hook_project_21(const Tensor& m, const Metric& metric) {
  if (m.order() != 3) throw WrongOrder("hook projector needs an order-3 tensor");
  for (auto v : m.variance())
    if (v != Variance::Lower) throw WrongOrder("hook projector needs an all-lower tensor");
  const ChartPtr& chart = m.chart();
  const std::size_t n = m.dim();
  // m_j = M^i_ji - M^i_ij
  Tensor tr = trace(m, 0, 2, metric) - trace(m, 0, 1, metric);
  const Tensor& g = metric.g();
  Rational c(2, 3 * (static_cast<long>(n) - 1));
  c.canonicalize();
  Tensor out = Tensor::all_lower(chart, 3);
  out.for_each_index([&](const Index& idx) {
    const std::size_t i = idx[0], j = idx[1], k = idx[2];
    RationalFunction v = (m.at({i, j, k}) + m.at({j, i, k})) * Rational(1, 3);
    v -= (m.at({i, k, j}) + m.at({j, k, i})) * Rational(1, 3);
    RationalFunction trace_part = g.at({i, j}) * tr.at({k});
    trace_part -= (g.at({k, i}) * tr.at({j}) + g.at({k, j}) * tr.at({i})) * Rational(1, 2);
    v += trace_part * c;
    out[idx] = v;
  });
  return out;
}

}  // namespace semideg
