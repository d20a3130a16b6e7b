#include "semideg/killing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "semideg/errors.hpp"

namespace semideg {

namespace {

using Point = std::vector<double>;

// Straight-segment integration of a closed 1-form.
class OneFormIntegrator {
 public:
  explicit OneFormIntegrator(std::vector<RationalFunction> omega) : omega_(std::move(omega)) {
    const Chart& chart = *omega_.front().chart();
    for (const auto& w : omega_)
      if (!w.is_zero() && !w.den().is_constant() &&
          std::find(dens_.begin(), dens_.end(), w.den()) == dens_.end())
        dens_.push_back(w.den());
    for (const auto& atom : chart.atoms()) radicands_.push_back(atom.radicand);
  }

  double segment(std::span<const double> a, std::span<const double> b) const {
    const std::size_t n = a.size();
    Point dir(n);
    for (std::size_t i = 0; i < n; ++i) dir[i] = b[i] - a[i];
    if (std::all_of(dir.begin(), dir.end(), [](double v) { return v == 0.0; })) return 0.0;
    check(a, dir);
    Point x(n);
    auto f = [&](double tau) {
      for (std::size_t i = 0; i < n; ++i) x[i] = a[i] + tau * dir[i];
      double v = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        if (dir[k] != 0.0 && !omega_[k].is_zero()) v += omega_[k].eval(x) * dir[k];
      return v;
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 15, 1e-14);
  }

  double path(const std::vector<Point>& corners) const {
    double w = 0.0;
    for (std::size_t c = 1; c < corners.size(); ++c) w += segment(corners[c - 1], corners[c]);
    return w;
  }

 private:
  void check(std::span<const double> a, const Point& dir) const {
    constexpr int kSamples = 256;
    constexpr double kMargin = 1e-9;
    const Chart& chart = *omega_.front().chart();
    const std::size_t n = a.size();
    Point x(n), previous(dens_.size(), 0.0);
    for (int s = 0; s <= kSamples; ++s) {
      const double tau = static_cast<double>(s) / kSamples;
      for (std::size_t i = 0; i < n; ++i) x[i] = a[i] + tau * dir[i];
      Point vals(chart.num_variables(), 0.0);
      std::copy(x.begin(), x.end(), vals.begin());
      for (const auto& p : radicands_)
        if (!(p.eval(vals) > kMargin)) throw SingularPath("path meets a non-positive radicand");
      for (std::size_t d = 0; d < dens_.size(); ++d) {
        const double v = dens_[d].eval(vals);
        if (!std::isfinite(v) || std::fabs(v) < kMargin || (s > 0 && (v > 0) != (previous[d] > 0)))
          throw SingularPath("path meets a pole of K dV");
        previous[d] = v;
      }
    }
  }

  std::vector<RationalFunction> omega_;
  std::vector<Polynomial> dens_;
  std::vector<Polynomial> radicands_;
};

std::vector<RationalFunction> k_dv(const KillingCandidate& K, const RationalFunction& V, const Metric& metric) {
  const std::size_t n = metric.dim();
  const Tensor Km = raise(K.K, 1, metric);
  std::vector<RationalFunction> dV;
  for (std::size_t a = 0; a < n; ++a) dV.push_back(V.diff(a));
  std::vector<RationalFunction> omega(n, RationalFunction(metric.chart(), Rational(0)));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t a = 0; a < n; ++a) omega[j] += Km.at({j, a}) * dV[a];
  return omega;
}

std::vector<Point> staircase(std::span<const double> base, std::span<const double> target, bool forward) {
  const std::size_t n = base.size();
  std::vector<Point> corners{Point(base.begin(), base.end())};
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t axis = forward ? s : n - 1 - s;
    Point next = corners.back();
    next[axis] = target[axis];
    corners.push_back(next);
  }
  return corners;
}

}  // namespace

KillingCandidate::KillingCandidate(Tensor k, std::string l) : K(std::move(k)), label(std::move(l)) {
  if (K.order() != 2 || K.variance(0) != Variance::Lower || K.variance(1) != Variance::Lower)
    throw InputError("Killing candidate " + label + " must be an all-lower 2-tensor");
  if (!(K == permute(K, {1, 0}))) throw InputError("Killing candidate " + label + " is not symmetric");
}

Tensor is_killing(const KillingCandidate& K, const Metric& metric) {
  return symmetrize(cov_derivative(K.K, metric), {0, 1, 2}) * Rational(1, 6);
}

Tensor bertrand_darboux(const KillingCandidate& K, const RationalFunction& V, const Metric& metric) {
  const auto omega = k_dv(K, V, metric);
  Tensor w = Tensor::all_lower(metric.chart(), 1);
  for (std::size_t j = 0; j < omega.size(); ++j) w.at({j}) = omega[j];
  return exterior_derivative(w);
}

Tensor bertrand_darboux(const KillingCandidate& K, const Expr& V, const Metric& metric) {
  return bertrand_darboux(K, normalize(V, metric.chart()), metric);
}

WSamples reconstruct_W(const KillingCandidate& K, const RationalFunction& V, const Metric& metric,
                       std::span<const double> base, const std::vector<std::vector<double>>& targets,
                       double tolerance) {
  if (!bertrand_darboux(K, V, metric).is_zero()) throw NotClosed("d(K dV) is not zero; W does not exist");
  OneFormIntegrator integrate(k_dv(K, V, metric));
  WSamples out;
  for (const auto& target : targets) {
    const double w = integrate.path({Point(base.begin(), base.end()), target});
    double other = 0.0;
    try {
      other = integrate.path(staircase(base, target, true));
    } catch (const SingularPath&) {
      other = integrate.path(staircase(base, target, false));
    }
    const double gap = std::fabs(w - other) / std::max(1.0, std::fabs(w));
    if (gap > tolerance) throw PathDependence("W differs between paths by " + std::to_string(gap));
    out.path_disagreement = std::max(out.path_disagreement, gap);
    out.values.push_back(w);
  }
  return out;
}

Tensor killing_prolongation_residual(const KillingCandidate& K, const NonDegStructure& nd, const Metric& metric) {
  const std::size_t n = metric.dim();
  const Tensor dK = cov_derivative(K.K, metric);
  const Tensor Tu = raise(nd.T_low, 0, metric);  // T^b_ik
  const Tensor& k = K.K;
  Tensor r = Tensor::all_lower(metric.chart(), 3);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t c = 0; c < n; ++c) {
        RationalFunction hook(metric.chart(), Rational(0));
        for (std::size_t b = 0; b < n; ++b) {
          hook += k.at({j, b}) * Tu.at({b, i, c}) - k.at({i, b}) * Tu.at({b, j, c});
          hook += (k.at({c, b}) * Tu.at({b, j, i}) - k.at({j, b}) * Tu.at({b, c, i})) * Rational(2);
        }
        r.at({i, j, c}) = dK.at({i, j, c}) * Rational(3) - hook;
      }
  return r;
}

NumericBertrandDarboux::NumericBertrandDarboux(const KillingCandidate& K, const NonDegStructure& nd,
                                               const Metric& metric)
    : n_(metric.dim()),
      dK_(cov_derivative(raise(K.K, 1, metric), metric)),
      K_(raise(K.K, 1, metric)),
      T_(nd.T),
      g_(metric.g()) {}

double NumericBertrandDarboux::max_residual(std::span<const double> point, std::span<const double> state) const {
  const std::size_t n = n_;
  std::span<const double> grad = state.subspan(1, n);
  const double lap = state[n + 1];
  auto ev = [&](const RationalFunction& f) { return f.is_zero() ? 0.0 : f.eval(point); };
  std::vector<double> hess(n * n, 0.0), K(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t j = 0; j < n; ++j) {
      double v = ev(g_.at({a, j})) * lap / static_cast<double>(n);
      for (std::size_t c = 0; c < n; ++c) v += ev(T_.at({a, j, c})) * grad[c];
      hess[a * n + j] = v;
      K[a * n + j] = ev(K_.at({a, j}));
    }
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        v += (ev(dK_.at({i, a, j})) - ev(dK_.at({j, a, i}))) * grad[a];
        v += K[i * n + a] * hess[a * n + j] - K[j * n + a] * hess[a * n + i];
      }
      worst = std::max(worst, std::fabs(v));
    }
  return worst;
}

ConservationReport check_conservation(const KillingCandidate& K, const RationalFunction& V, const Metric& metric,
                                      std::span<const double> x0, std::span<const double> p0, double step,
                                      std::size_t steps) {
  const std::size_t n = metric.dim();
  std::vector<double> ginv(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const RationalFunction& c = metric.g_inv().at({i, j});
      if (!c.is_constant()) throw InputError("conservation check needs constant metric components");
      ginv[i * n + j] = c.constant_value().get_d();
    }
  if (!bertrand_darboux(K, V, metric).is_zero()) throw NotClosed("d(K dV) is not zero; W does not exist");
  const Tensor Kup = raise(raise(K.K, 0, metric), 1, metric);
  std::vector<RationalFunction> dV;
  for (std::size_t a = 0; a < n; ++a) dV.push_back(V.diff(a));
  OneFormIntegrator W(k_dv(K, V, metric));

  auto quad = [&](const std::vector<double>& m, const std::vector<double>& p) {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v += m[i * n + j] * p[i] * p[j];
    return v;
  };
  const Point start(x0.begin(), x0.end());
  auto energies = [&](const Point& q, const Point& p) {
    std::vector<double> kup(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) kup[i * n + j] = Kup.at({i, j}).is_zero() ? 0.0 : Kup.at({i, j}).eval(q);
    return std::pair{quad(ginv, p) + V.eval(q), quad(kup, p) + W.segment(start, q)};
  };

  Point q = start, p(p0.begin(), p0.end());
  auto coordinate_flow = [&](const Point& mom, Point& dq) {
    for (std::size_t i = 0; i < n; ++i) {
      dq[i] = 0.0;
      for (std::size_t j = 0; j < n; ++j) dq[i] += 2.0 * ginv[i * n + j] * mom[j];
    }
  };
  auto momentum_flow = [&](const Point& pos, Point& dp) {
    for (std::size_t i = 0; i < n; ++i) dp[i] = -dV[i].eval(pos);
  };
  boost::numeric::odeint::symplectic_rkn_sb3a_mclachlan<Point> stepper;

  ConservationReport r;
  std::tie(r.H0, r.F0) = energies(q, p);
  double t = 0.0;
  for (std::size_t s = 0; s < steps; ++s) {
    stepper.do_step(std::make_pair(coordinate_flow, momentum_flow), std::make_pair(std::ref(q), std::ref(p)), t,
                    step);
    t += step;
    const auto [H, F] = energies(q, p);
    r.H_drift = std::max(r.H_drift, std::fabs(H - r.H0) / std::fabs(r.H0));
    r.F_drift = std::max(r.F_drift, std::fabs(F - r.F0) / std::fabs(r.F0));
  }
  r.steps = steps;
  return r;
}

}  // namespace semideg
