#pragma once

// Hand-transcribed tensors for the three reference systems. Components are
// given on Euclidean {x, y, z}; index triples are written as letters.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "semideg/geometry.hpp"
#include "semideg/parser.hpp"
#include "semideg/structure.hpp"

namespace semideg::testing {

inline ChartPtr xyz_chart() { return make_chart({"x", "y", "z"}); }

inline ChartPtr xyz_r_chart() {
  Chart c({"x", "y", "z"});
  c.add_atom("r", Polynomial::variable(0).pow(2) + Polynomial::variable(1).pow(2) + Polynomial::variable(2).pow(2));
  return std::make_shared<const Chart>(c);
}

inline RationalFunction value(const std::string& text, const ChartPtr& chart) {
  return normalize(parse_expr(text, *chart), chart);
}

inline std::size_t axis(char c) { return static_cast<std::size_t>(c - 'x'); }

/// Adds `text` to each listed component, e.g. {"xyz", "yxz"}.
inline void add(Tensor& t, const std::vector<std::string>& slots, const std::string& text) {
  RationalFunction v = value(text, t.chart());
  for (const auto& s : slots) {
    Index idx;
    for (char c : s) idx.push_back(axis(c));
    t[idx] += v;
  }
}

/// D_ij^m of the generic system restricted to {1, 1/x^2, 1/y^2, 1/z^2}.
inline Tensor generic_D(const ChartPtr& chart) {
  Tensor d(chart, {Variance::Lower, Variance::Lower, Variance::Upper});
  add(d, {"xxx"}, "-3/x");
  add(d, {"yyy"}, "-3/y");
  add(d, {"zzz"}, "-3/z");
  return d;
}

/// Non-degenerate structure tensor T_ij^m of the generic system.
inline Tensor generic_T(const ChartPtr& chart) {
  Tensor t(chart, {Variance::Lower, Variance::Lower, Variance::Upper});
  add(t, {"xxx"}, "-2/x");
  add(t, {"yyy"}, "-2/y");
  add(t, {"zzz"}, "-2/z");
  add(t, {"yyx", "zzx"}, "1/x");
  add(t, {"xxy", "zzy"}, "1/y");
  add(t, {"xxz", "yyz"}, "1/z");
  return t;
}

/// D_ij^m of the Kepler-Coulomb family {1, 1/x^2, 1/y^2, 1/r}.
inline Tensor kepler_D(const ChartPtr& chart) {
  Tensor d(chart, {Variance::Lower, Variance::Lower, Variance::Upper});
  const std::string r2 = "(x^2 + y^2 + z^2)";
  add(d, {"xxx"}, "-3/x");
  add(d, {"yyy"}, "-3/y");
  add(d, {"zzz"}, "(x^2 + y^2 - 2*z^2)/(z*" + r2 + ")");
  add(d, {"xxz"}, "(x^2 + 4*y^2 + 4*z^2)/(z*" + r2 + ")");
  add(d, {"yyz"}, "(4*x^2 + y^2 + 4*z^2)/(z*" + r2 + ")");
  add(d, {"xyz", "yxz"}, "-3*x*y/(z*" + r2 + ")");
  add(d, {"xzz", "zxz"}, "-3*x/" + r2);
  add(d, {"yzz", "zyz"}, "-3*y/" + r2);
  return d;
}

/// Obstruction tensor N_ijk of the Kepler-Coulomb family; dx dy = (dx(x)dy + dy(x)dx)/2.
inline Tensor kepler_N(const ChartPtr& chart) {
  Tensor n = Tensor::all_lower(chart, 3);
  const std::string w = "/(z*(x^2 + y^2 + z^2))";
  add(n, {"xxy"}, "-z*y" + w);
  add(n, {"xxz"}, "(y^2 - x^2)" + w);
  add(n, {"xyx", "yxx"}, "z*y/2" + w);
  add(n, {"xyy", "yxy"}, "z*x/2" + w);
  add(n, {"xyz", "yxz"}, "-2*x*y" + w);
  add(n, {"xzx", "zxx"}, "(x^2 - y^2)/2" + w);
  add(n, {"xzy", "zxy"}, "x*y" + w);
  add(n, {"xzz", "zxz"}, "-z*x/2" + w);
  add(n, {"yyx"}, "-x*z" + w);
  add(n, {"yyz"}, "(x^2 - y^2)" + w);
  add(n, {"yzx", "zyx"}, "x*y" + w);
  add(n, {"yzy", "zyy"}, "-(x^2 - y^2)/2" + w);
  add(n, {"yzz", "zyz"}, "-z*y/2" + w);
  add(n, {"zzx"}, "z*x" + w);
  add(n, {"zzy"}, "z*y" + w);
  return n;
}

/// One-form from three component strings.
inline Tensor one_form(const ChartPtr& chart, const std::vector<std::string>& comps) {
  Tensor t = Tensor::all_lower(chart, 1);
  for (std::size_t k = 0; k < comps.size(); ++k) t.at({k}) = value(comps[k], chart);
  return t;
}

/// D symmetric in its first two slots with random affine components.
inline Tensor random_D(const ChartPtr& chart, std::mt19937& rng) {
  std::uniform_int_distribution<int> c(-3, 3);
  Tensor D(chart, {Variance::Lower, Variance::Lower, Variance::Upper});
  const std::size_t n = chart->dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m) {
        Polynomial p(Rational(c(rng)));
        for (std::size_t v = 0; v < n; ++v) p += Polynomial::variable(v) * Polynomial(Rational(c(rng)));
        D.at({i, j, m}) = D.at({j, i, m}) = RationalFunction(chart, p);
      }
  return D;
}

inline Metric conformal(const ChartPtr& chart, const std::string& factor) {
  Tensor g = Tensor::all_lower(chart, 2);
  for (std::size_t i = 0; i < chart->dim(); ++i) g.at({i, i}) = value(factor, chart);
  return Metric(g);
}

inline PotentialFamily family(const Metric& metric, const std::vector<std::string>& texts) {
  std::vector<Expr> basis;
  for (const auto& t : texts) basis.push_back(parse_expr(t, *metric.chart()));
  return PotentialFamily(metric, basis);
}

/// Stereographic chart on the unit sphere and the restrictions of two ambient coordinates.
inline Metric sphere() { return conformal(make_chart({"x", "y"}), "4/(1 + x^2 + y^2)^2"); }
inline const std::vector<std::string> kSphereFamily{"1", "2*x/(1 + x^2 + y^2)", "2*y/(1 + x^2 + y^2)"};

}  // namespace semideg::testing
