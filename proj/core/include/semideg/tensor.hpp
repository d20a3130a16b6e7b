#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semideg/chart.hpp"
#include "semideg/rational_function.hpp"

namespace semideg {

enum class Variance { Upper, Lower };

using Index = std::vector<std::size_t>;

/// Dense array of dim^order canonical components. Slot 0 is the most
/// significant in the flat layout.
class Tensor {
 public:
  Tensor() = default;
  /// Zero tensor.
  Tensor(ChartPtr chart, std::vector<Variance> variance);
  static Tensor scalar(const RationalFunction& value);
  static Tensor all_lower(ChartPtr chart, std::size_t order);

  const ChartPtr& chart() const { return chart_; }
  std::size_t dim() const { return chart_->dim(); }
  std::size_t order() const { return variance_.size(); }
  const std::vector<Variance>& variance() const { return variance_; }
  Variance variance(std::size_t slot) const { return variance_.at(slot); }
  std::size_t size() const { return data_.size(); }

  RationalFunction& operator[](std::span<const std::size_t> index) { return data_[flat(index)]; }
  const RationalFunction& operator[](std::span<const std::size_t> index) const { return data_[flat(index)]; }
  RationalFunction& at(std::initializer_list<std::size_t> index) { return data_[flat(index)]; }
  const RationalFunction& at(std::initializer_list<std::size_t> index) const { return data_[flat(index)]; }
  RationalFunction& component(std::size_t flat_index) { return data_[flat_index]; }
  const RationalFunction& component(std::size_t flat_index) const { return data_[flat_index]; }

  std::size_t flat(std::span<const std::size_t> index) const;
  std::size_t flat(std::initializer_list<std::size_t> index) const {
    return flat(std::span<const std::size_t>(index.begin(), index.size()));
  }
  Index unflatten(std::size_t flat_index) const;

  /// Calls f(index) for every multi-index in flat order.
  void for_each_index(const std::function<void(const Index&)>& f) const;

  bool is_zero() const;
  /// First nonzero component in flat order, if any.
  std::optional<Index> first_nonzero() const;

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(const Rational& s);
  Tensor& operator*=(const RationalFunction& f);
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Tensor a, const Rational& s) { return a *= s; }
  friend Tensor operator*(const Rational& s, Tensor a) { return a *= s; }
  friend Tensor operator*(Tensor a, const RationalFunction& f) { return a *= f; }
  friend bool operator==(const Tensor& a, const Tensor& b);

  /// Same components on an extension of the chart.
  Tensor rebind(ChartPtr chart) const;

 private:
  void check_compatible(const Tensor& other) const;

  ChartPtr chart_;
  std::vector<Variance> variance_;
  std::vector<RationalFunction> data_;
};

/// Outer product; slots of `a` come first.
Tensor outer(const Tensor& a, const Tensor& b);

/// Contracts an upper slot with a lower slot of the same tensor.
Tensor contract(const Tensor& t, std::size_t slot_a, std::size_t slot_b);

/// result[i_0 .. i_{k-1}] = t[j] with j[perm[s]] = i_s, i.e. new slot s is old slot perm[s].
Tensor permute(const Tensor& t, const std::vector<std::size_t>& perm);

/// Unnormalized sum over all permutations of `slots` (signed for antisymmetrize).
/// Throws MixedVariance when the slots differ in variance, SlotOutOfRange for bad slots.
Tensor symmetrize(const Tensor& t, const std::vector<std::size_t>& slots);
Tensor antisymmetrize(const Tensor& t, const std::vector<std::size_t>& slots);

/// "slot=value" listing of nonzero components, e.g. "[0,0,0] -2/x".
std::string describe_component(const Tensor& t, const Index& index);

}  // namespace semideg
