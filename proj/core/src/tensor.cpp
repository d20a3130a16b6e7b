#include "semideg/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "semideg/errors.hpp"

namespace semideg {

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

int permutation_sign(const std::vector<std::size_t>& p) {
  int sign = 1;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

void check_slots(const Tensor& t, const std::vector<std::size_t>& slots) {
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] >= t.order()) throw SlotOutOfRange("slot " + std::to_string(slots[i]) + " out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (slots[i] == slots[j]) throw SlotOutOfRange("repeated slot " + std::to_string(slots[i]));
    if (t.variance(slots[i]) != t.variance(slots[0])) throw MixedVariance("slots differ in variance");
  }
}

Tensor young_sum(const Tensor& t, const std::vector<std::size_t>& slots, bool signed_sum) {
  check_slots(t, slots);
  Tensor out(t.chart(), t.variance());
  std::vector<std::size_t> p(slots.size());
  std::iota(p.begin(), p.end(), 0);
  do {
    int sign = signed_sum ? permutation_sign(p) : 1;
    Index src;
    t.for_each_index([&](const Index& idx) {
      src = idx;
      for (std::size_t s = 0; s < slots.size(); ++s) src[slots[s]] = idx[slots[p[s]]];
      const RationalFunction& v = t[src];
      if (v.is_zero()) return;
      if (sign > 0) out[idx] += v;
      else out[idx] -= v;
    });
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

Tensor::Tensor(ChartPtr chart, std::vector<Variance> variance)
    : chart_(std::move(chart)), variance_(std::move(variance)) {
  data_.assign(ipow(chart_->dim(), variance_.size()), RationalFunction(chart_, Rational(0)));
}

Tensor Tensor::scalar(const RationalFunction& value) {
  Tensor t(value.chart(), {});
  t.data_[0] = value;
  return t;
}

Tensor Tensor::all_lower(ChartPtr chart, std::size_t order) {
  return Tensor(std::move(chart), std::vector<Variance>(order, Variance::Lower));
}

std::size_t Tensor::flat(std::span<const std::size_t> index) const {
  if (index.size() != order()) throw SlotOutOfRange("index has wrong length");
  std::size_t f = 0;
  for (std::size_t i : index) {
    if (i >= dim()) throw SlotOutOfRange("index value out of range");
    f = f * dim() + i;
  }
  return f;
}

Index Tensor::unflatten(std::size_t flat_index) const {
  Index idx(order());
  for (std::size_t s = order(); s-- > 0;) {
    idx[s] = flat_index % dim();
    flat_index /= dim();
  }
  return idx;
}

void Tensor::for_each_index(const std::function<void(const Index&)>& f) const {
  Index idx(order(), 0);
  for (std::size_t n = 0; n < data_.size(); ++n) {
    f(idx);
    for (std::size_t s = order(); s-- > 0;) {
      if (++idx[s] < dim()) break;
      idx[s] = 0;
    }
  }
}

bool Tensor::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const RationalFunction& c) { return c.is_zero(); });
}

std::optional<Index> Tensor::first_nonzero() const {
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!data_[i].is_zero()) return unflatten(i);
  return std::nullopt;
}

void Tensor::check_compatible(const Tensor& other) const {
  if (variance_ != other.variance_ || dim() != other.dim())
    throw std::logic_error("tensor shapes differ");
}

Tensor& Tensor::operator+=(const Tensor& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!other.data_[i].is_zero()) data_[i] += other.data_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!other.data_[i].is_zero()) data_[i] -= other.data_[i];
  return *this;
}

Tensor& Tensor::operator*=(const Rational& s) {
  for (auto& c : data_) c *= s;
  return *this;
}

Tensor& Tensor::operator*=(const RationalFunction& f) {
  for (auto& c : data_)
    if (!c.is_zero()) c *= f;
  return *this;
}

bool operator==(const Tensor& a, const Tensor& b) {
  if (a.variance_ != b.variance_ || a.data_.size() != b.data_.size()) return false;
  for (std::size_t i = 0; i < a.data_.size(); ++i)
    if (!(a.data_[i] == b.data_[i])) return false;
  return true;
}

Tensor Tensor::rebind(ChartPtr chart) const {
  Tensor out = *this;
  for (auto& c : out.data_) c = c.rebind(chart);
  out.chart_ = std::move(chart);
  return out;
}

Tensor outer(const Tensor& a, const Tensor& b) {
  std::vector<Variance> v = a.variance();
  v.insert(v.end(), b.variance().begin(), b.variance().end());
  Tensor out(a.chart(), v);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.component(i).is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!b.component(j).is_zero()) out.component(i * b.size() + j) = a.component(i) * b.component(j);
  }
  return out;
}

Tensor contract(const Tensor& t, std::size_t slot_a, std::size_t slot_b) {
  if (slot_a >= t.order() || slot_b >= t.order() || slot_a == slot_b) throw SlotOutOfRange("bad contraction slots");
  if (t.variance(slot_a) == t.variance(slot_b)) throw MixedVariance("contraction needs one upper and one lower slot");
  std::vector<Variance> v;
  for (std::size_t s = 0; s < t.order(); ++s)
    if (s != slot_a && s != slot_b) v.push_back(t.variance(s));
  Tensor out(t.chart(), v);
  Index src(t.order());
  out.for_each_index([&](const Index& idx) {
    std::size_t k = 0;
    for (std::size_t s = 0; s < t.order(); ++s)
      if (s != slot_a && s != slot_b) src[s] = idx[k++];
    RationalFunction acc(t.chart(), Rational(0));
    for (std::size_t a = 0; a < t.dim(); ++a) {
      src[slot_a] = src[slot_b] = a;
      acc += t[src];
    }
    out[idx] = acc;
  });
  return out;
}

Tensor permute(const Tensor& t, const std::vector<std::size_t>& perm) {
  if (perm.size() != t.order()) throw SlotOutOfRange("permutation has wrong length");
  std::vector<Variance> v(t.order());
  for (std::size_t s = 0; s < t.order(); ++s) v[s] = t.variance(perm.at(s));
  Tensor out(t.chart(), v);
  Index src(t.order());
  out.for_each_index([&](const Index& idx) {
    for (std::size_t s = 0; s < t.order(); ++s) src[perm[s]] = idx[s];
    out[idx] = t[src];
  });
  return out;
}

Tensor symmetrize(const Tensor& t, const std::vector<std::size_t>& slots) { return young_sum(t, slots, false); }

Tensor antisymmetrize(const Tensor& t, const std::vector<std::size_t>& slots) { return young_sum(t, slots, true); }

std::string describe_component(const Tensor& t, const Index& index) {
  std::string s = "[";
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (i > 0) s += ",";
    s += t.chart()->coordinates()[index[i]];
  }
  return s + "] = " + t[index].to_string();
}

}  // namespace semideg
