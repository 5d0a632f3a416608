#pragma once

// Dense index-addressed tensors over an n-dimensional index range.  Used with
// T = double for values and T = Jet for fields known to some jet order.

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace lagrome {

template <class T>
class Tensor {
 public:
  Tensor() = default;
  Tensor(int n, int rank, const T& fill = T{}) : n_(n), rank_(rank), data_(ipow(n, rank), fill) {}

  int dim() const { return n_; }
  int rank() const { return rank_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  template <class... I>
  T& operator()(I... idx) {
    return data_[flat(idx...)];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    return data_[flat(idx...)];
  }

  T& at(std::span<const int> idx) { return data_[flat_span(idx)]; }
  const T& at(std::span<const int> idx) const { return data_[flat_span(idx)]; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  /// Multi-index of a flat position.
  std::array<int, 8> unflatten(std::size_t pos) const {
    std::array<int, 8> idx{};
    for (int k = rank_ - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(pos % n_);
      pos /= n_;
    }
    return idx;
  }

  static std::size_t ipow(int n, int r) {
    std::size_t s = 1;
    for (int i = 0; i < r; ++i) s *= static_cast<std::size_t>(n);
    return s;
  }

 private:
  template <class... I>
  std::size_t flat(I... idx) const {
    static_assert(sizeof...(I) <= 8);
    std::size_t f = 0;
    ((f = f * n_ + static_cast<std::size_t>(idx)), ...);
    return f;
  }
  std::size_t flat_span(std::span<const int> idx) const {
    std::size_t f = 0;
    for (int i : idx) f = f * n_ + static_cast<std::size_t>(i);
    return f;
  }

  int n_ = 0;
  int rank_ = 0;
  std::vector<T> data_;
};

/// Value tensor from a jet tensor (constant terms).
template <class J>
Tensor<double> values_of(const Tensor<J>& t) {
  Tensor<double> out(t.dim(), t.rank());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i].value();
  return out;
}

}  // namespace lagrome
