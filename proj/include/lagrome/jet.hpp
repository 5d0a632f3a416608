#pragma once

// Truncated multivariate Taylor series ("jets").
//
// A Jet stores the Taylor coefficients of a scalar function of up to
// kMaxJetDim variables about a base point, truncated at total degree
// `order` (<= kMaxJetOrder).  Coefficients are stored densely in graded
// order: all degree-0 terms, then degree 1, ... so that truncating to a
// lower order is a prefix of the coefficient array.

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace lagrome {

inline constexpr int kMaxJetDim = 4;
inline constexpr int kMaxJetOrder = 6;

using MultiIndex = std::array<int, kMaxJetDim>;

class JetDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Monomial tables shared by every jet with the same (dim, order).
struct JetLayout {
  int dim = 0;
  int order = 0;
  std::vector<MultiIndex> monomials;     // graded order
  std::vector<int> degree_offset;        // first index of each degree, size order+2
  std::vector<double> factorial;         // alpha! per monomial
  // Product table: c[k] += a[i] * b[j] for every (i, j, k) with deg(i)+deg(j) <= order.
  std::vector<std::array<std::uint16_t, 3>> products;
  // derivative[v]: (src, dst, factor) with dst = src - e_v.
  std::array<std::vector<std::tuple<std::uint16_t, std::uint16_t, double>>, kMaxJetDim> derivative;

  std::size_t size() const { return monomials.size(); }
  int index_of(const MultiIndex& alpha) const;

  static const JetLayout& get(int dim, int order);
};

/// Coefficient storage with a fixed inline capacity; larger layouts spill to the heap.
class CoeffBuffer {
 public:
  static constexpr std::size_t kInline = 56;

  CoeffBuffer() = default;
  explicit CoeffBuffer(std::size_t n) { resize_zero(n); }
  CoeffBuffer(const CoeffBuffer& o) { assign(o); }
  CoeffBuffer(CoeffBuffer&& o) noexcept { move_from(o); }
  CoeffBuffer& operator=(const CoeffBuffer& o) {
    if (this != &o) assign(o);
    return *this;
  }
  CoeffBuffer& operator=(CoeffBuffer&& o) noexcept {
    if (this != &o) move_from(o);
    return *this;
  }

  std::size_t size() const { return size_; }
  double* data() { return heap_.empty() ? inline_.data() : heap_.data(); }
  const double* data() const { return heap_.empty() ? inline_.data() : heap_.data(); }
  double& operator[](std::size_t i) { return data()[i]; }
  double operator[](std::size_t i) const { return data()[i]; }

  void resize_zero(std::size_t n);

 private:
  void assign(const CoeffBuffer& o);
  void move_from(CoeffBuffer& o);

  std::size_t size_ = 0;
  std::array<double, kInline> inline_;
  std::vector<double> heap_;
};

class Jet {
 public:
  Jet() = default;
  /// Constant jet.
  Jet(int dim, int order, double value = 0.0);

  /// Jet of the coordinate function x_i about a base point where x_i = value.
  static Jet variable(int i, double value, int dim, int order);

  int dim() const { return layout_ ? layout_->dim : 0; }
  int order() const { return layout_ ? layout_->order : -1; }
  bool empty() const { return layout_ == nullptr; }
  const JetLayout& layout() const { return *layout_; }
  std::size_t size() const { return coeffs_.size(); }

  double value() const { return coeffs_[0]; }
  double coeff(const MultiIndex& alpha) const;
  double& coeff_at(std::size_t i) { return coeffs_[i]; }
  double coeff_at(std::size_t i) const { return coeffs_[i]; }
  void set_coeff(const MultiIndex& alpha, double v);

  /// Partial derivative d^alpha at the base point: coefficient times alpha!.
  double partial(const MultiIndex& alpha) const;
  double partial(std::initializer_list<int> alpha) const;

  /// Jet of the partial derivative d/dx_v; one order lower.
  Jet derivative(int v) const;
  /// Same jet truncated to a lower order.
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a);
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator/(double s, const Jet& a);
  friend Jet operator-(Jet a);

  /// f(u0 + v) = sum_k taylor[k] v^k, where v is this jet minus its constant term.
  Jet compose(std::span<const double> taylor) const;

 private:
  explicit Jet(const JetLayout* layout) : layout_(layout), coeffs_(layout->size()) {}
  // Brings a and b to a common (lower) order.
  static const JetLayout* common(const Jet& a, const Jet& b);

  const JetLayout* layout_ = nullptr;
  CoeffBuffer coeffs_;
};

Jet reciprocal(const Jet& x);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet atan(const Jet& x);
Jet pow(const Jet& x, double p);
Jet pow(const Jet& x, int p);
/// Argument of (re + i im), constant term in (-pi, pi].
Jet atan2(const Jet& im, const Jet& re);

/// Elementary function tags accepted by jet_apply.
enum class JetOp { add, mul, div, neg, sin, cos, exp, log, sqrt, atan, pow };

/// Tag-dispatched elementary operation; `pow` takes the exponent as the
/// constant term of the second argument.
Jet jet_apply(JetOp op, std::span<const Jet> args);

/// Scalar helpers so templated code can be instantiated with double or Jet.
inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

}  // namespace lagrome
