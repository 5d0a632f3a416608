#include "lagrome/jet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <memory>

namespace lagrome {

namespace {

int total_degree(const MultiIndex& a, int dim) {
  int d = 0;
  for (int i = 0; i < dim; ++i) d += a[i];
  return d;
}

// All multi-indices of a given total degree, in reverse lexicographic order
// (x0^d first).
void append_degree(int dim, int degree, std::vector<MultiIndex>& out) {
  MultiIndex a{};
  auto rec = [&](auto&& self, int var, int remaining) -> void {
    if (var == dim - 1) {
      a[var] = remaining;
      out.push_back(a);
      a[var] = 0;
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      a[var] = k;
      self(self, var + 1, remaining - k);
    }
    a[var] = 0;
  };
  rec(rec, 0, degree);
}

std::unique_ptr<JetLayout> build_layout(int dim, int order) {
  auto L = std::make_unique<JetLayout>();
  L->dim = dim;
  L->order = order;
  for (int d = 0; d <= order; ++d) {
    L->degree_offset.push_back(static_cast<int>(L->monomials.size()));
    append_degree(dim, d, L->monomials);
  }
  L->degree_offset.push_back(static_cast<int>(L->monomials.size()));

  const std::size_t n = L->monomials.size();
  L->factorial.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double f = 1.0;
    for (int v = 0; v < dim; ++v)
      for (int k = 2; k <= L->monomials[i][v]; ++k) f *= k;
    L->factorial[i] = f;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const int di = total_degree(L->monomials[i], dim);
    for (std::size_t j = 0; j < n; ++j) {
      if (di + total_degree(L->monomials[j], dim) > order) continue;
      MultiIndex s{};
      for (int v = 0; v < dim; ++v) s[v] = L->monomials[i][v] + L->monomials[j][v];
      const int k = L->index_of(s);
      L->products.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j),
                             static_cast<std::uint16_t>(k)});
    }
  }
  std::sort(L->products.begin(), L->products.end(),
            [](const auto& a, const auto& b) { return a[2] < b[2]; });

  for (int v = 0; v < dim; ++v) {
    for (std::size_t i = 0; i < n; ++i) {
      const MultiIndex& a = L->monomials[i];
      if (a[v] == 0) continue;
      MultiIndex b = a;
      b[v] -= 1;
      L->derivative[v].emplace_back(static_cast<std::uint16_t>(i),
                                    static_cast<std::uint16_t>(L->index_of(b)),
                                    static_cast<double>(a[v]));
    }
  }
  return L;
}

void check_compatible_dim(const Jet& a, const Jet& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("jet dimension mismatch");
}

}  // namespace

int JetLayout::index_of(const MultiIndex& alpha) const {
  const int d = total_degree(alpha, dim);
  if (d > order) return -1;
  for (int v = dim; v < kMaxJetDim; ++v)
    if (alpha[v] != 0) return -1;
  for (int i = degree_offset[d]; i < degree_offset[d + 1]; ++i)
    if (std::equal(alpha.begin(), alpha.begin() + dim, monomials[i].begin())) return i;
  return -1;
}

const JetLayout& JetLayout::get(int dim, int order) {
  if (dim < 1 || dim > kMaxJetDim) throw std::invalid_argument("jet dimension must be 1..4");
  if (order < 0 || order > kMaxJetOrder) throw std::invalid_argument("jet order must be 0..6");
  using Table = std::array<std::array<std::unique_ptr<JetLayout>, kMaxJetOrder + 1>, kMaxJetDim + 1>;
  static const Table table = [] {
    Table t;
    for (int d = 1; d <= kMaxJetDim; ++d)
      for (int o = 0; o <= kMaxJetOrder; ++o) t[d][o] = build_layout(d, o);
    return t;
  }();
  return *table[dim][order];
}

// ---------------------------------------------------------------------------

void CoeffBuffer::resize_zero(std::size_t n) {
  size_ = n;
  if (n <= kInline) {
    heap_.clear();
    std::fill_n(inline_.data(), n, 0.0);
  } else {
    heap_.assign(n, 0.0);
  }
}

void CoeffBuffer::assign(const CoeffBuffer& o) {
  size_ = o.size_;
  if (o.heap_.empty()) {
    heap_.clear();
    std::memcpy(inline_.data(), o.inline_.data(), size_ * sizeof(double));
  } else {
    heap_ = o.heap_;
  }
}

void CoeffBuffer::move_from(CoeffBuffer& o) {
  size_ = o.size_;
  if (o.heap_.empty()) {
    heap_.clear();
    std::memcpy(inline_.data(), o.inline_.data(), size_ * sizeof(double));
  } else {
    heap_ = std::move(o.heap_);
    o.heap_.clear();
  }
}

// ---------------------------------------------------------------------------

Jet::Jet(int dim, int order, double value) : Jet(&JetLayout::get(dim, order)) { coeffs_[0] = value; }

Jet Jet::variable(int i, double value, int dim, int order) {
  if (i < 0 || i >= dim) throw std::out_of_range("jet variable index out of range");
  Jet j(dim, order, value);
  if (order >= 1) {
    MultiIndex e{};
    e[i] = 1;
    j.coeffs_[j.layout_->index_of(e)] = 1.0;
  }
  return j;
}

double Jet::coeff(const MultiIndex& alpha) const {
  const int k = layout_->index_of(alpha);
  if (k < 0) throw std::out_of_range("multi-index exceeds jet order");
  return coeffs_[k];
}

void Jet::set_coeff(const MultiIndex& alpha, double v) {
  const int k = layout_->index_of(alpha);
  if (k < 0) throw std::out_of_range("multi-index exceeds jet order");
  coeffs_[k] = v;
}

double Jet::partial(const MultiIndex& alpha) const {
  const int k = layout_->index_of(alpha);
  if (k < 0) throw std::out_of_range("multi-index exceeds jet order");
  return coeffs_[k] * layout_->factorial[k];
}

double Jet::partial(std::initializer_list<int> alpha) const {
  if (static_cast<int>(alpha.size()) > kMaxJetDim) throw std::out_of_range("multi-index too long");
  MultiIndex a{};
  std::copy(alpha.begin(), alpha.end(), a.begin());
  return partial(a);
}

Jet Jet::derivative(int v) const {
  if (v < 0 || v >= dim()) throw std::out_of_range("derivative variable out of range");
  if (order() == 0) throw std::domain_error("cannot differentiate an order-0 jet");
  Jet r(&JetLayout::get(dim(), order() - 1));
  const std::size_t limit = r.size();
  for (const auto& [src, dst, f] : layout_->derivative[v])
    if (dst < limit) r.coeffs_[dst] += f * coeffs_[src];
  return r;
}

Jet Jet::truncated(int ord) const {
  if (ord >= order()) return *this;
  Jet r(&JetLayout::get(dim(), ord));
  std::memcpy(r.coeffs_.data(), coeffs_.data(), r.size() * sizeof(double));
  return r;
}

const JetLayout* Jet::common(const Jet& a, const Jet& b) {
  check_compatible_dim(a, b);
  return a.order() <= b.order() ? a.layout_ : b.layout_;
}

Jet& Jet::operator+=(const Jet& o) {
  const JetLayout* L = common(*this, o);
  if (L != layout_) *this = truncated(L->order);
  for (std::size_t i = 0; i < size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  const JetLayout* L = common(*this, o);
  if (L != layout_) *this = truncated(L->order);
  for (std::size_t i = 0; i < size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }

Jet& Jet::operator+=(double s) {
  coeffs_[0] += s;
  return *this;
}
Jet& Jet::operator-=(double s) {
  coeffs_[0] -= s;
  return *this;
}
Jet& Jet::operator*=(double s) {
  for (std::size_t i = 0; i < size(); ++i) coeffs_[i] *= s;
  return *this;
}
Jet& Jet::operator/=(double s) {
  for (std::size_t i = 0; i < size(); ++i) coeffs_[i] /= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  const JetLayout* L = Jet::common(a, b);
  Jet r(L);
  const double* x = a.coeffs_.data();
  const double* y = b.coeffs_.data();
  double* z = r.coeffs_.data();
  for (const auto& t : L->products) z[t[2]] += x[t[0]] * y[t[1]];
  return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet operator-(double s, const Jet& a) {
  Jet r = -a;
  r += s;
  return r;
}

Jet operator/(double s, const Jet& a) { return s * reciprocal(a); }

Jet operator-(Jet a) {
  for (std::size_t i = 0; i < a.size(); ++i) a.coeffs_[i] = -a.coeffs_[i];
  return a;
}

Jet Jet::compose(std::span<const double> taylor) const {
  Jet v = *this;
  v.coeffs_[0] = 0.0;
  const int m = std::min<int>(order(), static_cast<int>(taylor.size()) - 1);
  // Horner in the nilpotent part v.
  Jet r(layout_);
  r.coeffs_[0] = taylor[m];
  for (int k = m - 1; k >= 0; --k) {
    r = r * v;
    r.coeffs_[0] += taylor[k];
  }
  return r;
}

// ---------------------------------------------------------------------------
// Elementary functions: univariate Taylor coefficients about the constant
// term, then composition with the nilpotent remainder.

Jet reciprocal(const Jet& x) {
  const double u = x.value();
  if (u == 0.0) throw JetDomainError("division by a jet with zero constant term");
  std::array<double, kMaxJetOrder + 1> t{};
  double p = 1.0 / u;
  for (int k = 0; k <= x.order(); ++k) {
    t[k] = p;
    p *= -1.0 / u;
  }
  return x.compose(std::span<const double>(t.data(), x.order() + 1));
}

Jet sin(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  const std::array<double, 4> cyc{s, c, -s, -c};
  std::array<double, kMaxJetOrder + 1> t{};
  double f = 1.0;
  for (int k = 0; k <= x.order(); ++k) {
    if (k > 0) f *= k;
    t[k] = cyc[k % 4] / f;
  }
  return x.compose(std::span<const double>(t.data(), x.order() + 1));
}

Jet cos(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  const std::array<double, 4> cyc{c, -s, -c, s};
  std::array<double, kMaxJetOrder + 1> t{};
  double f = 1.0;
  for (int k = 0; k <= x.order(); ++k) {
    if (k > 0) f *= k;
    t[k] = cyc[k % 4] / f;
  }
  return x.compose(std::span<const double>(t.data(), x.order() + 1));
}

Jet exp(const Jet& x) {
  const double e = std::exp(x.value());
  std::array<double, kMaxJetOrder + 1> t{};
  double f = 1.0;
  for (int k = 0; k <= x.order(); ++k) {
    if (k > 0) f *= k;
    t[k] = e / f;
  }
  return x.compose(std::span<const double>(t.data(), x.order() + 1));
}

Jet log(const Jet& x) {
  const double u = x.value();
  if (!(u > 0.0)) throw JetDomainError("log of a jet with nonpositive constant term");
  std::array<double, kMaxJetOrder + 1> t{};
  t[0] = std::log(u);
  double p = 1.0 / u;
  for (int k = 1; k <= x.order(); ++k) {
    t[k] = ((k % 2) ? 1.0 : -1.0) * p / k;
    p /= u;
  }
  return x.compose(std::span<const double>(t.data(), x.order() + 1));
}

Jet pow(const Jet& x, double a) {
  const double u = x.value();
  if (!(u > 0.0)) throw JetDomainError("real power of a jet with nonpositive constant term");
  std::array<double, kMaxJetOrder + 1> t{};
  // (u + v)^a = u^a sum_k binom(a, k) (v/u)^k
  double b = std::pow(u, a);
  for (int k = 0; k <= x.order(); ++k) {
    t[k] = b;
    b *= (a - k) / ((k + 1) * u);
  }
  return x.compose(std::span<const double>(t.data(), x.order() + 1));
}

Jet sqrt(const Jet& x) {
  if (!(x.value() > 0.0)) throw JetDomainError("sqrt of a jet with nonpositive constant term");
  return pow(x, 0.5);
}

Jet pow(const Jet& x, int p) {
  if (p < 0) return reciprocal(pow(x, -p));
  Jet r(x.dim(), x.order(), 1.0);
  Jet base = x;
  while (p > 0) {
    if (p & 1) r = r * base;
    p >>= 1;
    if (p) base = base * base;
  }
  return r;
}

Jet atan(const Jet& x) {
  // atan' = 1 / (1 + x^2): with w(t) = 1 + (u + t)^2 = q0 + q1 t + t^2, the
  // series d(t) = 1/w(t) follows from w d = 1, and atan = u-term + integral.
  const double u = x.value();
  const int m = x.order();
  const double q0 = 1.0 + u * u, q1 = 2.0 * u;
  std::array<double, kMaxJetOrder + 1> d{};
  for (int k = 0; k < m; ++k) {
    double s = (k == 0) ? 1.0 : 0.0;
    if (k >= 1) s -= q1 * d[k - 1];
    if (k >= 2) s -= d[k - 2];
    d[k] = s / q0;
  }
  std::array<double, kMaxJetOrder + 1> t{};
  t[0] = std::atan(u);
  for (int k = 1; k <= m; ++k) t[k] = d[k - 1] / k;
  return x.compose(std::span<const double>(t.data(), m + 1));
}

Jet atan2(const Jet& im, const Jet& re) {
  const double a = re.value(), b = im.value();
  if (a == 0.0 && b == 0.0) throw JetDomainError("atan2 of a jet pair with zero constant terms");
  Jet r = (std::abs(a) >= std::abs(b)) ? atan(im / re) : -atan(re / im);
  r.coeff_at(0) = std::atan2(b, a);
  return r;
}

Jet jet_apply(JetOp op, std::span<const Jet> args) {
  auto need = [&](std::size_t k) {
    if (args.size() != k) throw std::invalid_argument("wrong number of jet arguments");
    for (std::size_t i = 1; i < k; ++i)
      if (args[i].dim() != args[0].dim() || args[i].order() != args[0].order())
        throw std::invalid_argument("jet arguments must share dim and order");
  };
  switch (op) {
    case JetOp::add: need(2); return args[0] + args[1];
    case JetOp::mul: need(2); return args[0] * args[1];
    case JetOp::div: need(2); return args[0] / args[1];
    case JetOp::neg: need(1); return -args[0];
    case JetOp::sin: need(1); return sin(args[0]);
    case JetOp::cos: need(1); return cos(args[0]);
    case JetOp::exp: need(1); return exp(args[0]);
    case JetOp::log: need(1); return log(args[0]);
    case JetOp::sqrt: need(1); return sqrt(args[0]);
    case JetOp::atan: need(1); return atan(args[0]);
    case JetOp::pow: need(2); return pow(args[0], args[1].value());
  }
  throw std::invalid_argument("unknown jet op");
}

}  // namespace lagrome
