#pragma once

// Catalog of closed-form Lagrangian immersions M^n -> N^n(4c).
//
// Output components follow the ambient layout (Re z_1, Im z_1, ...).  Chart
// coordinates are torus angles (graph_torus, product_torus) or hyperspherical
// angles (whitney_sphere, whitney_cp).  Sphere chart 0 uses
//   x_1 = cos t_1, x_2 = sin t_1 cos t_2, ..., x_{n+1} = sin t_1 ... sin t_n,
// with t_1..t_{n-1} in (0, pi); chart 1 is the same with x_1 and x_{n+1}
// swapped, which covers the poles of chart 0.

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lagrome/ambient.hpp"
#include "lagrome/expr.hpp"
#include "lagrome/jet.hpp"

namespace lagrome {

enum class ImmersionKind { graph_torus, whitney_sphere, product_torus, whitney_cp, custom };
enum class ChartDomain { torus, sphere };

struct ChartPoint {
  int chart_id = 0;
  std::vector<double> coords;
};

class InvalidChartPoint : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ImmersionSpec {
 public:
  /// Component map for custom (validation) immersions: coordinate jets -> 2n component jets.
  using CustomMap = std::function<std::vector<Jet>(std::span<const Jet>)>;

  static ImmersionSpec graph_torus(int n, const std::string& potential);
  static ImmersionSpec whitney_sphere(int n, double radius, std::vector<double> translation = {});
  static ImmersionSpec product_torus(std::vector<double> radii);
  static ImmersionSpec whitney_cp(int n, double theta);
  /// Non-catalog fixture (not necessarily Lagrangian); used by tests.
  static ImmersionSpec custom(int n, int c, ChartDomain domain, CustomMap map, std::string name);

  ImmersionKind kind() const { return kind_; }
  int n() const { return n_; }
  int c() const { return kind_ == ImmersionKind::whitney_cp ? 1 : custom_c_; }
  AmbientSpace ambient() const { return AmbientSpace(c(), n_); }
  ChartDomain domain() const;
  std::string name() const;

  double radius() const { return radius_; }
  const std::vector<double>& translation() const { return translation_; }
  const std::vector<double>& radii() const { return radii_; }
  double theta() const { return theta_; }
  const Expression& potential() const { return potential_; }

  /// Throws InvalidChartPoint unless p lies in the open chart domain.
  void validate(const ChartPoint& p) const;

  /// Component jets of the immersion at p, truncated at `order`.
  std::vector<Jet> evaluate(const ChartPoint& p, int order) const;
  /// Component values at p.
  std::vector<double> position(const ChartPoint& p) const;

  /// Jet of the graph potential at p (graph_torus only).
  Jet potential_jet(const ChartPoint& p, int order) const;

  /// Point of S^n for a sphere chart point.
  std::vector<double> sphere_point(const ChartPoint& p) const;
  /// Chart coordinates of x in S^n for the requested sphere chart.
  ChartPoint sphere_chart(std::span<const double> x, int chart_id) const;

  /// Map from S^n to the ambient chart, for sphere kinds (any scalar type).
  template <class S>
  std::vector<S> sphere_map(std::span<const S> x) const;

 private:
  ImmersionKind kind_ = ImmersionKind::graph_torus;
  int n_ = 2;
  double radius_ = 1.0;
  std::vector<double> translation_;
  std::vector<double> radii_;
  double theta_ = 0.0;
  Expression potential_;
  int custom_c_ = 0;
  ChartDomain custom_domain_ = ChartDomain::torus;
  CustomMap custom_map_;
  std::string custom_name_;
};

/// max_{i<j} |omega(F_i, F_j)| at the point whose component jets (order >= 1) are F.
double lagrangian_residual(const AmbientSpace& space, std::span<const Jet> F);
double lagrangian_residual(const ImmersionSpec& spec, const ChartPoint& p);

// ---------------------------------------------------------------------------

namespace detail {

template <class S>
struct Cx {
  S re, im;
};

template <class S>
Cx<S> cmul(const Cx<S>& a, const Cx<S>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

template <class S>
Cx<S> cdiv(const Cx<S>& a, const Cx<S>& b) {
  const S den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

}  // namespace detail

template <class S>
std::vector<S> ImmersionSpec::sphere_map(std::span<const S> x) const {
  const int n = n_;
  std::vector<S> out;
  out.reserve(2 * n);
  const S& s = x[n];
  if (kind_ == ImmersionKind::whitney_sphere) {
    // r/(1 + s^2) (x_1, x_1 s, ..., x_n, x_n s) + A
    const S w = radius_ / (1.0 + s * s);
    for (int k = 0; k < n; ++k) {
      out.push_back(w * x[k] + translation_[2 * k]);
      out.push_back(w * x[k] * s + translation_[2 * k + 1]);
    }
    return out;
  }
  if (kind_ == ImmersionKind::whitney_cp) {
    // Homogeneous [x / (ch + i sh s), (sh ch (1 + s^2) + i s) / (ch^2 + sh^2 s^2)],
    // divided by the last coordinate, whose real part is positive.
    using detail::Cx;
    const double ch = std::cosh(theta_), sh = std::sinh(theta_);
    const S zero = 0.0 * s;
    const Cx<S> den{zero + ch, sh * s};
    const S q = ch * ch + sh * sh * s * s;
    const Cx<S> last{(sh * ch) * (1.0 + s * s) / q, s / q};
    const Cx<S> scale = detail::cmul(den, last);
    for (int k = 0; k < n; ++k) {
      const Cx<S> zk = detail::cdiv(Cx<S>{x[k], zero}, scale);
      out.push_back(zk.re);
      out.push_back(zk.im);
    }
    return out;
  }
  throw std::logic_error("sphere_map on a non-sphere immersion");
}

}  // namespace lagrome
