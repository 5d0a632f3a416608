#pragma once

// Ambient complex space forms N^n(4c), c in {0, 1}, in real coordinates.
//
// C^n is identified with R^{2n} by interleaving real and imaginary parts:
// p = (Re z_1, Im z_1, ..., Re z_n, Im z_n).  J is multiplication by i.
// For c = 1 a single affine chart of CP^n is used, carrying the
// Fubini-Study metric with Kahler potential log(1 + |z|^2), normalized to
// holomorphic sectional curvature 4.

#include <span>
#include <stdexcept>
#include <vector>

#include "lagrome/jet.hpp"
#include "lagrome/tensor.hpp"

namespace lagrome {

enum class ChartKind { flat, fubini_study_affine };

struct AmbientSpace {
  int c = 0;  // holomorphic sectional curvature / 4
  int n = 2;  // complex dimension

  AmbientSpace() = default;
  AmbientSpace(int curvature, int complex_dim) : c(curvature), n(complex_dim) {
    if (c != 0 && c != 1) throw std::invalid_argument("ambient curvature c must be 0 or 1");
    if (n < 1 || n > 3) throw std::invalid_argument("ambient complex dimension must be 1..3");
  }
  ChartKind chart_kind() const { return c == 0 ? ChartKind::flat : ChartKind::fubini_study_affine; }
  int real_dim() const { return 2 * n; }
};

/// Ambient data at a chart point.  Indices are real (0 .. 2n-1).
struct AmbientPointData {
  int real_dim = 0;
  Tensor<double> G;      // metric G_ab
  Tensor<double> J;      // J^a_b, (J X)^a = J^a_b X^b
  Tensor<double> Gamma;  // Gamma^c_ab stored (c, a, b)
  Tensor<double> dG;     // d_e G_ab stored (a, b, e); present if order >= 1
  Tensor<double> dGamma; // d_e Gamma^c_ab stored (c, a, b, e); present if order >= 1
};

template <class S>
void apply_J(std::span<const S> x, std::span<S> out) {
  for (std::size_t k = 0; k + 1 < x.size(); k += 2) {
    out[k] = -x[k + 1];
    out[k + 1] = x[k];
  }
}

/// G(X, Y) at point p.
template <class S>
S ambient_inner(const AmbientSpace& space, std::span<const S> p, std::span<const S> X, std::span<const S> Y) {
  const int d = space.real_dim();
  S dot = X[0] * Y[0];
  for (int a = 1; a < d; ++a) dot = dot + X[a] * Y[a];
  if (space.c == 0) return dot;
  // Fubini-Study: Re<X,Y>/(1+|z|^2) - Re[(zbar.X) conj(zbar.Y)]/(1+|z|^2)^2
  S rho = 1.0 + p[0] * p[0];
  for (int a = 1; a < d; ++a) rho = rho + p[a] * p[a];
  // zbar.X = sum (x - i y)(Xr + i Xi) = sum (x Xr + y Xi) + i (x Xi - y Xr)
  S zxr = p[0] * X[0] + p[1] * X[1], zxi = p[0] * X[1] - p[1] * X[0];
  S zyr = p[0] * Y[0] + p[1] * Y[1], zyi = p[0] * Y[1] - p[1] * Y[0];
  for (int k = 1; k < space.n; ++k) {
    const int r = 2 * k, i = 2 * k + 1;
    zxr = zxr + p[r] * X[r] + p[i] * X[i];
    zxi = zxi + p[r] * X[i] - p[i] * X[r];
    zyr = zyr + p[r] * Y[r] + p[i] * Y[i];
    zyi = zyi + p[r] * Y[i] - p[i] * Y[r];
  }
  const S cross = zxr * zyr + zxi * zyi;
  return dot / rho - cross / (rho * rho);
}

/// Christoffel term Gamma(X, Y) so that (nabla_X Y)^c = X(Y^c) + Gamma(X, Y)^c.
template <class S>
void ambient_christoffel(const AmbientSpace& space, std::span<const S> p, std::span<const S> X,
                         std::span<const S> Y, std::span<S> out) {
  const int d = space.real_dim();
  if (space.c == 0) {
    for (int a = 0; a < d; ++a) out[a] = 0.0 * X[a];
    return;
  }
  // Complex form: Gamma(X,Y)^a = -(X^a (zbar.Y) + Y^a (zbar.X)) / (1 + |z|^2).
  S rho = 1.0 + p[0] * p[0];
  for (int a = 1; a < d; ++a) rho = rho + p[a] * p[a];
  S zxr = p[0] * X[0] + p[1] * X[1], zxi = p[0] * X[1] - p[1] * X[0];
  S zyr = p[0] * Y[0] + p[1] * Y[1], zyi = p[0] * Y[1] - p[1] * Y[0];
  for (int k = 1; k < space.n; ++k) {
    const int r = 2 * k, i = 2 * k + 1;
    zxr = zxr + p[r] * X[r] + p[i] * X[i];
    zxi = zxi + p[r] * X[i] - p[i] * X[r];
    zyr = zyr + p[r] * Y[r] + p[i] * Y[i];
    zyi = zyi + p[r] * Y[i] - p[i] * Y[r];
  }
  const S inv = 1.0 / rho;
  for (int k = 0; k < space.n; ++k) {
    const int r = 2 * k, i = 2 * k + 1;
    const S re = X[r] * zyr - X[i] * zyi + Y[r] * zxr - Y[i] * zxi;
    const S im = X[r] * zyi + X[i] * zyr + Y[r] * zxi + Y[i] * zxr;
    out[r] = -(re * inv);
    out[i] = -(im * inv);
  }
}

/// Metric, complex structure and Christoffel symbols at p; with order >= 1
/// also their first partial derivatives (from one-variable jets).
AmbientPointData ambient_eval(const AmbientSpace& space, std::span<const double> p, int order = 0);

/// Rbar(X, JX, JX, X) / |X ^ JX|^2 computed from the Christoffel symbols
/// and their derivatives.
double holomorphic_sectional_curvature(const AmbientSpace& space, std::span<const double> p,
                                       std::span<const double> X);

/// Riemann tensor Rbar^d_{c a b} (stored (d, c, a, b)) of the ambient chart:
/// Rbar(e_a, e_b) e_c = Rbar^d_{cab} e_d.
Tensor<double> ambient_riemann(const AmbientPointData& data);

}  // namespace lagrome
