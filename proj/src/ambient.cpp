#include "lagrome/ambient.hpp"

#include <cmath>

namespace lagrome {

namespace {

template <class S>
void fill_metric_and_gamma(const AmbientSpace& space, std::span<const S> p, const S& zero, std::vector<S>& G,
                           std::vector<S>& Gamma) {
  const int d = space.real_dim();
  std::vector<S> ea(d, zero), eb(d, zero), out(d, zero);
  G.assign(d * d, zero);
  Gamma.assign(d * d * d, zero);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      std::fill(ea.begin(), ea.end(), zero);
      std::fill(eb.begin(), eb.end(), zero);
      ea[a] = ea[a] + 1.0;
      eb[b] = eb[b] + 1.0;
      G[a * d + b] = ambient_inner<S>(space, p, ea, eb);
      ambient_christoffel<S>(space, p, ea, eb, out);
      for (int c = 0; c < d; ++c) Gamma[(c * d + a) * d + b] = out[c];
    }
  }
}

}  // namespace

AmbientPointData ambient_eval(const AmbientSpace& space, std::span<const double> p, int order) {
  const int d = space.real_dim();
  if (static_cast<int>(p.size()) != d) throw std::invalid_argument("ambient point has wrong dimension");
  for (double v : p)
    if (!std::isfinite(v)) throw std::invalid_argument("ambient point must be finite");

  AmbientPointData out;
  out.real_dim = d;
  out.G = Tensor<double>(d, 2);
  out.J = Tensor<double>(d, 2);
  out.Gamma = Tensor<double>(d, 3);
  std::vector<double> G, Gamma;
  fill_metric_and_gamma<double>(space, p, 0.0, G, Gamma);
  out.G.data() = G;
  out.Gamma.data() = Gamma;
  for (int k = 0; k < space.n; ++k) {
    out.J(2 * k + 1, 2 * k) = 1.0;
    out.J(2 * k, 2 * k + 1) = -1.0;
  }
  if (order < 1) return out;

  out.dG = Tensor<double>(d, 3);
  out.dGamma = Tensor<double>(d, 4);
  for (int e = 0; e < d; ++e) {
    std::vector<Jet> pj;
    for (int a = 0; a < d; ++a) {
      Jet x(1, 1, p[a]);
      if (a == e) x = Jet::variable(0, p[a], 1, 1);
      pj.push_back(x);
    }
    std::vector<Jet> GJ, GammaJ;
    fill_metric_and_gamma<Jet>(space, pj, Jet(1, 1, 0.0), GJ, GammaJ);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out.dG(a, b, e) = GJ[a * d + b].partial({1});
    for (int c = 0; c < d; ++c)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) out.dGamma(c, a, b, e) = GammaJ[(c * d + a) * d + b].partial({1});
  }
  return out;
}

Tensor<double> ambient_riemann(const AmbientPointData& data) {
  if (data.dGamma.empty()) throw std::invalid_argument("ambient_riemann needs derivative data (order >= 1)");
  const int d = data.real_dim;
  Tensor<double> R(d, 4);
  for (int dd = 0; dd < d; ++dd)
    for (int c = 0; c < d; ++c)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          double v = data.dGamma(dd, b, c, a) - data.dGamma(dd, a, c, b);
          for (int e = 0; e < d; ++e)
            v += data.Gamma(dd, a, e) * data.Gamma(e, b, c) - data.Gamma(dd, b, e) * data.Gamma(e, a, c);
          R(dd, c, a, b) = v;
        }
  return R;
}

double holomorphic_sectional_curvature(const AmbientSpace& space, std::span<const double> p,
                                       std::span<const double> X) {
  const int d = space.real_dim();
  if (static_cast<int>(X.size()) != d) throw std::invalid_argument("tangent vector has wrong dimension");
  double nx = 0.0;
  for (double v : X) nx += v * v;
  if (nx == 0.0) throw std::invalid_argument("holomorphic sectional curvature of the zero vector");

  const AmbientPointData data = ambient_eval(space, p, 1);
  const Tensor<double> R = ambient_riemann(data);
  std::vector<double> Y(d);
  apply_J<double>(X, Y);

  auto G = [&](std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) s += data.G(a, b) * u[a] * v[b];
    return s;
  };
  // R(X, Y) Y
  std::vector<double> RXYY(d, 0.0);
  for (int dd = 0; dd < d; ++dd)
    for (int c = 0; c < d; ++c)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) RXYY[dd] += R(dd, c, a, b) * Y[c] * X[a] * Y[b];
  const double num = G(RXYY, X);
  const double den = G(X, X) * G(Y, Y) - G(X, Y) * G(X, Y);
  return num / den;
}

}  // namespace lagrome
