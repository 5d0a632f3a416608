#include "lagrome/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace lagrome {

namespace {

Jet zero_like(const Jet& j) { return Jet(j.dim(), j.order(), 0.0); }

template <class S>
S det3(const Tensor<S>& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double condition_estimate(const Tensor<double>& g, const Tensor<double>& ginv) {
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    a += g[i] * g[i];
    b += ginv[i] * ginv[i];
  }
  return std::sqrt(a * b);
}

double determinant(const Tensor<double>& g) {
  const int n = g.dim();
  if (n == 1) return g(0, 0);
  if (n == 2) return g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  return det3(g);
}

}  // namespace

// ---------------------------------------------------------------------------

Tensor<Jet> inverse_metric(const Tensor<Jet>& g) {
  const int n = g.dim();
  Tensor<Jet> inv(n, 2);
  if (n == 1) {
    inv(0, 0) = reciprocal(g(0, 0));
  } else if (n == 2) {
    const Jet r = reciprocal(g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0));
    inv(0, 0) = g(1, 1) * r;
    inv(1, 1) = g(0, 0) * r;
    inv(0, 1) = -(g(0, 1) * r);
    inv(1, 0) = -(g(1, 0) * r);
  } else if (n == 3) {
    const Jet r = reciprocal(det3(g));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
        inv(i, j) = (g(i1, j1) * g(i2, j2) - g(i1, j2) * g(i2, j1)) * r;
      }
  } else {
    throw std::invalid_argument("inverse_metric supports n <= 3");
  }
  return inv;
}

Tensor<Jet> christoffel(const Tensor<Jet>& g, const Tensor<Jet>& ginv) {
  const int n = g.dim();
  Tensor<Jet> dg(n, 3);  // dg(l, i, j) = d_l g_ij
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg(l, i, j) = g(i, j).derivative(l);
  Tensor<Jet> first(n, 3);  // Gamma_{ij,l} = (d_i g_jl + d_j g_il - d_l g_ij)/2, stored (l, i, j)
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        first(l, i, j) = 0.5 * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        first(l, j, i) = first(l, i, j);
      }
  Tensor<Jet> G(n, 3);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet s = ginv(k, 0) * first(0, i, j);
        for (int l = 1; l < n; ++l) s += ginv(k, l) * first(l, i, j);
        G(k, i, j) = s;
        G(k, j, i) = s;
      }
  return G;
}

Tensor<Jet> covariant_derivative(const Tensor<Jet>& t, const Tensor<Jet>& Gamma) {
  const int n = Gamma.dim();
  const int r = t.rank();
  Tensor<Jet> out(n, r + 1);
  std::array<int, 8> idx{}, alt{};
  for (std::size_t pos = 0; pos < t.size(); ++pos) {
    idx = t.unflatten(pos);
    for (int l = 0; l < n; ++l) {
      Jet v = t[pos].derivative(l);
      for (int a = 0; a < r; ++a) {
        alt = idx;
        for (int q = 0; q < n; ++q) {
          alt[a] = q;
          v -= Gamma(q, l, idx[a]) * t.at(std::span<const int>(alt.data(), r));
        }
      }
      idx[r] = l;
      out.at(std::span<const int>(idx.data(), r + 1)) = std::move(v);
    }
  }
  return out;
}

Tensor<Jet> riemann_up(const Tensor<Jet>& Gamma) {
  const int n = Gamma.dim();
  Tensor<Jet> dG(n, 4);  // dG(m, i, j, e) = d_e Gamma^m_ij
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int e = 0; e < n; ++e) dG(m, i, j, e) = Gamma(m, i, j).derivative(e);
  Tensor<Jet> R(n, 4);
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Jet v = dG(m, j, l, i) - dG(m, i, l, j);
          for (int p = 0; p < n; ++p) v += Gamma(m, i, p) * Gamma(p, j, l) - Gamma(m, j, p) * Gamma(p, i, l);
          R(m, l, i, j) = std::move(v);
        }
  return R;
}

Jet laplacian(const Jet& f, const Tensor<Jet>& ginv, const Tensor<Jet>& Gamma) {
  const int n = ginv.dim();
  std::vector<Jet> df;
  for (int k = 0; k < n; ++k) df.push_back(f.derivative(k));
  Jet s = zero_like(df[0].derivative(0) * Gamma(0, 0, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet hij = df[j].derivative(i);
      for (int k = 0; k < n; ++k) hij -= Gamma(k, i, j) * df[k];
      s += ginv(i, j) * hij;
    }
  return s;
}

Jet divergence(const Tensor<Jet>& V, const Tensor<Jet>& Gamma) {
  const int n = Gamma.dim();
  Jet s = V(0).derivative(0);
  for (int j = 1; j < n; ++j) s += V(j).derivative(j);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) s += Gamma(j, j, k) * V(k);
  return s;
}

double norm2(const Tensor<double>& t, const Tensor<double>& ginv) {
  const int r = t.rank();
  if (r == 0) return t[0] * t[0];
  double s = 0.0;
  for (std::size_t a = 0; a < t.size(); ++a) {
    if (t[a] == 0.0) continue;
    const auto ia = t.unflatten(a);
    for (std::size_t b = 0; b < t.size(); ++b) {
      const auto ib = t.unflatten(b);
      double w = t[a] * t[b];
      for (int k = 0; k < r && w != 0.0; ++k) w *= ginv(ia[k], ib[k]);
      s += w;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

LocalGeometry::LocalGeometry(const ImmersionSpec& spec, const ChartPoint& p, int order) {
  if (order < 2 || order > 5) throw std::invalid_argument("point_frame order must be 2..5");
  const std::vector<Jet> F = spec.evaluate(p, order);
  build(spec.ambient(), F);
}

LocalGeometry::LocalGeometry(const AmbientSpace& space, std::span<const Jet> F) { build(space, F); }

void LocalGeometry::build(const AmbientSpace& space, std::span<const Jet> F) {
  const int d = space.real_dim();
  if (static_cast<int>(F.size()) != d) throw std::invalid_argument("component count does not match ambient");
  n_ = F[0].dim();
  c_ = space.c;
  order_ = F[0].order();
  if (order_ < 2) throw std::invalid_argument("geometry needs immersion jets of order >= 2");
  const int n = n_;

  std::vector<std::vector<Jet>> Fi(n), JFi(n);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < d; ++a) Fi[i].push_back(F[a].derivative(i));
    JFi[i].resize(d);
    apply_J<Jet>(Fi[i], JFi[i]);
  }
  // Ambient covariant second derivatives nabla-bar_i F_j.
  std::vector<std::vector<std::vector<Jet>>> A(n, std::vector<std::vector<Jet>>(n));
  std::vector<Jet> gam(d);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      for (int a = 0; a < d; ++a) A[i][j].push_back(Fi[j][a].derivative(i));
      if (c_ != 0) {
        ambient_christoffel<Jet>(space, F, Fi[i], Fi[j], gam);
        for (int a = 0; a < d; ++a) A[i][j][a] += gam[a];
      }
      A[j][i] = A[i][j];
    }

  g_ = Tensor<Jet>(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      g_(i, j) = ambient_inner<Jet>(space, F, Fi[i], Fi[j]);
      g_(j, i) = g_(i, j);
    }
  const Tensor<double> gv = values_of(g_);
  if (!(determinant(gv) > 0.0)) throw DegenerateMetric("induced metric is not positive definite at this point");
  ginv_ = inverse_metric(g_);
  const double cond = condition_estimate(gv, values_of(ginv_));
  if (!(cond <= kMaxMetricCondition))
    throw DegenerateMetric("induced metric condition number " + std::to_string(cond) + " exceeds 1e12");
  Gamma_ = christoffel(g_, ginv_);

  h_ = Tensor<Jet>(n, 3);
  Tensor<Jet> first(n, 3);  // <nabla-bar_i F_k, F_m>, stored (i, k, m)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        h_(i, j, k) = ambient_inner<Jet>(space, F, A[i][j], JFi[k]);
        first(i, j, k) = ambient_inner<Jet>(space, F, A[i][j], Fi[k]);
      }
  nu_ = Tensor<Jet>(n, 3);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        Jet s = ginv_(l, 0) * first(i, k, 0);
        for (int m = 1; m < n; ++m) s += ginv_(l, m) * first(i, k, m);
        nu_(l, i, k) = std::move(s);
      }

  H_ = Tensor<Jet>(n, 1);
  for (int k = 0; k < n; ++k) {
    Jet s = zero_like(h_(0, 0, k) * ginv_(0, 0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += ginv_(i, j) * h_(i, j, k);
    H_(k) = s / static_cast<double>(n);
  }
}

void LocalGeometry::need(int derivatives, const char* what) const {
  if (order_ - 2 < derivatives)
    throw std::invalid_argument(std::string(what) + " needs immersion jets of order >= " +
                                std::to_string(derivatives + 2));
}

const Tensor<Jet>& LocalGeometry::Rup() const {
  need(1, "curvature");
  if (Rup_.empty()) Rup_ = riemann_up(Gamma_);
  return Rup_;
}

const Tensor<Jet>& LocalGeometry::R() const {
  if (R_.empty()) {
    const Tensor<Jet>& Ru = Rup();
    const int n = n_;
    R_ = Tensor<Jet>(n, 4);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            Jet s = g_(k, 0) * Ru(0, l, i, j);
            for (int m = 1; m < n; ++m) s += g_(k, m) * Ru(m, l, i, j);
            R_(i, j, k, l) = std::move(s);
          }
  }
  return R_;
}

const Tensor<Jet>& LocalGeometry::Ric() const {
  if (Ric_.empty()) {
    const Tensor<Jet>& Rl = R();
    const int n = n_;
    Ric_ = Tensor<Jet>(n, 2);
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        Jet s = zero_like(Rl(0, 0, 0, 0) * ginv_(0, 0));
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k) s += ginv_(i, k) * Rl(i, j, k, l);
        Ric_(j, l) = std::move(s);
      }
  }
  return Ric_;
}

Tensor<Jet> LocalGeometry::normal_curvature() const {
  need(1, "normal curvature");
  const Tensor<Jet> Ru = riemann_up(nu_);
  const int n = n_;
  Tensor<Jet> out(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Jet s = g_(k, 0) * Ru(0, l, i, j);
          for (int m = 1; m < n; ++m) s += g_(k, m) * Ru(m, l, i, j);
          out(i, j, k, l) = std::move(s);
        }
  return out;
}

const Tensor<Jet>& LocalGeometry::dh() const {
  need(1, "h_{ijk,l}");
  if (dh_.empty()) dh_ = covariant_derivative(h_, Gamma_);
  return dh_;
}

const Tensor<Jet>& LocalGeometry::ddh() const {
  need(2, "h_{ijk,lm}");
  if (ddh_.empty()) ddh_ = covariant_derivative(dh(), Gamma_);
  return ddh_;
}

const Tensor<Jet>& LocalGeometry::dH() const {
  need(1, "H_{i,j}");
  if (dH_.empty()) dH_ = covariant_derivative(H_, Gamma_);
  return dH_;
}

const Tensor<Jet>& LocalGeometry::ddH() const {
  need(2, "H_{i,jk}");
  if (ddH_.empty()) ddH_ = covariant_derivative(dH(), Gamma_);
  return ddH_;
}

const Tensor<Jet>& LocalGeometry::dddH() const {
  need(3, "H_{i,jkl}");
  if (dddH_.empty()) dddH_ = covariant_derivative(ddH(), Gamma_);
  return dddH_;
}

PointFrame LocalGeometry::frame() const {
  PointFrame f;
  f.n = n_;
  f.c = c_;
  f.g = values_of(g_);
  f.ginv = values_of(ginv_);
  f.Gamma = values_of(Gamma_);
  f.h = values_of(h_);
  f.H = values_of(H_);
  f.volume_density = std::sqrt(determinant(f.g));
  if (order_ >= 3) {
    f.R = values_of(R());
    f.Ric = values_of(Ric());
    if (n_ == 2) f.K = f.R(0, 1, 0, 1) / determinant(f.g);
  }
  return f;
}

DerivedFrame LocalGeometry::derived() const {
  DerivedFrame d;
  if (order_ >= 3) {
    d.dh = values_of(dh());
    d.dH = values_of(dH());
  }
  if (order_ >= 4) {
    d.ddh = values_of(ddh());
    d.ddH = values_of(ddH());
  }
  return d;
}

PointFrame point_frame(const ImmersionSpec& spec, const ChartPoint& p, int order) {
  LocalGeometry geo(spec, p, order);
  PointFrame f = geo.frame();
  if (spec.kind() == ImmersionKind::graph_torus && order <= 4) {
    const Jet th = lagrangian_angle(spec, p, 1);
    f.theta = th.value();
    Tensor<double> grad(f.n, 1);
    for (int k = 0; k < f.n; ++k) grad(k) = th.derivative(k).value();
    f.theta_grad = grad;
  }
  return f;
}

// ---------------------------------------------------------------------------

namespace {

double gauss_rhs(const PointFrame& f, int c, int i, int j, int k, int l) {
  const int n = f.n;
  double v = c * (f.g(i, k) * f.g(j, l) - f.g(i, l) * f.g(j, k));
  for (int m = 0; m < n; ++m)
    for (int p = 0; p < n; ++p)
      v += f.ginv(m, p) * (f.h(i, k, m) * f.h(j, l, p) - f.h(i, l, m) * f.h(j, k, p));
  return v;
}

}  // namespace

double gauss_consistency(const PointFrame& f, int c) {
  if (f.R.empty()) throw std::invalid_argument("gauss_consistency needs curvature (order >= 3)");
  const int n = f.n;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          worst = std::max(worst, std::abs(f.R(i, j, k, l) - gauss_rhs(f, c, i, j, k, l)));
  return worst;
}

double normal_curvature_consistency(const LocalGeometry& geo) {
  const PointFrame f = geo.frame();
  const Tensor<double> Rn = values_of(geo.normal_curvature());
  const int n = f.n;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          worst = std::max(worst, std::abs(Rn(i, j, k, l) - gauss_rhs(f, geo.c(), i, j, k, l)));
  return worst;
}

CodazziResiduals codazzi_and_H_symmetry(const PointFrame& f, const DerivedFrame& d) {
  if (d.dh.empty() || d.dH.empty()) throw std::invalid_argument("codazzi check needs first derivatives");
  const int n = f.n;
  CodazziResiduals r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double base = d.dh(i, j, k, l);
          const std::array<double, 3> others{d.dh(i, j, l, k), d.dh(l, j, k, i), d.dh(i, l, k, j)};
          for (double o : others) r.codazzi = std::max(r.codazzi, std::abs(base - o));
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.h_symmetry = std::max(r.h_symmetry, std::abs(d.dH(i, j) - d.dH(j, i)));
  return r;
}

double ricci_identity_residual(const LocalGeometry& geo) {
  const int n = geo.n();
  const Tensor<double> dd = values_of(geo.ddh());
  const Tensor<double> Ru = values_of(geo.Rup());
  const Tensor<double> h = values_of(geo.h());
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m)
        for (int l = 0; l < n; ++l)
          for (int p = 0; p < n; ++p) {
            double v = dd(i, j, m, l, p) - dd(i, j, m, p, l);
            for (int q = 0; q < n; ++q)
              v += Ru(q, i, p, l) * h(q, j, m) + Ru(q, j, p, l) * h(i, q, m) + Ru(q, m, p, l) * h(i, j, q);
            worst = std::max(worst, std::abs(v));
          }
  return worst;
}

double h_symmetry_residual(const PointFrame& f) {
  const int n = f.n;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double v = f.h(i, j, k);
        for (double o : {f.h(j, i, k), f.h(i, k, j), f.h(k, j, i)}) worst = std::max(worst, std::abs(v - o));
      }
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

using CxJet = detail::Cx<Jet>;

CxJet cx_add(const CxJet& a, const CxJet& b) { return {a.re + b.re, a.im + b.im}; }
CxJet cx_sub(const CxJet& a, const CxJet& b) { return {a.re - b.re, a.im - b.im}; }

std::complex<double> det_i_plus_iP(const Tensor<double>& P, double s) {
  const int n = P.dim();
  using C = std::complex<double>;
  auto A = [&](int i, int j) { return C(i == j ? 1.0 : 0.0, s * P(i, j)); };
  if (n == 1) return A(0, 0);
  if (n == 2) return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) - A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
         A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
}

}  // namespace

double angle_branch(const Tensor<double>& P) {
  double fro = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) fro += P[i] * P[i];
  if (!(fro <= 1e12)) throw std::domain_error("angle_branch: Hessian is non-finite or larger than 1e6");
  const int steps = 16 + static_cast<int>(std::ceil(P.dim() * std::sqrt(fro)));
  double theta = 0.0;
  std::complex<double> prev = det_i_plus_iP(P, 0.0);
  for (int k = 1; k <= steps; ++k) {
    const std::complex<double> cur = det_i_plus_iP(P, static_cast<double>(k) / steps);
    theta += std::arg(cur / prev);
    prev = cur;
  }
  return theta;
}

AngleGeometry::AngleGeometry(const Jet& phi, bool resolve_branch) {
  n_ = phi.dim();
  const int n = n_;
  if (n < 2 || n > 3) throw std::invalid_argument("graph angle geometry supports n = 2 or 3");
  if (phi.order() < 3) throw std::invalid_argument("graph potential jet must have order >= 3");
  P_ = Tensor<Jet>(n, 2);
  for (int i = 0; i < n; ++i) {
    const Jet di = phi.derivative(i);
    for (int j = i; j < n; ++j) {
      P_(i, j) = di.derivative(j);
      P_(j, i) = P_(i, j);
    }
  }
  g_ = Tensor<Jet>(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet s = P_(i, 0) * P_(0, j);
      for (int k = 1; k < n; ++k) s += P_(i, k) * P_(k, j);
      if (i == j) s += 1.0;
      g_(i, j) = s;
      g_(j, i) = s;
    }
  ginv_ = inverse_metric(g_);
  Gamma_ = christoffel(g_, ginv_);

  // det(I + iP) as a (Re, Im) pair.
  const Jet zero = zero_like(P_(0, 0));
  auto A = [&](int i, int j) { return CxJet{zero + (i == j ? 1.0 : 0.0), P_(i, j)}; };
  CxJet det;
  if (n == 2) {
    det = cx_sub(detail::cmul(A(0, 0), A(1, 1)), detail::cmul(A(0, 1), A(1, 0)));
  } else {
    auto minor = [&](int r0, int r1, int c0, int c1) {
      return cx_sub(detail::cmul(A(r0, c0), A(r1, c1)), detail::cmul(A(r0, c1), A(r1, c0)));
    };
    det = cx_add(cx_sub(detail::cmul(A(0, 0), minor(1, 2, 1, 2)), detail::cmul(A(0, 1), minor(1, 2, 0, 2))),
                 detail::cmul(A(0, 2), minor(1, 2, 0, 1)));
  }
  det_re_ = det.re;
  det_im_ = det.im;
  const double mod2 = det.re.value() * det.re.value() + det.im.value() * det.im.value();
  if (!(mod2 >= 1.0 - 1e-9)) throw std::logic_error("|det(I + i D^2 phi)|^2 < 1");
  theta_ = atan2(det.im, det.re);
  if (resolve_branch) theta_.coeff_at(0) = angle_branch(values_of(P_));
}

std::pair<double, double> AngleGeometry::bilaplacian_terms() const {
  if (theta_.order() < 4) throw std::invalid_argument("div_div_T route B needs a potential jet of order 6");
  const int n = n_;
  const Jet lap = laplacian(theta_, ginv_, Gamma_);
  const Jet bilap = laplacian(lap, ginv_, Gamma_);

  const Tensor<Jet> Ru = riemann_up(Gamma_);
  // Ric_bk = R^i_{k i b}... computed as g^{ik} R_ijkl; with R_ijkl = g_km R^m_{lij}
  // this is R^i_{l i j} contracted: Ric_jl = R^i_{l i j}.
  Tensor<Jet> Ric(n, 2);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      Jet s = Ru(0, l, 0, j);
      for (int i = 1; i < n; ++i) s += Ru(i, l, i, j);
      Ric(j, l) = std::move(s);
    }
  std::vector<Jet> grad;
  for (int k = 0; k < n; ++k) grad.push_back(theta_.derivative(k));
  // V^j = g^{ja} Ric_ab g^{bk} theta_k
  std::vector<Jet> up;  // g^{bk} theta_k
  for (int b = 0; b < n; ++b) {
    Jet s = ginv_(b, 0) * grad[0];
    for (int k = 1; k < n; ++k) s += ginv_(b, k) * grad[k];
    up.push_back(s);
  }
  std::vector<Jet> low;  // Ric_ab up^b
  for (int a = 0; a < n; ++a) {
    Jet s = Ric(a, 0) * up[0];
    for (int b = 1; b < n; ++b) s += Ric(a, b) * up[b];
    low.push_back(s);
  }
  Tensor<Jet> V(n, 1);
  for (int j = 0; j < n; ++j) {
    Jet s = ginv_(j, 0) * low[0];
    for (int a = 1; a < n; ++a) s += ginv_(j, a) * low[a];
    V(j) = s;
  }
  const Jet divV = divergence(V, Gamma_);
  return {bilap.value(), divV.value()};
}

double AngleGeometry::div_div_T() const {
  const double n = n_;
  const auto [bilap, divric] = bilaplacian_terms();
  return -((n - 1.0) / (n + 2.0)) * bilap - (n / (n + 2.0)) * divric;
}

Jet lagrangian_angle(const ImmersionSpec& spec, const ChartPoint& p, int order) {
  if (spec.kind() != ImmersionKind::graph_torus) throw std::invalid_argument("lagrangian_angle requires a graph immersion");
  if (order < 0 || order > 4) throw std::invalid_argument("lagrangian_angle order must be 0..4");
  const AngleGeometry ag(spec.potential_jet(p, std::max(order + 2, 3)));
  return ag.theta().truncated(order);
}

double metric_det_identity(const ImmersionSpec& spec, const ChartPoint& p) {
  if (spec.kind() != ImmersionKind::graph_torus) throw std::invalid_argument("metric_det_identity requires a graph immersion");
  const int n = spec.n();
  const std::vector<Jet> F = spec.evaluate(p, 1);
  Tensor<double> g(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      MultiIndex ei{}, ej{};
      ei[i] = 1;
      ej[j] = 1;
      double s = 0.0;
      for (const Jet& comp : F) s += comp.partial(ei) * comp.partial(ej);
      g(i, j) = s;
    }
  const Jet phi = spec.potential_jet(p, 2);
  Tensor<double> P(n, 2), B(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      MultiIndex a{};
      a[i] += 1;
      a[j] += 1;
      P(i, j) = phi.partial(a);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = (i == j) ? 1.0 : 0.0;
      for (int k = 0; k < n; ++k) s += P(i, k) * P(k, j);
      B(i, j) = s;
    }
  return std::abs(determinant(g) - determinant(B));
}

double mean_curvature_vs_angle(const ImmersionSpec& spec, const ChartPoint& p) {
  if (spec.kind() != ImmersionKind::graph_torus)
    throw std::invalid_argument("mean_curvature_vs_angle requires a graph immersion");
  const LocalGeometry geo(spec, p, 2);
  const Jet th = lagrangian_angle(spec, p, 1);
  const int n = spec.n();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(geo.H()(i).value() - th.derivative(i).value() / n));
  return worst;
}

double angle_gradient_identity(const ImmersionSpec& spec, const ChartPoint& p) {
  if (spec.kind() != ImmersionKind::graph_torus)
    throw std::invalid_argument("angle_gradient_identity requires a graph immersion");
  const int n = spec.n();
  const Jet phi = spec.potential_jet(p, 3);
  const AngleGeometry ag(phi);
  const Tensor<double> ginv = values_of(ag.ginv());
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    double rhs = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        MultiIndex a{};
        a[i] += 1;
        a[j] += 1;
        a[k] += 1;
        rhs += ginv(i, j) * phi.partial(a);
      }
    worst = std::max(worst, std::abs(ag.theta().derivative(k).value() - rhs));
  }
  return worst;
}

}  // namespace lagrome
