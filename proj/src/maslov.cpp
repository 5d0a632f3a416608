#include "lagrome/maslov.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace lagrome {

namespace {

double trace(const Tensor<double>& A, const Tensor<double>& ginv) {
  double s = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) s += ginv[i] * A[i];
  return s;
}

double max_abs_diff(const Tensor<double>& a, const Tensor<double>& b) {
  double w = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
  return w;
}

void require(const Tensor<double>& t, const char* what) {
  if (t.empty()) throw std::invalid_argument(std::string(what) + " not available at this jet order");
}

}  // namespace

Tensor<double> traceless_h(const PointFrame& f) {
  const int n = f.n;
  const double a = double(n) / (n + 2);
  Tensor<double> ht(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        ht(i, j, k) = f.h(i, j, k) - a * (f.H(k) * f.g(i, j) + f.H(i) * f.g(j, k) + f.H(j) * f.g(i, k));
  return ht;
}

Tensor<double> maslov_T(const PointFrame& f, const DerivedFrame& d) {
  require(d.dH, "H_{i,j}");
  const int n = f.n;
  const double div = trace(d.dH, f.ginv);
  Tensor<double> T(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) T(i, j) = (n * d.dH(i, j) - div * f.g(i, j)) / (n + 2);
  return T;
}

Tensor<double> maslov_T_from_htilde(const PointFrame& f, const DerivedFrame& d) {
  require(d.dh, "h_{ijk,l}");
  const int n = f.n;
  const double a = double(n) / (n + 2);
  Tensor<double> T(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double dht = d.dh(i, j, k, l) -
                             a * (d.dH(k, l) * f.g(i, j) + d.dH(i, l) * f.g(j, k) + d.dH(j, l) * f.g(i, k));
          s += f.ginv(k, l) * dht;
        }
      T(i, j) = s / n;
    }
  return T;
}

CovectorRoutes div_T(const PointFrame& f, const DerivedFrame& d) {
  require(d.ddH, "H_{i,jk}");
  require(f.Ric, "Ric");
  const int n = f.n;
  CovectorRoutes r{Tensor<double>(n, 1), Tensor<double>(n, 1)};
  std::vector<double> Hup(n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) Hup[k] += f.ginv(k, l) * f.H(l);
  for (int i = 0; i < n; ++i) {
    double lapHi = 0.0, grad_div = 0.0, ric = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        lapHi += f.ginv(j, k) * d.ddH(i, j, k);
        grad_div += f.ginv(j, k) * d.ddH(j, k, i);
      }
    for (int k = 0; k < n; ++k) ric += f.Ric(i, k) * Hup[k];
    r.a(i) = (n * lapHi - grad_div) / (n + 2);
    r.b(i) = ((n - 1) * lapHi + ric) / (n + 2);
  }
  r.discrepancy = max_abs_diff(r.a, r.b);
  return r;
}

double div_div_T(const LocalGeometry& geo) {
  const int n = geo.n();
  const Tensor<double> ginv = values_of(geo.ginv());
  const Tensor<double> d3 = values_of(geo.dddH());  // H_{i,jkl}
  // (div T)_{i,l} = (1/(n+2)) (n g^{jk} H_{i,jkl} - g^{jk} H_{j,kil}); contract with g^{il}.
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      if (ginv(i, l) == 0.0) continue;
      double v = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) v += ginv(j, k) * (n * d3(i, j, k, l) - d3(j, k, i, l));
      s += ginv(i, l) * v;
    }
  return -n * s / (n + 2);
}

ConformalInequality conformal_inequality(const PointFrame& f, const DerivedFrame& d) {
  require(d.dH, "H_{i,j}");
  const int n = f.n;
  ConformalInequality r;
  r.lhs = norm2(d.dH, f.ginv);
  const double div = trace(d.dH, f.ginv);
  r.rhs = div * div / n;
  r.slack = r.lhs - r.rhs;
  const double T2 = norm2(maslov_T(f, d), f.ginv);
  const double a = double(n) / (n + 2);
  r.T_identity = std::abs(T2 - a * a * r.slack);
  return r;
}

double gap_rhs(int n, int c, double H2) {
  if (n == 2) return 2.0 * c + H2;
  return 2.0 * c * (n + 1) / (n + 3) + 2.0 * n * n * H2 / ((n + 3) * (n + 2));
}

GapResult gap_predicate(const PointFrame& f, int c) {
  if (f.n < 2) throw std::invalid_argument("gap_predicate needs n >= 2");
  GapResult r;
  r.htilde2 = norm2(traceless_h(f), f.ginv);
  r.rhs = gap_rhs(f.n, c, norm2(f.H, f.ginv));
  r.margin = r.rhs - r.htilde2;
  r.holds = r.margin >= 0.0;
  return r;
}

double norm_identity_residual(const PointFrame& f) {
  const int n = f.n;
  const double ht2 = norm2(traceless_h(f), f.ginv);
  const double h2 = norm2(f.h, f.ginv);
  const double H2 = norm2(f.H, f.ginv);
  return std::abs(ht2 - (h2 - 3.0 * n * n / (n + 2) * H2));
}

double htilde_codazzi_residual(const PointFrame& f, const DerivedFrame& d) {
  require(d.dh, "h_{ijk,l}");
  const int n = f.n;
  const double a = double(n) / (n + 2);
  auto dht = [&](int i, int j, int m, int k) {
    return d.dh(i, j, m, k) - a * (d.dH(m, k) * f.g(i, j) + d.dH(i, k) * f.g(j, m) + d.dH(j, k) * f.g(i, m));
  };
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) {
          const double lhs = dht(i, j, m, k) - dht(i, k, m, j);
          const double rhs =
              a * (f.g(i, k) * d.dH(m, j) + f.g(k, m) * d.dH(i, j) - f.g(i, j) * d.dH(m, k) - f.g(j, m) * d.dH(i, k));
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  return worst;
}

double surface_curvature_identity(const PointFrame& f) {
  if (f.n != 2) throw std::invalid_argument("surface identity is for n = 2");
  if (f.R.empty()) throw std::invalid_argument("surface identity needs curvature (order >= 3)");
  const double H2 = norm2(f.H, f.ginv);
  const double ht2 = norm2(traceless_h(f), f.ginv);
  return std::abs(f.K - (f.c + 0.5 * (H2 - ht2)));
}

LiLiResult lili_check(const std::vector<Eigen::MatrixXd>& B) {
  if (B.size() < 2) throw std::invalid_argument("lili_check needs at least two matrices");
  const Eigen::Index n = B[0].rows();
  for (const auto& b : B)
    if (b.rows() != n || b.cols() != n) throw std::invalid_argument("lili_check matrices must share a square shape");
  LiLiResult r;
  double S = 0.0;
  for (std::size_t m = 0; m < B.size(); ++m) {
    S += (B[m] * B[m]).trace();
    for (std::size_t k = 0; k < B.size(); ++k) {
      const Eigen::MatrixXd C = B[m] * B[k] - B[k] * B[m];
      const double Smk = (B[m] * B[k]).trace();
      r.lhs += C.squaredNorm() + Smk * Smk;
    }
  }
  r.rhs = 1.5 * S * S;
  return r;
}

LiLiSweep lili_random(long trials, std::uint64_t seed) {
  if (trials < 0) throw std::invalid_argument("lili_random needs a non-negative trial count");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(2, 4);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  LiLiSweep out;
  out.trials = trials;
  for (long t = 0; t < trials; ++t) {
    const int m = size(rng), n = size(rng);
    std::vector<Eigen::MatrixXd> B(m, Eigen::MatrixXd(n, n));
    for (auto& b : B)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) b(i, j) = b(j, i) = U(rng);
    const LiLiResult r = lili_check(B);
    const double v = std::max(0.0, (r.lhs - r.rhs) / (1.0 + r.rhs));
    out.max_violation = std::max(out.max_violation, v);
    if (r.rhs > 0.0) out.max_ratio = std::max(out.max_ratio, r.lhs / r.rhs);
    if (v > 1e-12) ++out.violations;
  }
  return out;
}

MaslovFrame maslov_frame(const LocalGeometry& geo) {
  if (geo.order() < 4) throw std::invalid_argument("maslov_frame needs immersion jets of order >= 4");
  const PointFrame f = geo.frame();
  const DerivedFrame d = geo.derived();
  const int n = f.n;
  MaslovFrame m;
  m.n = n;
  m.htilde = traceless_h(f);
  m.T = maslov_T(f, d);
  const CovectorRoutes dt = div_T(f, d);
  m.divT = dt.a;
  m.h2 = norm2(f.h, f.ginv);
  m.htilde2 = norm2(m.htilde, f.ginv);
  m.H2 = norm2(f.H, f.ginv);
  m.T2 = norm2(m.T, f.ginv);
  m.divT2 = norm2(m.divT, f.ginv);
  m.gradJH2 = norm2(d.dH, f.ginv);
  m.divJH = trace(d.dH, f.ginv);
  m.norm_identity = norm_identity_residual(f);
  m.T_routes = max_abs_diff(m.T, maslov_T_from_htilde(f, d));
  m.divT_routes = dt.discrepancy;
  m.htilde_codazzi = htilde_codazzi_residual(f, d);
  if (geo.order() >= 5) m.divdivT = div_div_T(geo);
  return m;
}

MaslovFrame maslov_frame(const ImmersionSpec& spec, const ChartPoint& p, int order) {
  const LocalGeometry geo(spec, p, order);
  MaslovFrame m = maslov_frame(geo);
  if (spec.kind() == ImmersionKind::graph_torus && order >= 5)
    m.divdivT_angle = AngleGeometry(spec.potential_jet(p, 6)).div_div_T();
  return m;
}

}  // namespace lagrome
