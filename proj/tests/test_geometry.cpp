#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "lagrome/ambient.hpp"
#include "lagrome/geometry.hpp"
#include "lagrome/immersion.hpp"
#include "lagrome/verify.hpp"
#include "oracles.hpp"

using namespace lagrome;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_vector(std::mt19937_64& rng, int d, double scale = 1.0) {
  std::uniform_real_distribution<double> U(-scale, scale);
  std::vector<double> v(d);
  for (double& x : v) x = U(rng);
  return v;
}

MultiIndex unit(int i) {
  MultiIndex a{};
  a[i] = 1;
  return a;
}

MultiIndex pair(int i, int j) {
  MultiIndex a{};
  a[i] += 1;
  a[j] += 1;
  return a;
}

/// d^alpha of component a of the immersion, by finite differences.
double fd_component(const ImmersionSpec& spec, const ChartPoint& p, int a, const MultiIndex& alpha) {
  auto f = [&](std::span<const double> x) {
    ChartPoint q{p.chart_id, std::vector<double>(x.begin(), x.end())};
    return spec.position(q)[a];
  };
  return oracle::finite_difference(f, p.coords, alpha, spec.n(), 1e-3);
}

ImmersionSpec round_sphere(int n) {
  return ImmersionSpec::custom(
      n, 0, ChartDomain::sphere,
      [n](std::span<const Jet> t) {
        // hyperspherical coordinates, then (x, 0) in R^{2n}
        std::vector<Jet> x;
        Jet s(t[0].dim(), t[0].order(), 1.0);
        for (int k = 0; k < n; ++k) {
          x.push_back(s * cos(t[k]));
          s = s * sin(t[k]);
        }
        x.push_back(s);
        while (static_cast<int>(x.size()) < 2 * n) x.push_back(Jet(t[0].dim(), t[0].order(), 0.0));
        return x;
      },
      "round_sphere");
}

}  // namespace

// Ambient -------------------------------------------------------------------

TEST_CASE("flat ambient is trivial") {
  const AmbientSpace space(0, 2);
  const std::vector<double> p = {0.3, -1.0, 2.0, 0.5};
  const auto D = ambient_eval(space, p, 1);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      CHECK(D.G(a, b) == (a == b ? 1.0 : 0.0));
      for (int c = 0; c < 4; ++c) CHECK(D.Gamma(c, a, b) == 0.0);
    }
  const std::vector<double> X = {1, 0, 0, 0};
  CHECK(holomorphic_sectional_curvature(space, p, X) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("Fubini-Study metric at the chart origin is the identity") {
  for (int n : {1, 2, 3}) {
    const AmbientSpace space(1, n);
    const std::vector<double> p(2 * n, 0.0);
    const auto D = ambient_eval(space, p, 0);
    for (int a = 0; a < 2 * n; ++a)
      for (int b = 0; b < 2 * n; ++b) CHECK(D.G(a, b) == doctest::Approx(a == b ? 1.0 : 0.0));
    std::vector<double> X(2 * n, 0.0);
    X[0] = 1.0;
    CHECK(holomorphic_sectional_curvature(space, p, X) == doctest::Approx(4.0).epsilon(1e-12));
  }
}

TEST_CASE("holomorphic sectional curvature is 4 at random points and directions") {
  std::mt19937_64 rng(7);
  for (int n : {2, 3}) {
    const AmbientSpace space(1, n);
    for (int t = 0; t < 20; ++t) {
      const auto p = random_vector(rng, 2 * n, 1.5), X = random_vector(rng, 2 * n);
      CHECK(std::abs(holomorphic_sectional_curvature(space, p, X) - 4.0) <= 1e-8);
    }
  }
}

TEST_CASE("Fubini-Study metric against the Hessian of the Kaehler potential") {
  // G(X, X) = (D^2 K(X, X) + D^2 K(JX, JX)) / 4 with K = log(1 + |z|^2)
  std::mt19937_64 rng(8);
  const AmbientSpace space(1, 2);
  auto K = [](std::span<const double> z) {
    double r = 1.0;
    for (double v : z) r += v * v;
    return std::log(r);
  };
  for (int t = 0; t < 5; ++t) {
    const auto p = random_vector(rng, 4, 1.0);
    const auto D = ambient_eval(space, p, 0);
    Eigen::Matrix4d hess;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) hess(a, b) = oracle::finite_difference(K, p, pair(a, b), 4, 1e-3);
    const auto X = random_vector(rng, 4);
    std::vector<double> JX(4);
    apply_J<double>(X, JX);
    double xx = 0.0, jj = 0.0, gxx = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        xx += hess(a, b) * X[a] * X[b];
        jj += hess(a, b) * JX[a] * JX[b];
        gxx += D.G(a, b) * X[a] * X[b];
      }
    CHECK(gxx == doctest::Approx((xx + jj) / 4.0).epsilon(1e-7));
  }
}

TEST_CASE("ambient Christoffel symbols against finite differences of the metric") {
  std::mt19937_64 rng(9);
  const AmbientSpace space(1, 2);
  const int d = 4;
  for (int t = 0; t < 5; ++t) {
    const auto p = random_vector(rng, d, 1.0);
    const auto D = ambient_eval(space, p, 0);
    // dG[a][b][e] = d_e G_ab
    double dG[4][4][4];
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        auto Gab = [&](std::span<const double> q) {
          std::vector<double> ea(d, 0.0), eb(d, 0.0);
          ea[a] = 1.0;
          eb[b] = 1.0;
          return ambient_inner<double>(space, q, ea, eb);
        };
        for (int e = 0; e < d; ++e) dG[a][b][e] = oracle::finite_difference(Gab, p, unit(e), d, 1e-3);
      }
    Eigen::Matrix4d G, Ginv;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) G(a, b) = D.G(a, b);
    Ginv = G.inverse();
    for (int c = 0; c < d; ++c)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          double gam = 0.0;
          for (int e = 0; e < d; ++e) gam += 0.5 * Ginv(c, e) * (dG[e][b][a] + dG[e][a][b] - dG[a][b][e]);
          CHECK(std::abs(D.Gamma(c, a, b) - gam) <= 1e-8);
        }
  }
}

TEST_CASE("ambient curvature has the constant-holomorphic-curvature form") {
  // Rbar(X,Y,Z,W) = c [G(X,W)G(Y,Z) - G(X,Z)G(Y,W) + G(X,JZ)... ] checked through sectional values:
  // sectional curvature of a totally real plane is c, of a complex line 4c.
  std::mt19937_64 rng(10);
  const AmbientSpace space(1, 2);
  for (int t = 0; t < 5; ++t) {
    const auto p = random_vector(rng, 4, 0.8);
    const auto D = ambient_eval(space, p, 1);
    const auto R = ambient_riemann(D);
    // orthonormal totally real pair at p: use the G-orthonormalized e1, e3 directions made totally real
    std::vector<double> X = {1, 0, 0, 0}, Y = {0, 0, 1, 0};
    // Gram-Schmidt Y against X and JX
    std::vector<double> JX(4);
    apply_J<double>(X, JX);
    auto ip = [&](const std::vector<double>& a, const std::vector<double>& b) {
      return ambient_inner<double>(space, p, a, b);
    };
    for (const auto* v : {&X, &JX}) {
      const double c = ip(Y, *v) / ip(*v, *v);
      for (int a = 0; a < 4; ++a) Y[a] -= c * (*v)[a];
    }
    double Rxyyx = 0.0;
    for (int dd = 0; dd < 4; ++dd)
      for (int c = 0; c < 4; ++c)
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            double lower = 0.0;
            for (int e = 0; e < 4; ++e) lower += D.G(e, dd) * R(e, c, a, b);
            Rxyyx += lower * X[a] * Y[b] * Y[c] * X[dd];
          }
    const double area = ip(X, X) * ip(Y, Y) - ip(X, Y) * ip(X, Y);
    CHECK(Rxyyx / area == doctest::Approx(1.0).epsilon(1e-8));
  }
}

// Immersions ----------------------------------------------------------------

TEST_CASE("catalog positions match closed forms") {
  const auto ws = ImmersionSpec::whitney_sphere(2, 2.0, {0.1, 0.2, 0.3, 0.4});
  const ChartPoint p{0, {0.7, 1.9}};
  const auto x = ws.sphere_point(p);
  const double s = x[2], w = 2.0 / (1.0 + s * s);
  const auto pos = ws.position(p);
  CHECK(pos[0] == doctest::Approx(w * x[0] + 0.1));
  CHECK(pos[1] == doctest::Approx(w * x[0] * s + 0.2));
  CHECK(pos[2] == doctest::Approx(w * x[1] + 0.3));
  CHECK(pos[3] == doctest::Approx(w * x[1] * s + 0.4));

  const auto pt = ImmersionSpec::product_torus({1.0, 2.0});
  const auto q = pt.position({0, {0.4, 2.5}});
  CHECK(q[0] == doctest::Approx(std::cos(0.4)));
  CHECK(q[1] == doctest::Approx(std::sin(0.4)));
  CHECK(q[2] == doctest::Approx(2 * std::cos(2.5)));
  CHECK(q[3] == doctest::Approx(2 * std::sin(2.5)));

  const auto gr = ImmersionSpec::graph_torus(2, "sin(x1)*cos(2*x2)");
  const auto g = gr.position({0, {0.3, 1.1}});
  CHECK(g[0] == doctest::Approx(0.3));
  CHECK(g[1] == doctest::Approx(std::cos(0.3) * std::cos(2.2)));
  CHECK(g[2] == doctest::Approx(1.1));
  CHECK(g[3] == doctest::Approx(-2 * std::sin(0.3) * std::sin(2.2)));
}

TEST_CASE("Whitney sphere in CP^n stays in the affine chart and is Lagrangian") {
  std::mt19937_64 rng(12);
  for (int n : {2, 3})
    for (double th : {0.3, 1.0}) {
      const auto spec = ImmersionSpec::whitney_cp(n, th);
      for (const auto& p : sample_points(spec, 10, rng)) {
        for (double v : spec.position(p)) CHECK(std::isfinite(v));
        CHECK(lagrangian_residual(spec, p) <= 1e-10);
      }
    }
}

TEST_CASE("Lagrangian residual on the catalog and on random graphs") {
  std::mt19937_64 rng(13);
  for (const auto& m : catalog(13))
    for (const auto& p : sample_points(m.spec, 5, rng)) CHECK(lagrangian_residual(m.spec, p) <= 1e-10);
  for (int t = 0; t < 5; ++t) {
    const auto spec = ImmersionSpec::graph_torus(2, random_potential(2, rng));
    for (const auto& p : sample_points(spec, 5, rng)) CHECK(lagrangian_residual(spec, p) <= 1e-12);
  }
}

TEST_CASE("chart validation") {
  const auto ws = ImmersionSpec::whitney_sphere(2, 1.0);
  CHECK_THROWS_AS(ws.position({0, {0.0, 1.0}}), InvalidChartPoint);
  CHECK_THROWS_AS(ws.position({0, {kPi, 1.0}}), InvalidChartPoint);
  CHECK_THROWS_AS(ws.position({2, {1.0, 1.0}}), InvalidChartPoint);
  CHECK_THROWS_AS(ws.position({0, {1.0}}), InvalidChartPoint);
  CHECK_THROWS_AS(ws.position({0, {1.0, std::nan("")}}), InvalidChartPoint);
  const auto gr = ImmersionSpec::graph_torus(2, "0");
  CHECK_THROWS_AS(gr.position({1, {1.0, 1.0}}), InvalidChartPoint);
  CHECK_THROWS_AS(ImmersionSpec::whitney_sphere(2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ImmersionSpec::graph_torus(4, "0"), std::invalid_argument);
}

TEST_CASE("second sphere chart covers the poles of the first") {
  const auto ws = ImmersionSpec::whitney_sphere(2, 1.0);
  const std::vector<double> north = {1.0, 0.0, 0.0};
  const ChartPoint p = ws.sphere_chart(north, 1);
  const auto pos = ws.position(p);
  CHECK(pos[0] == doctest::Approx(1.0));
  CHECK(std::abs(pos[1]) < 1e-15);
  CHECK(std::abs(pos[2]) < 1e-15);
  CHECK(std::abs(pos[3]) < 1e-15);
  CHECK(lagrangian_residual(ws, p) <= 1e-12);
}

// Point geometry -------------------------------------------------------------

TEST_CASE("metric and second fundamental form against finite differences (flat ambient)") {
  std::mt19937_64 rng(14);
  std::vector<ImmersionSpec> specs = {ImmersionSpec::whitney_sphere(2, 1.3, {0.2, -0.1, 0.4, 0.0}),
                                      ImmersionSpec::graph_torus(2, random_potential(2, rng)),
                                      ImmersionSpec::product_torus({1.0, 2.0})};
  for (const auto& spec : specs)
    for (const auto& p : sample_points(spec, 3, rng)) {
      const int n = spec.n(), d = 2 * n;
      const PointFrame f = point_frame(spec, p, 2);
      std::vector<std::vector<double>> dF(n, std::vector<double>(d)), JdF(n, std::vector<double>(d));
      for (int i = 0; i < n; ++i) {
        for (int a = 0; a < d; ++a) dF[i][a] = fd_component(spec, p, a, unit(i));
        apply_J<double>(dF[i], JdF[i]);
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double gij = 0.0;
          for (int a = 0; a < d; ++a) gij += dF[i][a] * dF[j][a];
          CHECK(std::abs(f.g(i, j) - gij) <= 1e-7 * std::max(1.0, std::abs(gij)));
          std::vector<double> ddF(d);
          for (int a = 0; a < d; ++a) ddF[a] = fd_component(spec, p, a, pair(i, j));
          for (int k = 0; k < n; ++k) {
            double hijk = 0.0;
            for (int a = 0; a < d; ++a) hijk += ddF[a] * JdF[k][a];
            CHECK(std::abs(f.h(i, j, k) - hijk) <= 1e-6 * std::max(1.0, std::abs(hijk)));
          }
        }
    }
}

TEST_CASE("plane has vanishing geometry") {
  const auto plane = ImmersionSpec::graph_torus(3, "0");
  const LocalGeometry geo(plane, {0, {0.1, 0.2, 0.3}}, 4);
  const PointFrame f = geo.frame();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(f.g(i, j) == (i == j ? 1.0 : 0.0));
  for (double v : f.h.data()) CHECK(v == 0.0);
  for (double v : f.R.data()) CHECK(v == 0.0);
  const DerivedFrame d = geo.derived();
  for (double v : d.ddh.data()) CHECK(v == 0.0);
}

TEST_CASE("cubic graph: only h_111 survives at the origin") {
  const auto spec = ImmersionSpec::graph_torus(2, "x1^3/6");
  const PointFrame f = point_frame(spec, {0, {0.0, 0.7}}, 2);
  CHECK(f.h(0, 0, 0) == doctest::Approx(1.0));
  CHECK(f.h(0, 0, 1) == 0.0);
  CHECK(f.h(0, 1, 1) == 0.0);
  CHECK(f.h(1, 1, 1) == 0.0);
  CHECK(f.H(0) == doctest::Approx(0.5));
}

TEST_CASE("product torus: flat with |H|^2 = 1/2") {
  const auto spec = ImmersionSpec::product_torus({1.0, 1.0});
  const PointFrame f = point_frame(spec, {0, {0.3, 2.0}}, 3);
  CHECK(std::abs(f.K) < 1e-14);
  CHECK(norm2(f.H, f.ginv) == doctest::Approx(0.5));
  CHECK(norm2(f.h, f.ginv) == doctest::Approx(2.0));
}

TEST_CASE("Ricci sign convention on the round sphere fixture") {
  std::mt19937_64 rng(15);
  for (int n : {2, 3}) {
    const auto spec = round_sphere(n);
    for (const auto& p : sample_points(spec, 4, rng)) {
      const PointFrame f = point_frame(spec, p, 3);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(f.Ric(i, j) == doctest::Approx((n - 1) * f.g(i, j)).scale(1.0));
      if (n == 2) CHECK(f.K == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("degenerate metric is reported") {
  const auto spec = ImmersionSpec::custom(
      2, 0, ChartDomain::torus,
      [](std::span<const Jet> t) {
        const Jet z(t[0].dim(), t[0].order(), 0.0);
        return std::vector<Jet>{t[0], z, t[0], z};
      },
      "collapsed");
  CHECK_THROWS_AS(point_frame(spec, {0, {0.2, 0.3}}, 2), DegenerateMetric);
}

TEST_CASE("structural equations on the catalog") {
  std::mt19937_64 rng(16);
  for (const auto& m : catalog(16))
    for (const auto& p : sample_points(m.spec, 2, rng)) {
      const LocalGeometry geo(m.spec, p, 4);
      const PointFrame f = geo.frame();
      CHECK(h_symmetry_residual(f) <= 1e-12);
      CHECK(gauss_consistency(f, m.spec.c()) <= 1e-8);
      CHECK(normal_curvature_consistency(geo) <= 1e-8);
      const auto cod = codazzi_and_H_symmetry(f, geo.derived());
      CHECK(cod.codazzi <= 1e-8);
      CHECK(cod.h_symmetry <= 1e-8);
      CHECK(ricci_identity_residual(geo) <= 1e-7);
    }
}

TEST_CASE("a non-Lagrangian surface fails the symmetry of h") {
  // round sphere x -> (x, 0) in C^2 is not Lagrangian; h_ijk is not totally symmetric there
  const auto spec = round_sphere(2);
  CHECK(lagrangian_residual(spec, {0, {1.0, 0.5}}) > 1e-3);
}

// Lagrangian angle ---------------------------------------------------------

TEST_CASE("angle examples") {
  const auto zero = ImmersionSpec::graph_torus(2, "0");
  CHECK(lagrangian_angle(zero, {0, {0.5, 0.5}}, 0).value() == 0.0);
  const auto half = ImmersionSpec::graph_torus(2, "0.5*x1^2");
  CHECK(lagrangian_angle(half, {0, {0.5, 0.5}}, 0).value() == doctest::Approx(kPi / 4).epsilon(1e-15));
}

TEST_CASE("angle takes the continuous branch beyond pi") {
  const auto steep = ImmersionSpec::graph_torus(3, "5*(x1^2 + x2^2 + x3^2)");
  const double theta = lagrangian_angle(steep, {0, {0.1, 0.2, 0.3}}, 0).value();
  CHECK(theta == doctest::Approx(3 * std::atan(10.0)).epsilon(1e-12));
  CHECK(theta > kPi);
  Tensor<double> P(2, 2);
  P(0, 0) = -20.0;
  P(1, 1) = -30.0;
  CHECK(angle_branch(P) == doctest::Approx(std::atan(-20.0) + std::atan(-30.0)).epsilon(1e-12));
  P(0, 0) = std::nan("");
  CHECK_THROWS_AS(angle_branch(P), std::domain_error);
}

TEST_CASE("angle identities on random graphs") {
  std::mt19937_64 rng(17);
  for (int n : {2, 3})
    for (int t = 0; t < 3; ++t) {
      const auto spec = ImmersionSpec::graph_torus(n, random_potential(n, rng));
      for (const auto& p : sample_points(spec, 5, rng)) {
        CHECK(metric_det_identity(spec, p) <= 1e-12);
        CHECK(angle_gradient_identity(spec, p) <= 1e-9);
        CHECK(mean_curvature_vs_angle(spec, p) <= 1e-9);
      }
    }
}

TEST_CASE("angle gradient against finite differences of the angle") {
  std::mt19937_64 rng(18);
  const auto spec = ImmersionSpec::graph_torus(2, random_potential(2, rng));
  const ChartPoint p{0, {0.9, 2.1}};
  const Jet theta = lagrangian_angle(spec, p, 2);
  auto f = [&](std::span<const double> x) {
    return lagrangian_angle(spec, {0, std::vector<double>(x.begin(), x.end())}, 0).value();
  };
  for (int i = 0; i < 2; ++i)
    CHECK(theta.partial(unit(i)) == doctest::Approx(oracle::finite_difference(f, p.coords, unit(i), 2, 1e-3)).epsilon(1e-7));
}
