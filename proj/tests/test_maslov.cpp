#include <doctest.h>

#include <cmath>
#include <random>

#include "lagrome/maslov.hpp"
#include "lagrome/verify.hpp"

using namespace lagrome;

namespace {

double max_abs(const Tensor<double>& t) {
  double w = 0.0;
  for (double v : t.data()) w = std::max(w, std::abs(v));
  return w;
}

std::vector<ImmersionSpec> random_graphs(std::mt19937_64& rng, int n, int count) {
  std::vector<ImmersionSpec> out;
  for (int i = 0; i < count; ++i) out.push_back(ImmersionSpec::graph_torus(n, random_potential(n, rng)));
  return out;
}

double symbol_ratio(int n, double eps, const ChartPoint& p) {
  std::string phi = std::to_string(eps);
  for (int k = 1; k <= n; ++k) phi += "*sin(x" + std::to_string(k) + ")";
  const auto spec = ImmersionSpec::graph_torus(n, phi);
  const Jet jet = spec.potential_jet(p, 6);
  const double lap3 = std::pow(-static_cast<double>(n), 3) * jet.value();
  return AngleGeometry(jet).div_div_T() / lap3;
}

}  // namespace

TEST_CASE("Whitney family: htilde, T and its divergences vanish") {
  std::mt19937_64 rng(1);
  for (const auto& m : whitney_members(1))
    for (const auto& p : sample_points(m.spec, 6, rng)) {
      const MaslovFrame f = maslov_frame(m.spec, p);
      CHECK(max_abs(f.htilde) <= 1e-8);
      CHECK(max_abs(f.T) <= 1e-8);
      CHECK(max_abs(f.divT) <= 1e-7);
      CHECK(std::abs(*f.divdivT) <= 1e-6);
    }
}

TEST_CASE("plane: everything vanishes") {
  const auto plane = ImmersionSpec::graph_torus(2, "0");
  const MaslovFrame f = maslov_frame(plane, {0, {0.2, 0.4}});
  CHECK(max_abs(f.htilde) == 0.0);
  CHECK(max_abs(f.T) == 0.0);
  CHECK(max_abs(f.divT) == 0.0);
  CHECK(*f.divdivT == 0.0);
  CHECK(*f.divdivT_angle == 0.0);
  const auto gap = gap_predicate(point_frame(plane, {0, {0.2, 0.4}}, 2), 0);
  CHECK(gap.holds);
  CHECK(gap.margin == 0.0);
}

TEST_CASE("product torus has parallel JH") {
  const auto spec = ImmersionSpec::product_torus({1.0, 1.0});
  const MaslovFrame f = maslov_frame(spec, {0, {0.9, 2.2}});
  CHECK(max_abs(f.T) <= 1e-10);
  CHECK(f.H2 == doctest::Approx(0.5));
  CHECK(f.htilde2 == doctest::Approx(0.5));
}

TEST_CASE("identities on random graphs") {
  std::mt19937_64 rng(2);
  for (int n : {2, 3})
    for (const auto& spec : random_graphs(rng, n, 4))
      for (const auto& p : sample_points(spec, 5, rng)) {
        const LocalGeometry geo(spec, p, 5);
        const PointFrame f = geo.frame();
        const DerivedFrame d = geo.derived();
        const MaslovFrame m = maslov_frame(geo);
        CHECK(m.norm_identity <= 1e-10);
        CHECK(norm_identity_residual(f) <= 1e-10);
        CHECK(m.T_routes <= 1e-8);
        CHECK(m.divT_routes <= 1e-6 * (1.0 + max_abs(m.divT)));
        CHECK(m.htilde_codazzi <= 1e-8);
        double trace = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            trace += f.ginv(i, j) * m.T(i, j);
            CHECK(m.T(i, j) == doctest::Approx(m.T(j, i)).scale(1.0));
          }
        CHECK(std::abs(trace) <= 1e-12);
        for (int k = 0; k < n; ++k)
          for (int a = 0; a < 3; ++a) {
            // trace-free in every pair of slots
            double t = 0.0;
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j) {
                const int idx[3][3] = {{i, j, k}, {i, k, j}, {k, i, j}};
                t += f.ginv(i, j) * m.htilde(idx[a][0], idx[a][1], idx[a][2]);
              }
            CHECK(std::abs(t) <= 1e-10);
          }
        const auto ci = conformal_inequality(f, d);
        CHECK(ci.slack >= -1e-12);
        CHECK(ci.T_identity <= 1e-9);
        const double b = AngleGeometry(spec.potential_jet(p, 6)).div_div_T();
        CHECK(std::abs(*m.divdivT - b) <= 1e-6 * (1.0 + std::abs(b)));
      }
}

TEST_CASE("the Ricci term of the angle route carries n/(n+2)") {
  // At n = 3 the two routes only agree with weight n/(n+2) on div(Ric grad theta).
  std::mt19937_64 rng(3);
  const auto spec = ImmersionSpec::graph_torus(3, random_potential(3, rng));
  const ChartPoint p{0, {0.4, 1.7, 2.9}};
  const LocalGeometry geo(spec, p, 5);
  const double a = maslov_frame(geo).divdivT.value();
  const auto [bilap, divric] = AngleGeometry(spec.potential_jet(p, 6)).bilaplacian_terms();
  const double n = 3.0;
  CHECK(std::abs(a - (-(n - 1) / (n + 2) * bilap - n / (n + 2) * divric)) <= 1e-8 * (1.0 + std::abs(a)));
  CHECK(std::abs(a - (-(n - 1) / (n + 2) * bilap - 2.0 / (n + 2) * divric)) > 1e-6);
}

TEST_CASE("leading symbol of div div T") {
  for (int n : {2, 3}) {
    const ChartPoint p{0, n == 2 ? std::vector<double>{0.7, 1.1} : std::vector<double>{0.7, 1.1, 0.5}};
    const double r1 = symbol_ratio(n, 1e-2, p), r2 = symbol_ratio(n, 5e-3, p), r3 = symbol_ratio(n, 2.5e-3, p);
    // ratio = c0 + c2 eps^2 + c4 eps^4: two-level Richardson then one more level
    const double a = (4 * r2 - r1) / 3, b = (4 * r3 - r2) / 3;
    const double extrapolated = (16 * b - a) / 15;
    CHECK(std::abs(extrapolated + (n - 1.0) / (n + 2.0)) <= 1e-3);
  }
}

TEST_CASE("gap predicate") {
  std::mt19937_64 rng(4);
  const auto ws = ImmersionSpec::whitney_sphere(2, 1.0);
  for (const auto& p : sample_points(ws, 5, rng)) {
    const PointFrame f = point_frame(ws, p, 2);
    const auto g = gap_predicate(f, 0);
    CHECK(g.holds);
    CHECK(g.margin == doctest::Approx(norm2(f.H, f.ginv)));
  }
  // cylinder over a curve is flat, so |H|^2 = |htilde|^2 and the margin vanishes
  const auto cyl = ImmersionSpec::graph_torus(2, "0.5*sin(2*x1)");
  for (const auto& p : sample_points(cyl, 10, rng)) {
    const auto g = gap_predicate(point_frame(cyl, p, 2), 0);
    CHECK(std::abs(g.margin) <= 1e-12);
  }
  CHECK(gap_rhs(2, 1, 0.5) == doctest::Approx(2.5));
  CHECK(gap_rhs(3, 1, 0.0) == doctest::Approx(2.0 * 4 / 6));
  CHECK(gap_rhs(3, 0, 1.0) == doctest::Approx(18.0 / 30));
}

TEST_CASE("surface curvature identity") {
  std::mt19937_64 rng(5);
  for (const auto& m : catalog(5)) {
    if (m.spec.n() != 2) continue;
    for (const auto& p : sample_points(m.spec, 3, rng))
      CHECK(surface_curvature_identity(point_frame(m.spec, p, 3)) <= 1e-8);
  }
  for (const auto& spec : random_graphs(rng, 2, 3))
    for (const auto& p : sample_points(spec, 3, rng)) CHECK(surface_curvature_identity(point_frame(spec, p, 3)) <= 1e-8);
}

TEST_CASE("matrix inequality examples") {
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd D(2, 2), W(2, 2);
  D << 1, 0, 0, -1;
  W << 0, 1, 1, 0;
  const auto id = lili_check({I, I});
  CHECK(id.lhs == 16.0);
  CHECK(id.rhs == 24.0);
  const auto eq = lili_check({D, W});
  CHECK(eq.lhs == 24.0);
  CHECK(eq.rhs == 24.0);
  CHECK_THROWS_AS(lili_check({I}), std::invalid_argument);
  CHECK_THROWS_AS(lili_check({I, Eigen::MatrixXd::Identity(3, 3)}), std::invalid_argument);
}

TEST_CASE("matrix inequality on random tuples") {
  const auto s = lili_random(100000, 42);
  CHECK(s.trials == 100000);
  CHECK(s.violations == 0);
  CHECK(s.max_violation <= 1e-12);
  CHECK(s.max_ratio <= 1.0 + 1e-12);
  const auto again = lili_random(1000, 42), other = lili_random(1000, 43);
  CHECK(again.max_ratio == lili_random(1000, 42).max_ratio);
  CHECK(other.max_ratio != again.max_ratio);
}
