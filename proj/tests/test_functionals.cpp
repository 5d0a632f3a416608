#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lagrome/functionals.hpp"
#include "lagrome/parallel.hpp"
#include "lagrome/verify.hpp"

using namespace lagrome;

namespace {

constexpr double kPi = std::numbers::pi;

ImmersionSpec round_sphere2() {
  return ImmersionSpec::custom(
      2, 0, ChartDomain::sphere,
      [](std::span<const Jet> t) {
        const Jet z(t[0].dim(), t[0].order(), 0.0);
        return std::vector<Jet>{cos(t[0]), sin(t[0]) * cos(t[1]), sin(t[0]) * sin(t[1]), z};
      },
      "round_sphere");
}

const FunctionalReport* find(const std::vector<FunctionalReport>& rs, const std::string& name) {
  for (const auto& r : rs)
    if (r.name == name) return &r;
  return nullptr;
}

}  // namespace

TEST_CASE("grids") {
  const auto t = torus_grid(2, 8);
  CHECK(t.nodes.size() == 64);
  double w = 0.0;
  for (double v : t.weights) w += v;
  CHECK(w == doctest::Approx(4 * kPi * kPi));
  const auto s = sphere_grid(2, 12, 24, 1e-3);
  CHECK(s.nodes.size() == 12 * 24);
  CHECK(s.label() == "12x24@delta=0.001");
  for (const auto& p : s.nodes) CHECK((p.coords[0] > 1e-3 && p.coords[0] < kPi - 1e-3));
}

TEST_CASE("area of the product torus") {
  const auto spec = ImmersionSpec::product_torus({1.0, 1.0});
  const auto r = integrate(spec, grid_pair(spec, 16), area_field());
  CHECK(std::abs(r.extrapolated - 4 * kPi * kPi) <= 1e-10);
}

TEST_CASE("area of the round sphere fixture") {
  const auto r = integrate(round_sphere2(), grid_pair(round_sphere2(), 48), area_field());
  CHECK(std::abs(r.extrapolated - 4 * kPi) <= 1e-8);
}

TEST_CASE("trapezoid sums are exact for trigonometric integrands") {
  // integrand g_11 = 1 + a^2 cos^2(x1) for phi = a sin(x1)
  const double a = 0.7;
  const auto spec = ImmersionSpec::graph_torus(2, "0.7*sin(x1)");
  PointField f{"g11_over_density", 2, [](const LocalGeometry& geo) {
                 const PointFrame fr = geo.frame();
                 return fr.g(0, 0) / fr.volume_density;
               }};
  const double exact = 4 * kPi * kPi * (1 + a * a / 2);
  CHECK(integrate_on(spec, torus_grid(2, 8), f) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("Whitney sphere area converges under refinement") {
  const auto spec = ImmersionSpec::whitney_sphere(2, 1.0);
  const auto r = integrate(spec, default_grids(spec), area_field());
  CHECK(std::abs(r.value - r.coarse) <= 1e-6 * std::abs(r.value));
  const auto rough = integrate(spec, grid_pair(spec, 24), area_field());
  CHECK(std::abs(r.extrapolated - rough.extrapolated) <= 1e-8 * r.extrapolated);
}

TEST_CASE("error estimates") {
  // sphere: the estimate covers the actual error of the extrapolated Willmore value
  const auto ws = ImmersionSpec::whitney_sphere(2, 1.0);
  const auto w = willmore_energy(ws, grid_pair(ws, 32));
  CHECK(std::abs(w.extrapolated - 8 * kPi) <= w.err_est);
  // torus: the estimate shrinks under refinement
  const auto g = ImmersionSpec::graph_torus(2, "0.3*sin(x1 + 2*x2) + 0.2*cos(x2)");
  const auto coarse = integrate(g, grid_pair(g, 6), area_field());
  const auto fine = integrate(g, grid_pair(g, 12), area_field());
  CHECK(fine.err_est < coarse.err_est);
}

TEST_CASE("Willmore energy of Whitney spheres") {
  for (double radius : {1.0, 2.0}) {
    const auto spec = ImmersionSpec::whitney_sphere(2, radius);
    const auto r = willmore_energy(spec, default_grids(spec));
    CHECK(std::abs(r.extrapolated - 8 * kPi) <= 1e-3 * 8 * kPi);
  }
  const auto spec = ImmersionSpec::whitney_sphere(2, 1.0);
  CHECK_THROWS_AS(willmore_energy(ImmersionSpec::whitney_sphere(3, 1.0), grid_pair(spec, 8)), std::invalid_argument);
}

TEST_CASE("Willmore energy is translation invariant") {
  const auto a = ImmersionSpec::whitney_sphere(2, 1.0);
  const auto b = ImmersionSpec::whitney_sphere(2, 1.0, {0.3, -0.7, 1.1, 0.2});
  const double wa = willmore_energy(a, grid_pair(a, 24)).extrapolated;
  const double wb = willmore_energy(b, grid_pair(b, 24)).extrapolated;
  CHECK(std::abs(wa - wb) <= 1e-10);
}

TEST_CASE("Willmore energy of the product torus") {
  const auto spec = ImmersionSpec::product_torus({1.0, 1.0});
  CHECK(std::abs(willmore_energy(spec, grid_pair(spec, 16)).extrapolated - 2 * kPi * kPi) <= 1e-6);
}

TEST_CASE("Simons functionals vanish on the equality class") {
  const std::vector<ImmersionSpec> specs = {ImmersionSpec::whitney_sphere(2, 1.0), ImmersionSpec::whitney_sphere(3, 1.0),
                                            ImmersionSpec::product_torus({1.0, 1.0}), ImmersionSpec::graph_torus(2, "0"),
                                            ImmersionSpec::graph_torus(3, "0")};
  for (const auto& spec : specs) {
    const auto r = simons_functional(spec, grid_pair(spec, 8), spec.c());
    CHECK(std::abs(r.extrapolated) <= 1e-6);
  }
}

TEST_CASE("energy report") {
  const auto ws = ImmersionSpec::whitney_sphere(2, 1.0);
  const auto rs = energy_report(ws, grid_pair(ws, 16));
  REQUIRE(find(rs, "T2"));
  CHECK(std::abs(find(rs, "T2")->extrapolated) <= 1e-10);
  CHECK(std::abs(find(rs, "htilde2")->extrapolated) <= 1e-10);

  const auto plane = ImmersionSpec::graph_torus(2, "0");
  for (const auto& r : energy_report(plane, grid_pair(plane, 8))) CHECK(r.extrapolated == 0.0);

  std::mt19937_64 rng(6);
  const auto g = ImmersionSpec::graph_torus(2, random_potential(2, rng));
  const auto gr = energy_report(g, grid_pair(g, 24));
  CHECK(std::abs(find(gr, "divdivT")->extrapolated) <= 1e-6);
  CHECK(find(gr, "h2")->extrapolated > 0.0);
}

TEST_CASE("non-finite integrands are rejected") {
  const auto spec = ImmersionSpec::graph_torus(2, "0");
  PointField bad{"nan", 2, [](const LocalGeometry&) { return std::nan(""); }};
  CHECK_THROWS_AS(integrate_on(spec, torus_grid(2, 4), bad), std::domain_error);
  CHECK_THROWS_AS(field_by_name("volume", 0), std::invalid_argument);
}

TEST_CASE("results do not depend on the thread count") {
  std::mt19937_64 rng(7);
  const auto g = ImmersionSpec::graph_torus(2, random_potential(2, rng));
  set_thread_count(1);
  const double one = integrate_on(g, torus_grid(2, 32), willmore_field());
  set_thread_count(4);
  const double four = integrate_on(g, torus_grid(2, 32), willmore_field());
  set_thread_count(0);
  CHECK(one == four);
}

TEST_CASE("pairwise summation") {
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(pairwise_sum({}) == 0.0);
}
