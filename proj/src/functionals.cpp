#include "lagrome/functionals.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <nlohmann/json.hpp>

#include "lagrome/maslov.hpp"
#include "lagrome/parallel.hpp"

namespace lagrome {

namespace {

constexpr double kPi = std::numbers::pi;

struct GLRule {
  std::vector<double> x, w;
};

GLRule gauss_legendre(int m, double a, double b) {
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> t(
      gsl_integration_glfixed_table_alloc(m), &gsl_integration_glfixed_table_free);
  if (!t) throw std::runtime_error("gauss_legendre: table allocation failed");
  GLRule r;
  r.x.resize(m);
  r.w.resize(m);
  for (int i = 0; i < m; ++i) gsl_integration_glfixed_point(a, b, i, &r.x[i], &r.w[i], t.get());
  return r;
}

double sqrt_det(const Tensor<double>& g) {
  const int n = g.dim();
  double d;
  if (n == 2)
    d = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  else
    d = g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0)) +
        g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
  return std::sqrt(d);
}

}  // namespace

std::string QuadratureGrid::label() const {
  std::string s;
  for (std::size_t i = 0; i < resolution.size(); ++i) s += (i ? "x" : "") + std::to_string(resolution[i]);
  if (domain == ChartDomain::sphere) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "@delta=%g", delta);
    s += buf;
  }
  return s;
}

QuadratureGrid torus_grid(int n, int N) {
  if (n < 1 || n > 3 || N < 1) throw std::invalid_argument("torus_grid: bad size");
  QuadratureGrid g;
  g.domain = ChartDomain::torus;
  g.n = n;
  g.resolution.assign(n, N);
  const double h = 2.0 * kPi / N;
  const double w = std::pow(h, n);
  std::size_t total = 1;
  for (int k = 0; k < n; ++k) total *= N;
  for (std::size_t q = 0; q < total; ++q) {
    ChartPoint p;
    std::size_t r = q;
    p.coords.resize(n);
    for (int k = n - 1; k >= 0; --k) {
      p.coords[k] = h * static_cast<double>(r % N);
      r /= N;
    }
    g.nodes.push_back(std::move(p));
    g.weights.push_back(w);
  }
  return g;
}

QuadratureGrid sphere_grid(int n, int n_polar, int n_azimuth, double delta) {
  if (n < 2 || n > 3 || n_polar < 2 || n_azimuth < 2) throw std::invalid_argument("sphere_grid: bad size");
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("sphere_grid: delta must be in (0, 0.5)");
  QuadratureGrid g;
  g.domain = ChartDomain::sphere;
  g.n = n;
  g.delta = delta;
  g.resolution.assign(n - 1, n_polar);
  g.resolution.push_back(n_azimuth);
  const GLRule gl = gauss_legendre(n_polar, delta, kPi - delta);
  const double ha = 2.0 * kPi / n_azimuth;
  if (n == 2) {
    for (int i = 0; i < n_polar; ++i)
      for (int a = 0; a < n_azimuth; ++a) {
        g.nodes.push_back(ChartPoint{0, {gl.x[i], ha * a}});
        g.weights.push_back(gl.w[i] * ha);
      }
  } else {
    for (int i = 0; i < n_polar; ++i)
      for (int j = 0; j < n_polar; ++j)
        for (int a = 0; a < n_azimuth; ++a) {
          g.nodes.push_back(ChartPoint{0, {gl.x[i], gl.x[j], ha * a}});
          g.weights.push_back(gl.w[i] * gl.w[j] * ha);
        }
  }
  return g;
}

GridPair grid_pair(const ImmersionSpec& spec, int coarse_N) {
  const int n = spec.n();
  if (spec.domain() == ChartDomain::torus) return {torus_grid(n, coarse_N), torus_grid(n, 2 * coarse_N)};
  return {sphere_grid(n, coarse_N, 2 * coarse_N, 1e-3), sphere_grid(n, 2 * coarse_N, 4 * coarse_N, 5e-4)};
}

GridPair default_grids(const ImmersionSpec& spec) {
  const int n = spec.n();
  if (spec.domain() == ChartDomain::torus) return grid_pair(spec, n == 2 ? 64 : 32);
  return grid_pair(spec, n == 2 ? 96 : 16);
}

std::string FunctionalReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["value"] = value;
  j["coarse"] = coarse;
  j["grids"] = grids;
  j["extrapolated"] = extrapolated;
  j["err_est"] = err_est;
  return j.dump();
}

double integrate_on(const ImmersionSpec& spec, const QuadratureGrid& grid, const PointField& field) {
  if (grid.n != spec.n() || grid.domain != spec.domain())
    throw std::invalid_argument("quadrature grid does not match the immersion chart domain");
  std::vector<double> terms(grid.nodes.size());
  parallel_for(grid.nodes.size(), [&](std::size_t q) {
    const LocalGeometry geo(spec, grid.nodes[q], field.order);
    const double v = field.eval(geo);
    if (!std::isfinite(v)) throw std::domain_error("non-finite " + field.name + " value at a quadrature node");
    terms[q] = grid.weights[q] * v * sqrt_det(values_of(geo.g()));
  });
  return pairwise_sum(terms);
}

FunctionalReport integrate(const ImmersionSpec& spec, const GridPair& grids, const PointField& field) {
  FunctionalReport r;
  r.name = field.name;
  r.coarse = integrate_on(spec, grids.coarse, field);
  r.value = integrate_on(spec, grids.fine, field);
  r.grids = {grids.coarse.label(), grids.fine.label()};
  if (grids.fine.domain == ChartDomain::sphere && grids.coarse.delta != grids.fine.delta) {
    const double q = std::pow(grids.coarse.delta / grids.fine.delta, 2);
    r.extrapolated = r.value + (r.value - r.coarse) / (q - 1.0);
  } else {
    r.extrapolated = r.value;
  }
  r.err_est = std::max(std::abs(r.extrapolated - r.value), std::abs(r.value - r.coarse));
  return r;
}

PointField area_field() {
  return {"area", 2, [](const LocalGeometry&) { return 1.0; }};
}

PointField willmore_field() {
  return {"willmore", 2, [](const LocalGeometry& geo) {
            return norm2(values_of(geo.H()), values_of(geo.ginv()));
          }};
}

PointField simons_field(int c) {
  return {"simons", 2, [c](const LocalGeometry& geo) {
            const PointFrame f = geo.frame();
            const double ht2 = norm2(traceless_h(f), f.ginv);
            return ht2 * (ht2 - gap_rhs(f.n, c, norm2(f.H, f.ginv)));
          }};
}

PointField htilde2_field() {
  return {"htilde2", 2, [](const LocalGeometry& geo) {
            const PointFrame f = geo.frame();
            return norm2(traceless_h(f), f.ginv);
          }};
}

PointField h2_field() {
  return {"h2", 2, [](const LocalGeometry& geo) { return norm2(values_of(geo.h()), values_of(geo.ginv())); }};
}

PointField T2_field() {
  return {"T2", 3, [](const LocalGeometry& geo) {
            const PointFrame f = geo.frame();
            return norm2(maslov_T(f, geo.derived()), f.ginv);
          }};
}

PointField divT2_field() {
  return {"divT2", 4, [](const LocalGeometry& geo) {
            const PointFrame f = geo.frame();
            return norm2(div_T(f, geo.derived()).a, f.ginv);
          }};
}

PointField divdivT_field() {
  return {"divdivT", 5, [](const LocalGeometry& geo) { return div_div_T(geo); }};
}

PointField field_by_name(const std::string& name, int c) {
  if (name == "area") return area_field();
  if (name == "willmore") return willmore_field();
  if (name == "simons") return simons_field(c);
  if (name == "htilde2") return htilde2_field();
  if (name == "h2") return h2_field();
  if (name == "T2") return T2_field();
  if (name == "divT2") return divT2_field();
  if (name == "divdivT") return divdivT_field();
  throw std::invalid_argument("unknown functional '" + name + "'");
}

FunctionalReport willmore_energy(const ImmersionSpec& spec, const GridPair& grids) {
  if (spec.n() != 2 || spec.c() != 0) throw std::invalid_argument("willmore_energy needs n = 2, c = 0");
  return integrate(spec, grids, willmore_field());
}

FunctionalReport simons_functional(const ImmersionSpec& spec, const GridPair& grids, int c) {
  return integrate(spec, grids, simons_field(c));
}

std::vector<FunctionalReport> energy_report(const ImmersionSpec& spec, const GridPair& grids) {
  std::vector<FunctionalReport> out;
  for (const PointField& f : {htilde2_field(), h2_field(), T2_field(), divT2_field(), divdivT_field()})
    out.push_back(integrate(spec, grids, f));
  return out;
}

}  // namespace lagrome
