#pragma once

// Quadrature over chart domains and the integral functionals.
//
// Weights are flat chart measures.  The induced volume sqrt(det g) of the
// chart metric, which already contains the hyperspherical Jacobian, is
// applied at integration time.
//
// Every report carries a coarse and a fine grid.  Torus trapezoid sums are
// spectrally accurate, so the extrapolated value is the fine value and the
// error estimate is the two-grid difference.  Sphere grids clip polar bands
// of width delta; the missing measure is O(delta^2), and the two sphere
// levels are combined by Richardson extrapolation in delta^2.

#include <functional>
#include <string>
#include <vector>

#include "lagrome/geometry.hpp"
#include "lagrome/immersion.hpp"

namespace lagrome {

struct QuadratureGrid {
  ChartDomain domain = ChartDomain::torus;
  int n = 2;
  std::vector<int> resolution;  // nodes per chart axis
  double delta = 0.0;           // polar clipping (sphere)
  std::vector<ChartPoint> nodes;
  std::vector<double> weights;

  std::string label() const;
};

/// Uniform N^n trapezoid grid on [0, 2 pi)^n.
QuadratureGrid torus_grid(int n, int N);
/// Gauss-Legendre on (delta, pi - delta) for each polar angle times a uniform
/// azimuth grid, sphere chart 0.
QuadratureGrid sphere_grid(int n, int n_polar, int n_azimuth, double delta);

struct GridPair {
  QuadratureGrid coarse, fine;
};
/// Default pairs: torus 64^n / 128^n; sphere 96x192 (delta 1e-3) / 192x384 (5e-4) for n = 2.
/// For n = 3 the sphere pair is 16x16x32 / 32x32x64 with the same deltas.
GridPair default_grids(const ImmersionSpec& spec);
/// Pair with explicit sizes: `N` torus nodes per axis for the coarse level
/// (the fine level doubles it) or sphere polar nodes (azimuth is twice that).
GridPair grid_pair(const ImmersionSpec& spec, int coarse_N);

struct FunctionalReport {
  std::string name;
  double value = 0.0;  // fine-grid value
  double coarse = 0.0;
  std::vector<std::string> grids;
  double extrapolated = 0.0;
  double err_est = 0.0;

  std::string to_json() const;
};

/// Scalar field evaluated from point geometry at `order`.
struct PointField {
  std::string name;
  int order = 2;
  std::function<double(const LocalGeometry&)> eval;
};

/// Sum of w_q field(p_q) sqrt(det g(p_q)) on one grid.
double integrate_on(const ImmersionSpec& spec, const QuadratureGrid& grid, const PointField& field);
FunctionalReport integrate(const ImmersionSpec& spec, const GridPair& grids, const PointField& field);

// Named fields.
PointField area_field();
PointField willmore_field();                  // |H|^2
PointField simons_field(int c);               // |htilde|^2 (|htilde|^2 - gap rhs)
PointField htilde2_field();
PointField h2_field();
PointField T2_field();                        // order 4
PointField divT2_field();                     // order 4
PointField divdivT_field();                   // order 5

FunctionalReport willmore_energy(const ImmersionSpec& spec, const GridPair& grids);
FunctionalReport simons_functional(const ImmersionSpec& spec, const GridPair& grids, int c);
/// integral of |htilde|^2, |h|^2, |T|^2, |div T|^2 and div div T.
std::vector<FunctionalReport> energy_report(const ImmersionSpec& spec, const GridPair& grids);

/// Field lookup by name: area, willmore, simons, htilde2, h2, T2, divT2, divdivT.
PointField field_by_name(const std::string& name, int c);

}  // namespace lagrome
