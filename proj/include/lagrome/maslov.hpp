#pragma once

// Trace-free cubic form, the T tensor and its divergences, pointwise
// inequality predicates, and a matrix inequality for symmetric tuples.
//
// Index conventions follow geometry.hpp.  H_{i,j} = dH(i, j) is the covariant
// derivative of the covector H_i = <H, J F_i>, so div JH = g^{ij} H_{i,j}.
//
// div_div_T is reported in angle normalization: for a graph with
// Lagrangian angle theta (n H_i = theta_i) it equals
//   -((n-1)/(n+2)) Delta^2 theta - (n/(n+2)) div(Ric grad theta),
// which is -n times the plain divergence g^{ij} (div T)_{i,j}.  The factor
// makes the leading part -((n-1)/(n+2)) Delta^3 phi.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "lagrome/geometry.hpp"

namespace lagrome {

/// h_ijk - n/(n+2) (H_k g_ij + H_i g_jk + H_j g_ik).
Tensor<double> traceless_h(const PointFrame& f);

/// (1/(n+2)) (n H_{i,j} - (g^{kl} H_{k,l}) g_ij).
Tensor<double> maslov_T(const PointFrame& f, const DerivedFrame& d);
/// (1/n) g^{kl} htilde_{ijk,l}, from derivatives of h.
Tensor<double> maslov_T_from_htilde(const PointFrame& f, const DerivedFrame& d);

struct CovectorRoutes {
  Tensor<double> a, b;
  double discrepancy = 0.0;  // max |a - b|
};
/// Route A: g^{jk} T_{ij,k}.  Route B: ((n-1)/(n+2)) g^{jk} H_{i,jk} + (1/(n+2)) Ric_i^k H_k.
CovectorRoutes div_T(const PointFrame& f, const DerivedFrame& d);

/// Route A of div_div_T from third covariant derivatives of H (order >= 5 geometry).
double div_div_T(const LocalGeometry& geo);

struct ConformalInequality {
  double lhs = 0.0;    // |grad JH|^2
  double rhs = 0.0;    // (1/n) (div JH)^2
  double slack = 0.0;  // lhs - rhs
  double T_identity = 0.0;  // | |T|^2 - (n/(n+2))^2 slack |
};
ConformalInequality conformal_inequality(const PointFrame& f, const DerivedFrame& d);

struct GapResult {
  bool holds = false;
  double margin = 0.0;
  double htilde2 = 0.0;
  double rhs = 0.0;
};
/// n >= 3: |htilde|^2 <= 2c(n+1)/(n+3) + 2n^2|H|^2/((n+3)(n+2)); n = 2: |htilde|^2 <= 2c + |H|^2.
GapResult gap_predicate(const PointFrame& f, int c);
/// Right-hand side of the gap condition for given |H|^2.
double gap_rhs(int n, int c, double H2);

/// |htilde|^2 - (|h|^2 - 3n^2/(n+2) |H|^2).
double norm_identity_residual(const PointFrame& f);
/// htilde_{ijm,k} - htilde_{ikm,j} against its H-derivative expression, max-abs.
double htilde_codazzi_residual(const PointFrame& f, const DerivedFrame& d);
/// n = 2: |K - c - (|H|^2 - |htilde|^2)/2|.
double surface_curvature_identity(const PointFrame& f);

struct LiLiResult {
  double lhs = 0.0;
  double rhs = 0.0;
};
/// Sum over ordered pairs of |[B_m, B_k]|^2 + S_mk^2 against (3/2) S^2.
LiLiResult lili_check(const std::vector<Eigen::MatrixXd>& B);

struct LiLiSweep {
  long trials = 0;
  double max_violation = 0.0;  // max of (lhs - rhs) / (1 + rhs), floored at 0
  double max_ratio = 0.0;      // max of lhs / rhs
  long violations = 0;         // trials with violation above 1e-12
};
/// Random tuples, m and n uniform in [2, 4], entries uniform in [-1, 1].
LiLiSweep lili_random(long trials, std::uint64_t seed);

/// Everything above at one point.
struct MaslovFrame {
  int n = 0;
  Tensor<double> htilde, T, divT;
  double h2 = 0.0, htilde2 = 0.0, H2 = 0.0, T2 = 0.0, divT2 = 0.0;
  double gradJH2 = 0.0, divJH = 0.0;
  std::optional<double> divdivT;        // route A, order-5 geometry
  std::optional<double> divdivT_angle;  // route B, graphs only
  double norm_identity = 0.0;           // residuals
  double T_routes = 0.0;
  double divT_routes = 0.0;
  double htilde_codazzi = 0.0;
};

/// order 4 gives everything but div_div_T; order 5 adds route A (and route B for graphs).
MaslovFrame maslov_frame(const LocalGeometry& geo);
MaslovFrame maslov_frame(const ImmersionSpec& spec, const ChartPoint& p, int order = 5);

}  // namespace lagrome
