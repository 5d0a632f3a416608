#pragma once

// Pointwise geometry of a Lagrangian immersion in coordinate frames.
//
// Every field is carried as a jet about the evaluation point, so covariant
// derivatives are exact: differentiating a jet lowers its order by one and
// all Christoffel corrections are applied at the jet level.
//
// Index conventions (all coordinate indices, 0-based):
//   g_ij          induced metric, ginv = g^{ij}
//   Gamma(k,i,j)  Gamma^k_ij of g
//   h(i,j,k)      <h(d_i, d_j), J F_k>, totally symmetric
//   H(k)          <H, J F_k> with H = (1/n) trace_g h
//   Rup(m,l,i,j)  R^m_{lij}:  R(d_i, d_j) d_l = R^m_{lij} d_m
//   R(i,j,k,l)    <R(d_i, d_j) d_l, d_k> = g_km R^m_{lij}
//   Ric(j,l)      g^{ik} R_ijkl (positive on round spheres)
//   covariant derivatives append the derivative index last, e.g.
//   dh(i,j,k,l) = h_{ijk,l}, ddH(i,j,k) = H_{i,jk} (j first, then k).

#include <optional>
#include <stdexcept>

#include "lagrome/immersion.hpp"
#include "lagrome/jet.hpp"
#include "lagrome/tensor.hpp"

namespace lagrome {

class DegenerateMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMaxMetricCondition = 1e12;

struct PointFrame {
  int n = 0;
  int c = 0;
  Tensor<double> g, ginv, Gamma, h, H, R, Ric;
  double K = 0.0;  // Gauss curvature, n = 2 only
  double volume_density = 0.0;  // sqrt(det g)
  std::optional<double> theta;  // Lagrangian angle (graphs)
  std::optional<Tensor<double>> theta_grad;
};

struct DerivedFrame {
  Tensor<double> dh;   // h_{ijk,l}
  Tensor<double> ddh;  // h_{ijk,lm}
  Tensor<double> dH;   // H_{i,j}
  Tensor<double> ddH;  // H_{i,jk}
};

// Jet-level tensor calculus ----------------------------------------------

/// Inverse of a symmetric n x n jet matrix (n <= 3).
Tensor<Jet> inverse_metric(const Tensor<Jet>& g);
/// Christoffel symbols Gamma^k_ij (stored (k, i, j)) of the metric jets g.
Tensor<Jet> christoffel(const Tensor<Jet>& g, const Tensor<Jet>& ginv);
/// Covariant derivative of a covariant tensor; the new index is appended last.
Tensor<Jet> covariant_derivative(const Tensor<Jet>& t, const Tensor<Jet>& Gamma);
/// R^m_{lij} (stored (m, l, i, j)) from Christoffel jets.
Tensor<Jet> riemann_up(const Tensor<Jet>& Gamma);
/// Laplace-Beltrami of a scalar jet.
Jet laplacian(const Jet& f, const Tensor<Jet>& ginv, const Tensor<Jet>& Gamma);
/// Divergence d_j V^j + Gamma^j_jk V^k of a vector field.
Jet divergence(const Tensor<Jet>& V, const Tensor<Jet>& Gamma);
/// Full contraction |t|^2 with g^{-1} on every slot.
double norm2(const Tensor<double>& t, const Tensor<double>& ginv);

/// Jet-level geometry of an immersion about one chart point.
class LocalGeometry {
 public:
  /// `order` is the jet order of the immersion map (2..5); fields are then
  /// known to order-2 (h, H), so up to order-2 covariant derivatives of h
  /// are available.
  LocalGeometry(const ImmersionSpec& spec, const ChartPoint& p, int order);
  /// Same pipeline from component jets of an immersion into `space`.
  LocalGeometry(const AmbientSpace& space, std::span<const Jet> F);

  int n() const { return n_; }
  int c() const { return c_; }
  int order() const { return order_; }

  const Tensor<Jet>& g() const { return g_; }
  const Tensor<Jet>& ginv() const { return ginv_; }
  const Tensor<Jet>& Gamma() const { return Gamma_; }
  const Tensor<Jet>& h() const { return h_; }
  const Tensor<Jet>& H() const { return H_; }

  const Tensor<Jet>& Rup() const;
  const Tensor<Jet>& R() const;
  const Tensor<Jet>& Ric() const;
  /// Normal-connection coefficients nu^l_ik from ambient inner products,
  /// identified with tangent indices through J.
  const Tensor<Jet>& normal_connection() const { return nu_; }
  /// Curvature of the normal connection, lowered like R.
  Tensor<Jet> normal_curvature() const;

  const Tensor<Jet>& dh() const;
  const Tensor<Jet>& ddh() const;
  const Tensor<Jet>& dH() const;
  const Tensor<Jet>& ddH() const;
  const Tensor<Jet>& dddH() const;

  PointFrame frame() const;
  DerivedFrame derived() const;

 private:
  void build(const AmbientSpace& space, std::span<const Jet> F);
  void need(int derivatives, const char* what) const;

  int n_ = 0, c_ = 0, order_ = 0;
  Tensor<Jet> g_, ginv_, Gamma_, h_, H_, nu_;
  mutable Tensor<Jet> Rup_, R_, Ric_, dh_, ddh_, dH_, ddH_, dddH_;
};

PointFrame point_frame(const ImmersionSpec& spec, const ChartPoint& p, int order);

// Structural residuals ---------------------------------------------------

/// max |R_ijkl - c(g_ik g_jl - g_il g_jk) - g^{mp}(h_ikm h_jlp - h_ilm h_jkp)|.
double gauss_consistency(const PointFrame& frame, int c);
/// Same right-hand side against the curvature of the normal connection.
double normal_curvature_consistency(const LocalGeometry& geo);

struct CodazziResiduals {
  double codazzi = 0.0;     // total symmetry of h_{ijk,l}
  double h_symmetry = 0.0;  // H_{i,j} - H_{j,i}
};
CodazziResiduals codazzi_and_H_symmetry(const PointFrame& frame, const DerivedFrame& derived);

/// h_{ijm,lp} - h_{ijm,pl} against the curvature terms.
double ricci_identity_residual(const LocalGeometry& geo);

/// Maximum deviation of h_ijk from total symmetry.
double h_symmetry_residual(const PointFrame& frame);

// Lagrangian graphs ------------------------------------------------------

/// Geometry of a gradient graph F = (x, grad phi) computed from the Hessian
/// of phi alone: g = I + (D^2 phi)^2 and the Lagrangian angle
/// theta = arg det(I + i D^2 phi).
class AngleGeometry {
 public:
  /// phi: jet of the potential of order >= 3 (6 for fourth derivatives of theta).
  /// Without `resolve_branch` the constant term of theta is the principal
  /// argument; derivatives are unaffected.
  explicit AngleGeometry(const Jet& phi, bool resolve_branch = true);

  int n() const { return n_; }
  const Tensor<Jet>& hessian() const { return P_; }
  const Tensor<Jet>& g() const { return g_; }
  const Tensor<Jet>& ginv() const { return ginv_; }
  const Tensor<Jet>& Gamma() const { return Gamma_; }
  const Jet& theta() const { return theta_; }
  const Jet& det_re() const { return det_re_; }
  const Jet& det_im() const { return det_im_; }

  /// -((n-1)/(n+2)) Delta^2 theta - (n/(n+2)) div(Ric(grad theta)).  Needs phi of order 6.
  double div_div_T() const;
  /// Delta^2 theta and div(Ric(grad theta)) separately.
  std::pair<double, double> bilaplacian_terms() const;

 private:
  int n_ = 0;
  Tensor<Jet> P_, g_, ginv_, Gamma_;
  Jet det_re_, det_im_, theta_;
};

/// Lagrangian angle jet of a graph at p, to the requested order (<= 4).
Jet lagrangian_angle(const ImmersionSpec& spec, const ChartPoint& p, int order);

/// Continuous branch of arg det(I + i P) along s -> s P, s in [0, 1].
/// Throws std::domain_error for non-finite P or |P| > 1e6.
double angle_branch(const Tensor<double>& P);

/// |det g - det(I + (D^2 phi)^2)|, with det g from the immersion tangents.
double metric_det_identity(const ImmersionSpec& spec, const ChartPoint& p);
/// max_i |H_i - theta_i / n|, H from the immersion, theta from the Hessian.
double mean_curvature_vs_angle(const ImmersionSpec& spec, const ChartPoint& p);
/// max_k |theta_k - g^{ij} phi_ijk|.
double angle_gradient_identity(const ImmersionSpec& spec, const ChartPoint& p);

}  // namespace lagrome
