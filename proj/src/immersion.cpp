#include "lagrome/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lagrome {

namespace {

template <class S>
std::vector<S> hyperspherical(std::span<const S> t, int chart_id) {
  const int n = static_cast<int>(t.size());
  std::vector<S> x;
  x.reserve(n + 1);
  S prod = 0.0 * t[0] + 1.0;
  for (int k = 0; k < n; ++k) {
    using std::cos;
    using std::sin;
    x.push_back(prod * cos(t[k]));
    prod = prod * sin(t[k]);
  }
  x.push_back(prod);
  if (chart_id == 1) std::swap(x[0], x[n]);
  return x;
}

void require_finite(const ChartPoint& p) {
  for (double v : p.coords)
    if (!std::isfinite(v)) throw InvalidChartPoint("chart coordinates must be finite");
}

}  // namespace

ImmersionSpec ImmersionSpec::graph_torus(int n, const std::string& potential) {
  if (n < 2 || n > 3) throw std::invalid_argument("graph_torus supports n = 2 or 3");
  ImmersionSpec s;
  s.kind_ = ImmersionKind::graph_torus;
  s.n_ = n;
  s.potential_ = Expression::parse(potential, n);
  return s;
}

ImmersionSpec ImmersionSpec::whitney_sphere(int n, double radius, std::vector<double> translation) {
  if (n < 2 || n > 3) throw std::invalid_argument("whitney_sphere supports n = 2 or 3");
  if (!(radius > 0.0)) throw std::invalid_argument("whitney_sphere radius must be positive");
  if (translation.empty()) translation.assign(2 * n, 0.0);
  if (static_cast<int>(translation.size()) != 2 * n)
    throw std::invalid_argument("whitney_sphere translation must have 2n components");
  ImmersionSpec s;
  s.kind_ = ImmersionKind::whitney_sphere;
  s.n_ = n;
  s.radius_ = radius;
  s.translation_ = std::move(translation);
  return s;
}

ImmersionSpec ImmersionSpec::product_torus(std::vector<double> radii) {
  if (radii.size() < 2 || radii.size() > 3) throw std::invalid_argument("product_torus supports n = 2 or 3");
  for (double r : radii)
    if (!(r > 0.0)) throw std::invalid_argument("product_torus radii must be positive");
  ImmersionSpec s;
  s.kind_ = ImmersionKind::product_torus;
  s.n_ = static_cast<int>(radii.size());
  s.radii_ = std::move(radii);
  return s;
}

ImmersionSpec ImmersionSpec::whitney_cp(int n, double theta) {
  if (n < 2 || n > 3) throw std::invalid_argument("whitney_cp supports n = 2 or 3");
  if (!(theta > 0.0)) throw std::invalid_argument("whitney_cp theta must be positive");
  ImmersionSpec s;
  s.kind_ = ImmersionKind::whitney_cp;
  s.n_ = n;
  s.theta_ = theta;
  return s;
}

ImmersionSpec ImmersionSpec::custom(int n, int c, ChartDomain domain, CustomMap map, std::string name) {
  ImmersionSpec s;
  s.kind_ = ImmersionKind::custom;
  s.n_ = n;
  s.custom_c_ = c;
  s.custom_domain_ = domain;
  s.custom_map_ = std::move(map);
  s.custom_name_ = std::move(name);
  return s;
}

ChartDomain ImmersionSpec::domain() const {
  switch (kind_) {
    case ImmersionKind::graph_torus:
    case ImmersionKind::product_torus: return ChartDomain::torus;
    case ImmersionKind::whitney_sphere:
    case ImmersionKind::whitney_cp: return ChartDomain::sphere;
    case ImmersionKind::custom: return custom_domain_;
  }
  return ChartDomain::torus;
}

std::string ImmersionSpec::name() const {
  switch (kind_) {
    case ImmersionKind::graph_torus: return "graph_torus";
    case ImmersionKind::whitney_sphere: return "whitney_sphere";
    case ImmersionKind::product_torus: return "product_torus";
    case ImmersionKind::whitney_cp: return "whitney_cp";
    case ImmersionKind::custom: return custom_name_;
  }
  return "?";
}

void ImmersionSpec::validate(const ChartPoint& p) const {
  if (static_cast<int>(p.coords.size()) != n_)
    throw InvalidChartPoint("chart point must have " + std::to_string(n_) + " coordinates");
  require_finite(p);
  if (domain() == ChartDomain::sphere) {
    if (p.chart_id != 0 && p.chart_id != 1) throw InvalidChartPoint("sphere chart id must be 0 or 1");
    for (int k = 0; k + 1 < n_; ++k) {
      const double t = p.coords[k];
      if (!(t > 0.0 && t < std::numbers::pi) || std::sin(t) < 1e-12)
        throw InvalidChartPoint("pole coordinates: polar angle " + std::to_string(t) + " outside (0, pi)");
    }
  } else if (p.chart_id != 0) {
    throw InvalidChartPoint("torus immersions have a single chart (id 0)");
  }
}

std::vector<Jet> ImmersionSpec::evaluate(const ChartPoint& p, int order) const {
  validate(p);
  if (order < 0 || order > kMaxJetOrder) throw std::invalid_argument("evaluation order must be 0..6");
  const int n = n_;
  std::vector<Jet> t;
  for (int i = 0; i < n; ++i) t.push_back(Jet::variable(i, p.coords[i], n, order));

  switch (kind_) {
    case ImmersionKind::graph_torus: {
      if (order + 1 > kMaxJetOrder) throw std::invalid_argument("graph evaluation order must be <= 5");
      const Jet phi = potential_jet(p, order + 1);
      std::vector<Jet> F;
      for (int k = 0; k < n; ++k) {
        F.push_back(t[k]);
        F.push_back(phi.derivative(k));
      }
      return F;
    }
    case ImmersionKind::product_torus: {
      std::vector<Jet> F;
      for (int k = 0; k < n; ++k) {
        F.push_back(radii_[k] * cos(t[k]));
        F.push_back(radii_[k] * sin(t[k]));
      }
      return F;
    }
    case ImmersionKind::whitney_sphere:
    case ImmersionKind::whitney_cp: {
      const std::vector<Jet> x = hyperspherical<Jet>(t, p.chart_id);
      return sphere_map<Jet>(x);
    }
    case ImmersionKind::custom: return custom_map_(t);
  }
  throw std::logic_error("unknown immersion kind");
}

std::vector<double> ImmersionSpec::position(const ChartPoint& p) const {
  std::vector<double> out;
  for (const Jet& j : evaluate(p, 0)) out.push_back(j.value());
  return out;
}

Jet ImmersionSpec::potential_jet(const ChartPoint& p, int order) const {
  if (kind_ != ImmersionKind::graph_torus) throw std::logic_error("potential_jet requires a graph immersion");
  validate(p);
  std::vector<Jet> t;
  for (int i = 0; i < n_; ++i) t.push_back(Jet::variable(i, p.coords[i], n_, order));
  return potential_.eval<Jet>(t);
}

std::vector<double> ImmersionSpec::sphere_point(const ChartPoint& p) const {
  if (domain() != ChartDomain::sphere) throw std::logic_error("sphere_point on a torus immersion");
  validate(p);
  return hyperspherical<double>(p.coords, p.chart_id);
}

ChartPoint ImmersionSpec::sphere_chart(std::span<const double> xin, int chart_id) const {
  const int n = n_;
  if (static_cast<int>(xin.size()) != n + 1) throw std::invalid_argument("sphere point must have n+1 components");
  std::vector<double> x(xin.begin(), xin.end());
  if (chart_id == 1) std::swap(x[0], x[n]);
  ChartPoint p;
  p.chart_id = chart_id;
  p.coords.resize(n);
  double tail = 0.0;
  for (double v : x) tail += v * v;
  tail = std::sqrt(tail);
  for (int k = 0; k + 1 < n; ++k) {
    p.coords[k] = std::acos(std::clamp(x[k] / tail, -1.0, 1.0));
    tail = std::sqrt(std::max(0.0, tail * tail - x[k] * x[k]));
  }
  p.coords[n - 1] = std::atan2(x[n], x[n - 1]);
  return p;
}

double lagrangian_residual(const AmbientSpace& space, std::span<const Jet> F) {
  const int d = space.real_dim();
  if (static_cast<int>(F.size()) != d) throw std::invalid_argument("component count does not match ambient");
  const int n = F[0].dim();
  std::vector<double> pos(d);
  for (int a = 0; a < d; ++a) pos[a] = F[a].value();
  std::vector<std::vector<double>> tangent(n, std::vector<double>(d));
  for (int i = 0; i < n; ++i) {
    MultiIndex e{};
    e[i] = 1;
    for (int a = 0; a < d; ++a) tangent[i][a] = F[a].partial(e);
  }
  double worst = 0.0;
  std::vector<double> Jt(d);
  for (int i = 0; i < n; ++i) {
    apply_J<double>(tangent[i], Jt);
    for (int j = i + 1; j < n; ++j)
      worst = std::max(worst, std::abs(ambient_inner<double>(space, pos, Jt, tangent[j])));
  }
  return worst;
}

double lagrangian_residual(const ImmersionSpec& spec, const ChartPoint& p) {
  const std::vector<Jet> F = spec.evaluate(p, 1);
  return lagrangian_residual(spec.ambient(), F);
}

}  // namespace lagrome
