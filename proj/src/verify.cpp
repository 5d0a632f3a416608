#include "lagrome/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <nlohmann/json.hpp>

#include "lagrome/geometry.hpp"
#include "lagrome/maslov.hpp"

namespace lagrome {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr int kCatalogPoints = 4;
constexpr int kGraphCount = 10;
constexpr int kPointsPerGraph = 10;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

class Rows {
 public:
  explicit Rows(std::string suite) : suite_(std::move(suite)) {}
  void add(const std::string& check, const std::string& subject, const std::string& ref, double residual, double tol) {
    CheckRow r;
    r.name = suite_ + "/" + check + "/" + subject;
    r.paper_ref = ref;
    r.residual = residual;
    r.tol = tol;
    r.pass = std::isfinite(residual) && residual <= tol;
    rows_.push_back(std::move(r));
  }
  std::vector<CheckRow> take() { return std::move(rows_); }

 private:
  std::string suite_;
  std::vector<CheckRow> rows_;
};

struct Subject {
  std::string label;
  ImmersionSpec spec;
  std::vector<ChartPoint> points;
};

std::vector<Subject> subjects(std::uint64_t seed, bool catalog_members, bool graphs, bool graphs_n3 = true) {
  std::mt19937_64 rng(seed);
  std::vector<Subject> out;
  if (catalog_members)
    for (auto& m : catalog(seed)) out.push_back({m.label, m.spec, sample_points(m.spec, kCatalogPoints, rng)});
  if (graphs) {
    for (int g = 0; g < kGraphCount; ++g) {
      const auto spec = ImmersionSpec::graph_torus(2, random_potential(2, rng));
      out.push_back({"random_graph_n2_" + std::to_string(g), spec, sample_points(spec, kPointsPerGraph, rng)});
    }
    if (graphs_n3)
      for (int g = 0; g < 2; ++g) {
        const auto spec = ImmersionSpec::graph_torus(3, random_potential(3, rng));
        out.push_back({"random_graph_n3_" + std::to_string(g), spec, sample_points(spec, 5, rng)});
      }
  }
  return out;
}

template <class F>
double max_over(const Subject& s, F&& f) {
  double w = 0.0;
  for (const auto& p : s.points) w = std::max(w, f(p));
  return w;
}

double max_abs(const Tensor<double>& t) {
  double w = 0.0;
  for (double v : t.data()) w = std::max(w, std::abs(v));
  return w;
}

// ---------------------------------------------------------------------------

std::vector<CheckRow> suite_ambient(std::uint64_t seed) {
  Rows rows("ambient");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int n : {2, 3})
    for (int c : {0, 1}) {
      const AmbientSpace space(c, n);
      const int d = space.real_dim();
      double jj = 0.0, inv = 0.0, hsc = 0.0, sym = 0.0, compat = 0.0, parJ = 0.0;
      for (int t = 0; t < 5; ++t) {
        std::vector<double> p(d), X(d), Y(d), JX(d), JY(d);
        for (int a = 0; a < d; ++a) {
          p[a] = U(rng);
          X[a] = U(rng);
          Y[a] = U(rng);
        }
        const AmbientPointData D = ambient_eval(space, p, 1);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            double s = 0.0;
            for (int e = 0; e < d; ++e) s += D.J(a, e) * D.J(e, b);
            jj = std::max(jj, std::abs(s + (a == b ? 1.0 : 0.0)));
          }
        apply_J<double>(X, JX);
        apply_J<double>(Y, JY);
        const double gxy = ambient_inner<double>(space, p, X, Y);
        inv = std::max(inv, std::abs(ambient_inner<double>(space, p, JX, JY) - gxy) / (1.0 + std::abs(gxy)));
        hsc = std::max(hsc, std::abs(holomorphic_sectional_curvature(space, p, X) - 4.0 * c));
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b)
            for (int e = 0; e < d; ++e) {
              sym = std::max(sym, std::abs(D.Gamma(a, b, e) - D.Gamma(a, e, b)));
              double cmp = D.dG(a, b, e);
              double nj = 0.0;
              for (int q = 0; q < d; ++q) {
                cmp -= D.G(q, b) * D.Gamma(q, e, a) + D.G(a, q) * D.Gamma(q, e, b);
                nj += D.Gamma(a, e, q) * D.J(q, b) - D.J(a, q) * D.Gamma(q, e, b);
              }
              compat = std::max(compat, std::abs(cmp));
              parJ = std::max(parJ, std::abs(nj));
            }
      }
      const std::string subj = "c=" + std::to_string(c) + ",n=" + std::to_string(n);
      rows.add("J_squared", subj, "complex structure J^2 = -1", jj, 1e-12);
      rows.add("J_invariance", subj, "Hermitian metric G(JX,JY) = G(X,Y)", inv, 1e-12);
      rows.add("holomorphic_curvature", subj, "constant holomorphic sectional curvature 4c", hsc, 1e-8);
      rows.add("christoffel_symmetry", subj, "torsion-free ambient connection", sym, 1e-12);
      rows.add("metric_compatibility", subj, "ambient connection preserves G", compat, 1e-10);
      rows.add("parallel_J", subj, "Kaehler condition: J is parallel", parJ, 1e-10);
    }
  return rows.take();
}

std::vector<CheckRow> suite_lagrangian(std::uint64_t seed) {
  Rows rows("lagrangian");
  for (const auto& s : subjects(seed, true, true)) {
    const bool graph = s.spec.kind() == ImmersionKind::graph_torus;
    rows.add("omega_restriction", s.label, "Lagrangian condition: omega vanishes on tangents",
             max_over(s, [&](const ChartPoint& p) { return lagrangian_residual(s.spec, p); }), graph ? 1e-12 : 1e-10);
  }
  return rows.take();
}

std::vector<CheckRow> suite_gauss(std::uint64_t seed) {
  Rows rows("gauss");
  for (const auto& s : subjects(seed, true, true)) {
    double gauss = 0.0, normal = 0.0, hsym = 0.0;
    for (const auto& p : s.points) {
      const LocalGeometry geo(s.spec, p, 3);
      const PointFrame f = geo.frame();
      gauss = std::max(gauss, gauss_consistency(f, s.spec.c()));
      normal = std::max(normal, normal_curvature_consistency(geo));
      hsym = std::max(hsym, h_symmetry_residual(f));
    }
    rows.add("h_total_symmetry", s.label, "total symmetry of <h(X,Y),JZ>", hsym, 1e-12);
    rows.add("gauss_equation", s.label, "Gauss equation", gauss, 1e-8);
    rows.add("normal_curvature", s.label, "Ricci equation for the normal connection", normal, 1e-8);
  }
  return rows.take();
}

std::vector<CheckRow> suite_codazzi(std::uint64_t seed) {
  Rows rows("codazzi");
  for (const auto& s : subjects(seed, true, true)) {
    double cod = 0.0, hs = 0.0, ric = 0.0;
    for (const auto& p : s.points) {
      const LocalGeometry geo(s.spec, p, 4);
      const auto r = codazzi_and_H_symmetry(geo.frame(), geo.derived());
      cod = std::max(cod, r.codazzi);
      hs = std::max(hs, r.h_symmetry);
      ric = std::max(ric, ricci_identity_residual(geo));
    }
    rows.add("codazzi", s.label, "Codazzi equation: h_{ijk,l} totally symmetric", cod, 1e-8);
    rows.add("H_symmetry", s.label, "symmetry of the derivative of the Maslov form", hs, 1e-8);
    rows.add("ricci_identity", s.label, "Ricci identity for second derivatives of h", ric, 1e-7);
  }
  return rows.take();
}

std::vector<CheckRow> suite_maslov(std::uint64_t seed) {
  Rows rows("maslov");
  for (const auto& s : subjects(seed, true, true)) {
    const bool graph = s.spec.kind() == ImmersionKind::graph_torus;
    double norm = 0.0, Tr = 0.0, dT = 0.0, cod = 0.0, slack = 0.0, Tid = 0.0, trT = 0.0, dd = 0.0, ht_tr = 0.0;
    for (const auto& p : s.points) {
      const LocalGeometry geo(s.spec, p, 5);
      const PointFrame f = geo.frame();
      const DerivedFrame d = geo.derived();
      const MaslovFrame m = maslov_frame(geo);
      norm = std::max(norm, m.norm_identity);
      Tr = std::max(Tr, m.T_routes);
      dT = std::max(dT, m.divT_routes / (1.0 + max_abs(m.divT)));
      cod = std::max(cod, m.htilde_codazzi);
      const auto ci = conformal_inequality(f, d);
      slack = std::max(slack, -ci.slack);
      Tid = std::max(Tid, ci.T_identity);
      double tr = 0.0;
      for (int i = 0; i < f.n; ++i)
        for (int j = 0; j < f.n; ++j) tr += f.ginv(i, j) * m.T(i, j);
      trT = std::max(trT, std::abs(tr));
      for (int k = 0; k < f.n; ++k) {
        double t = 0.0;
        for (int i = 0; i < f.n; ++i)
          for (int j = 0; j < f.n; ++j) t += f.ginv(i, j) * m.htilde(i, j, k);
        ht_tr = std::max(ht_tr, std::abs(t));
      }
      if (graph) {
        const double b = AngleGeometry(s.spec.potential_jet(p, 6)).div_div_T();
        dd = std::max(dd, std::abs(*m.divdivT - b) / (1.0 + std::abs(b)));
      }
    }
    rows.add("htilde_trace_free", s.label, "trace-free cubic form", ht_tr, 1e-10);
    rows.add("norm_identity", s.label, "|htilde|^2 = |h|^2 - 3n^2/(n+2)|H|^2", norm, 1e-10);
    rows.add("T_two_routes", s.label, "T from div htilde equals T from dH", Tr, 1e-8);
    rows.add("T_trace_free", s.label, "T is trace-free", trT, 1e-12);
    rows.add("divT_two_routes", s.label, "div T via divergence and via Laplacian plus Ricci", dT, 1e-6);
    rows.add("htilde_codazzi", s.label, "Codazzi-type identity for htilde", cod, 1e-8);
    rows.add("conformal_inequality", s.label, "|grad JH|^2 >= (1/n)|div JH|^2", slack, 1e-12);
    rows.add("T_norm_identity", s.label, "|T|^2 = (n/(n+2))^2 (|grad JH|^2 - (1/n)|div JH|^2)", Tid, 1e-9);
    if (graph) rows.add("divdivT_two_routes", s.label, "div div T via H derivatives and via the angle", dd, 1e-6);
  }
  return rows.take();
}

std::vector<CheckRow> suite_whitney(std::uint64_t seed) {
  Rows rows("whitney");
  std::mt19937_64 rng(seed);
  for (const auto& m : whitney_members(seed)) {
    const auto pts = sample_points(m.spec, kCatalogPoints, rng);
    double ht = 0.0, T = 0.0, dT = 0.0, dd = 0.0, slack = 0.0, gap = 0.0;
    for (const auto& p : pts) {
      const LocalGeometry geo(m.spec, p, 5);
      const MaslovFrame mf = maslov_frame(geo);
      ht = std::max(ht, max_abs(mf.htilde));
      T = std::max(T, max_abs(mf.T));
      dT = std::max(dT, max_abs(mf.divT));
      dd = std::max(dd, std::abs(*mf.divdivT));
      const PointFrame f = geo.frame();
      slack = std::max(slack, std::abs(conformal_inequality(f, geo.derived()).slack));
      gap = std::max(gap, -gap_predicate(f, m.spec.c()).margin);
    }
    rows.add("htilde_zero", m.label, "Whitney spheres have vanishing htilde", ht, 1e-8);
    rows.add("T_zero", m.label, "conformal Maslov form (T = 0)", T, 1e-8);
    rows.add("divT_zero", m.label, "div T = 0 when T = 0", dT, 1e-7);
    rows.add("divdivT_zero", m.label, "div div T = 0 when T = 0", dd, 1e-6);
    rows.add("conformal_equality", m.label, "equality in |grad JH|^2 >= (1/n)|div JH|^2", slack, 1e-8);
    rows.add("gap_condition", m.label, "pinching condition holds on the equality class", gap, 1e-10);
  }
  return rows.take();
}

std::vector<CheckRow> suite_angle(std::uint64_t seed) {
  Rows rows("angle");
  {
    const auto zero = ImmersionSpec::graph_torus(2, "0");
    const ChartPoint p{0, {0.4, 1.3}};
    rows.add("theta_zero", "phi=0", "Lagrangian angle of a graph", std::abs(lagrangian_angle(zero, p, 0).value()),
             1e-15);
    rows.add("det_identity", "phi=0", "det g = det(I + (D^2 phi)^2)", std::abs(point_frame(zero, p, 2).g(0, 0) - 1.0),
             1e-15);
  }
  // Constant-Hessian fixtures: theta = sum of arctan of Hessian eigenvalues.
  const std::vector<std::pair<std::string, int>> quads = {
      {"0.5*x1^2", 2},
      {"0.5*x1^2 + 0.35*x1*x2 - 1.5*x2^2", 2},
      {"2*x1^2 + 3*x2^2", 2},
      {"0.5*x1^2 - x1*x3 + 0.7*x2*x3 + 1.2*x3^2", 3},
      {"4*x1^2 + 5*x2^2 + 3*x3^2 + x1*x2", 3}};
  for (const auto& [expr, n] : quads) {
    const auto spec = ImmersionSpec::graph_torus(n, expr);
    const ChartPoint p{0, std::vector<double>(n, 0.3)};
    const Jet phi = spec.potential_jet(p, 2);
    Eigen::MatrixXd P(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        MultiIndex a{};
        a[i] += 1;
        a[j] += 1;
        P(i, j) = phi.partial(a);
      }
    const Eigen::VectorXd lam = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(P).eigenvalues();
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::atan(lam[i]);
    rows.add("theta_sum_arctan", expr, "theta = sum arctan(lambda_i)",
             std::abs(lagrangian_angle(spec, p, 0).value() - s), 1e-12);
  }
  for (const auto& s : subjects(seed, false, true)) {
    double det = 0.0, grad = 0.0, hv = 0.0;
    for (const auto& p : s.points) {
      det = std::max(det, metric_det_identity(s.spec, p));
      grad = std::max(grad, angle_gradient_identity(s.spec, p));
      hv = std::max(hv, mean_curvature_vs_angle(s.spec, p));
    }
    rows.add("det_identity", s.label, "det g = det(I + (D^2 phi)^2)", det, 1e-12);
    rows.add("theta_gradient", s.label, "theta_k = g^{ij} phi_ijk", grad, 1e-9);
    rows.add("H_vs_theta", s.label, "J grad theta = n H", hv, 1e-9);
  }
  return rows.take();
}

std::vector<CheckRow> suite_surface(std::uint64_t seed) {
  Rows rows("surface");
  for (const auto& s : subjects(seed, true, true, false)) {
    if (s.spec.n() != 2) continue;
    rows.add("gauss_curvature_identity", s.label, "K = c + (|H|^2 - |htilde|^2)/2",
             max_over(s, [&](const ChartPoint& p) { return surface_curvature_identity(point_frame(s.spec, p, 3)); }),
             1e-8);
  }
  return rows.take();
}

std::vector<CheckRow> suite_chart(std::uint64_t seed) {
  Rows rows("chart");
  std::mt19937_64 rng(seed);
  for (const auto& m : catalog(seed)) {
    if (m.spec.domain() != ChartDomain::sphere) continue;
    double pos = 0.0, inv = 0.0;
    for (const auto& p0 : sample_points(m.spec, kCatalogPoints, rng)) {
      const auto x = m.spec.sphere_point(p0);
      const ChartPoint p1 = m.spec.sphere_chart(x, 1);
      const auto a = m.spec.position(p0), b = m.spec.position(p1);
      for (std::size_t i = 0; i < a.size(); ++i) pos = std::max(pos, std::abs(a[i] - b[i]));
      const auto f0 = point_frame(m.spec, p0, 2), f1 = point_frame(m.spec, p1, 2);
      inv = std::max(inv, std::abs(norm2(f0.H, f0.ginv) - norm2(f1.H, f1.ginv)));
      inv = std::max(inv, std::abs(norm2(f0.h, f0.ginv) - norm2(f1.h, f1.ginv)));
    }
    rows.add("overlap_position", m.label, "chart overlap consistency", pos, 1e-12);
    rows.add("overlap_invariants", m.label, "scalar invariants agree across charts", inv, 1e-9);
  }
  return rows.take();
}

const std::map<std::string, std::function<std::vector<CheckRow>(std::uint64_t)>>& registry() {
  static const std::map<std::string, std::function<std::vector<CheckRow>(std::uint64_t)>> r = {
      {"ambient", suite_ambient}, {"lagrangian", suite_lagrangian}, {"gauss", suite_gauss},
      {"codazzi", suite_codazzi}, {"maslov", suite_maslov},         {"whitney", suite_whitney},
      {"angle", suite_angle},     {"surface", suite_surface},       {"chart", suite_chart}};
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<CatalogMember> whitney_members(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5eedULL);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<CatalogMember> out;
  for (int n : {2, 3})
    for (double r : {1.0, 2.0})
      for (bool shifted : {false, true}) {
        std::vector<double> A(2 * n, 0.0);
        if (shifted)
          for (double& a : A) a = U(rng);
        out.push_back({"whitney_sphere(n=" + std::to_string(n) + ",r=" + fmt(r) + (shifted ? ",A=random)" : ",A=0)"),
                       ImmersionSpec::whitney_sphere(n, r, A)});
      }
  for (int n : {2, 3})
    for (double th : {0.3, 1.0})
      out.push_back({"whitney_cp(n=" + std::to_string(n) + ",theta=" + fmt(th) + ")", ImmersionSpec::whitney_cp(n, th)});
  return out;
}

std::vector<CatalogMember> catalog(std::uint64_t seed) {
  std::vector<CatalogMember> out = whitney_members(seed);
  out.push_back({"product_torus(1,1)", ImmersionSpec::product_torus({1.0, 1.0})});
  out.push_back({"product_torus(1,2)", ImmersionSpec::product_torus({1.0, 2.0})});
  out.push_back({"product_torus(1,1,1)", ImmersionSpec::product_torus({1.0, 1.0, 1.0})});
  out.push_back({"plane(n=2)", ImmersionSpec::graph_torus(2, "0")});
  out.push_back({"plane(n=3)", ImmersionSpec::graph_torus(3, "0")});
  return out;
}

std::string random_potential(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<std::pair<std::vector<int>, std::pair<double, double>>> terms;
  std::vector<int> k(n, -2);
  double total = 0.0;
  for (;;) {
    bool first_nonzero_positive = false;
    for (int v : k)
      if (v != 0) {
        first_nonzero_positive = v > 0;
        break;
      }
    if (first_nonzero_positive) {
      const double a = U(rng), b = U(rng);
      terms.push_back({k, {a, b}});
      total += std::abs(a) + std::abs(b);
    }
    int i = n - 1;
    while (i >= 0 && k[i] == 2) k[i--] = -2;
    if (i < 0) break;
    ++k[i];
  }
  const double scale = 0.3 / total;
  std::string s;
  char buf[64];
  for (const auto& [kk, ab] : terms) {
    std::string arg;
    for (int j = 0; j < n; ++j) {
      if (kk[j] == 0) continue;
      std::snprintf(buf, sizeof buf, "%s%d*x%d", arg.empty() ? "" : " + ", kk[j], j + 1);
      arg += buf;
    }
    std::snprintf(buf, sizeof buf, "%s%.17g*cos(%s)", s.empty() ? "" : " + ", ab.first * scale, arg.c_str());
    s += buf + std::string();
    std::snprintf(buf, sizeof buf, " + %.17g*sin(", ab.second * scale);
    s += buf + arg + ")";
  }
  return s;
}

std::vector<ChartPoint> sample_points(const ImmersionSpec& spec, int count, std::mt19937_64& rng) {
  const int n = spec.n();
  std::uniform_real_distribution<double> polar(0.2, kPi - 0.2), angle(0.0, 2.0 * kPi);
  std::vector<ChartPoint> out;
  for (int q = 0; q < count; ++q) {
    ChartPoint p;
    p.coords.resize(n);
    if (spec.domain() == ChartDomain::sphere) {
      for (int k = 0; k + 1 < n; ++k) p.coords[k] = polar(rng);
      p.coords[n - 1] = angle(rng);
    } else {
      for (int k = 0; k < n; ++k) p.coords[k] = angle(rng);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

std::vector<CheckRow> run_suite(const std::string& suite, std::uint64_t seed) {
  if (suite == "all") {
    std::vector<CheckRow> rows;
    for (const auto& [k, fn] : registry()) {
      auto r = fn(seed);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    return rows;
  }
  const auto it = registry().find(suite);
  if (it == registry().end()) throw std::invalid_argument("unknown verify suite '" + suite + "'");
  return it->second(seed);
}

std::string rows_to_json(const std::vector<CheckRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  bool all = true;
  for (const auto& r : rows) {
    arr.push_back({{"name", r.name}, {"paper_ref", r.paper_ref}, {"residual", r.residual}, {"tol", r.tol}, {"pass", r.pass}});
    all = all && r.pass;
  }
  nlohmann::json j;
  j["checks"] = arr;
  j["all_pass"] = all;
  j["count"] = rows.size();
  return j.dump(2);
}

}  // namespace lagrome
