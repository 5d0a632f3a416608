#include "lagrome/lagrome.h"

#include <cstdlib>
#include <cstring>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "lagrome/flow.hpp"
#include "lagrome/functionals.hpp"
#include "lagrome/geometry.hpp"
#include "lagrome/maslov.hpp"
#include "lagrome/parallel.hpp"
#include "lagrome/verify.hpp"

struct lagrome_jet {
  lagrome::Jet value;
};

struct lagrome_immersion {
  lagrome::ImmersionSpec spec;
};

namespace {

using json = nlohmann::json;

thread_local std::string g_last_error;

template <class F>
lagrome_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return LAGROME_OK;
  } catch (const lagrome::InvalidChartPoint& e) {
    g_last_error = e.what();
    return LAGROME_ERR_CHART;
  } catch (const lagrome::DegenerateMetric& e) {
    g_last_error = e.what();
    return LAGROME_ERR_DEGENERATE;
  } catch (const lagrome::ParseError& e) {
    g_last_error = e.what();
    return LAGROME_ERR_ARGUMENT;
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return LAGROME_ERR_ARGUMENT;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return LAGROME_ERR_ARGUMENT;
  } catch (const std::out_of_range& e) {
    g_last_error = e.what();
    return LAGROME_ERR_ARGUMENT;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return LAGROME_ERR_IO;
  } catch (const std::domain_error& e) {
    g_last_error = e.what();
    return LAGROME_ERR_NUMERICAL;
  } catch (const std::runtime_error& e) {
    g_last_error = e.what();
    return LAGROME_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LAGROME_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LAGROME_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

lagrome::ChartPoint chart_point(const lagrome_immersion* im, int chart, const double* coords) {
  require(im && coords, "null immersion or coordinates");
  lagrome::ChartPoint p;
  p.chart_id = chart;
  p.coords.assign(coords, coords + im->spec.n());
  return p;
}

json nested(const lagrome::Tensor<double>& t) {
  const int n = t.dim(), rank = t.rank();
  if (rank == 0) return t.empty() ? json(nullptr) : json(t[0]);
  std::function<json(std::size_t, int)> build = [&](std::size_t offset, int level) -> json {
    json arr = json::array();
    std::size_t stride = 1;
    for (int r = level + 1; r < rank; ++r) stride *= n;
    for (int i = 0; i < n; ++i) {
      if (level + 1 == rank) arr.push_back(t[offset + i]);
      else arr.push_back(build(offset + i * stride, level + 1));
    }
    return arr;
  };
  return build(0, 0);
}

std::set<std::string> parse_quantities(const char* q) {
  static const std::set<std::string> known = {"position", "g", "h", "H", "K", "htilde", "T", "divT",
                                              "divdivT", "theta", "scalars", "residuals"};
  if (!q || !*q || std::string(q) == "all") return known;
  std::set<std::string> out;
  std::stringstream ss(q);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (!known.count(item)) throw std::invalid_argument("unknown quantity '" + item + "'");
    out.insert(item);
  }
  return out;
}

lagrome::ImmersionSpec spec_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int n = j.value("n", 2);
  if (kind == "graph_torus") return lagrome::ImmersionSpec::graph_torus(n, j.at("potential").get<std::string>());
  if (kind == "plane") return lagrome::ImmersionSpec::graph_torus(n, "0");
  if (kind == "whitney_sphere")
    return lagrome::ImmersionSpec::whitney_sphere(n, j.value("radius", 1.0),
                                                  j.value("translation", std::vector<double>{}));
  if (kind == "product_torus") {
    std::vector<double> radii = j.value("radii", std::vector<double>(n, 1.0));
    return lagrome::ImmersionSpec::product_torus(radii);
  }
  if (kind == "whitney_cp") return lagrome::ImmersionSpec::whitney_cp(n, j.value("theta", 0.3));
  throw std::invalid_argument("unknown immersion kind '" + kind + "'");
}

}  // namespace

extern "C" {

const char* lagrome_last_error(void) { return g_last_error.c_str(); }

const char* lagrome_version(void) { return "0.1.0"; }

void lagrome_string_free(char* s) { std::free(s); }

lagrome_status lagrome_set_threads(int threads) {
  return guarded([&] {
    require(threads >= 0, "thread count must be non-negative");
    lagrome::set_thread_count(threads);
  });
}

// Jets -----------------------------------------------------------------

lagrome_status lagrome_jet_constant(int dim, int order, double value, lagrome_jet** out) {
  return guarded([&] {
    require(out, "null output");
    *out = new lagrome_jet{lagrome::Jet(dim, order, value)};
  });
}

lagrome_status lagrome_jet_variable(int dim, int order, int index, double value, lagrome_jet** out) {
  return guarded([&] {
    require(out, "null output");
    *out = new lagrome_jet{lagrome::Jet::variable(index, value, dim, order)};
  });
}

lagrome_status lagrome_jet_apply(lagrome_jet_op op, const lagrome_jet* a, const lagrome_jet* b, lagrome_jet** out) {
  return guarded([&] {
    require(a && out, "null jet");
    require(op >= LAGROME_JET_ADD && op <= LAGROME_JET_POW, "unknown jet operation");
    const auto jop = static_cast<lagrome::JetOp>(op);
    const bool binary = op == LAGROME_JET_ADD || op == LAGROME_JET_MUL || op == LAGROME_JET_DIV || op == LAGROME_JET_POW;
    std::vector<lagrome::Jet> args{a->value};
    if (binary) {
      require(b, "binary jet operation needs two operands");
      args.push_back(b->value);
    }
    *out = new lagrome_jet{lagrome::jet_apply(jop, args)};
  });
}

lagrome_status lagrome_jet_partial(const lagrome_jet* j, const int* alpha, double* out) {
  return guarded([&] {
    require(j && alpha && out, "null argument");
    lagrome::MultiIndex a{};
    for (int i = 0; i < j->value.dim(); ++i) {
      require(alpha[i] >= 0, "negative multi-index entry");
      a[i] = alpha[i];
    }
    *out = j->value.partial(a);
  });
}

void lagrome_jet_free(lagrome_jet* j) { delete j; }

// Immersions -------------------------------------------------------------

lagrome_status lagrome_immersion_graph_torus(int n, const char* potential, lagrome_immersion** out) {
  return guarded([&] {
    require(potential && out, "null argument");
    *out = new lagrome_immersion{lagrome::ImmersionSpec::graph_torus(n, potential)};
  });
}

lagrome_status lagrome_immersion_whitney_sphere(int n, double radius, const double* translation,
                                                lagrome_immersion** out) {
  return guarded([&] {
    require(out, "null output");
    std::vector<double> A;
    if (translation) A.assign(translation, translation + 2 * n);
    *out = new lagrome_immersion{lagrome::ImmersionSpec::whitney_sphere(n, radius, A)};
  });
}

lagrome_status lagrome_immersion_product_torus(int n, const double* radii, lagrome_immersion** out) {
  return guarded([&] {
    require(radii && out, "null argument");
    require(n >= 2, "product torus needs n >= 2");
    *out = new lagrome_immersion{lagrome::ImmersionSpec::product_torus(std::vector<double>(radii, radii + n))};
  });
}

lagrome_status lagrome_immersion_whitney_cp(int n, double theta, lagrome_immersion** out) {
  return guarded([&] {
    require(out, "null output");
    *out = new lagrome_immersion{lagrome::ImmersionSpec::whitney_cp(n, theta)};
  });
}

lagrome_status lagrome_immersion_from_json(const char* spec_json, lagrome_immersion** out) {
  return guarded([&] {
    require(spec_json && out, "null argument");
    *out = new lagrome_immersion{spec_from_json(json::parse(spec_json))};
  });
}

void lagrome_immersion_free(lagrome_immersion* im) { delete im; }

lagrome_status lagrome_immersion_dim(const lagrome_immersion* im, int* n) {
  return guarded([&] {
    require(im && n, "null argument");
    *n = im->spec.n();
  });
}

lagrome_status lagrome_position(const lagrome_immersion* im, int chart, const double* coords, double* out) {
  return guarded([&] {
    require(out, "null output");
    const auto x = im ? im->spec.position(chart_point(im, chart, coords)) : std::vector<double>{};
    std::copy(x.begin(), x.end(), out);
  });
}

lagrome_status lagrome_lagrangian_residual(const lagrome_immersion* im, int chart, const double* coords,
                                           double* out) {
  return guarded([&] {
    require(out, "null output");
    const auto p = chart_point(im, chart, coords);
    *out = lagrome::lagrangian_residual(im->spec, p);
  });
}

lagrome_status lagrome_eval_json(const lagrome_immersion* im, int chart, const double* coords,
                                 const char* quantities, char** out_json) {
  return guarded([&] {
    require(out_json, "null output");
    const auto p = chart_point(im, chart, coords);
    const auto want = parse_quantities(quantities);
    const auto& spec = im->spec;
    const bool graph = spec.kind() == lagrome::ImmersionKind::graph_torus;

    const lagrome::LocalGeometry geo(spec, p, 5);
    const lagrome::PointFrame f = geo.frame();
    const lagrome::MaslovFrame m = lagrome::maslov_frame(geo);

    json j;
    j["immersion"] = spec.name();
    j["n"] = spec.n();
    j["c"] = spec.c();
    j["chart"] = p.chart_id;
    j["point"] = p.coords;
    if (want.count("position")) j["position"] = spec.position(p);
    if (want.count("g")) j["g"] = nested(f.g);
    if (want.count("h")) j["h"] = nested(f.h);
    if (want.count("H")) j["H"] = nested(f.H);
    if (want.count("K") && spec.n() == 2) j["K"] = f.K;
    if (want.count("htilde")) j["htilde"] = nested(m.htilde);
    if (want.count("T")) j["T"] = nested(m.T);
    if (want.count("divT")) j["divT"] = nested(m.divT);
    if (want.count("divdivT")) {
      j["divdivT"] = *m.divdivT;
      if (graph) j["divdivT_angle"] = lagrome::AngleGeometry(spec.potential_jet(p, 6)).div_div_T();
    }
    if (want.count("theta") && graph) {
      const lagrome::Jet th = lagrome::lagrangian_angle(spec, p, 1);
      std::vector<double> grad(spec.n());
      for (int k = 0; k < spec.n(); ++k) grad[k] = th.derivative(k).value();
      j["theta"] = th.value();
      j["theta_grad"] = grad;
    }
    if (want.count("scalars")) {
      j["scalars"] = {{"volume_density", f.volume_density},
                      {"h2", m.h2},
                      {"H2", m.H2},
                      {"htilde2", m.htilde2},
                      {"T2", m.T2},
                      {"divT2", m.divT2},
                      {"gradJH2", m.gradJH2},
                      {"divJH", m.divJH},
                      {"gap_margin", lagrome::gap_predicate(f, spec.c()).margin}};
    }
    if (want.count("residuals")) {
      j["residuals"] = {{"lagrangian", lagrome::lagrangian_residual(spec, p)},
                        {"gauss", lagrome::gauss_consistency(f, spec.c())},
                        {"norm_identity", m.norm_identity},
                        {"T_routes", m.T_routes},
                        {"divT_routes", m.divT_routes},
                        {"htilde_codazzi", m.htilde_codazzi}};
    }
    *out_json = dup_string(j.dump(2));
  });
}

lagrome_status lagrome_integrate_json(const lagrome_immersion* im, const char* functional, int coarse_N,
                                      char** out_json) {
  return guarded([&] {
    require(im && functional && out_json, "null argument");
    require(coarse_N >= 0, "grid size must be non-negative");
    const auto grids = coarse_N == 0 ? lagrome::default_grids(im->spec) : lagrome::grid_pair(im->spec, coarse_N);
    std::string name = functional;
    json out;
    if (name == "energies") {
      out = json::array();
      for (const auto& r : lagrome::energy_report(im->spec, grids)) out.push_back(json::parse(r.to_json()));
    } else {
      if (name == "willmore") require(im->spec.n() == 2 && im->spec.c() == 0, "willmore needs n = 2 and c = 0");
      const auto field = lagrome::field_by_name(name, im->spec.c());
      out = json::parse(lagrome::integrate(im->spec, grids, field).to_json());
    }
    json j;
    j["immersion"] = im->spec.name();
    j["report"] = out;
    *out_json = dup_string(j.dump(2));
  });
}

// Matrix inequality -------------------------------------------------------

lagrome_status lagrome_lili(const double* B, int m, int n, double* lhs, double* rhs) {
  return guarded([&] {
    require(B && lhs && rhs, "null argument");
    require(m >= 2 && n >= 1, "need m >= 2 matrices of size n >= 1");
    std::vector<Eigen::MatrixXd> mats;
    for (int k = 0; k < m; ++k) {
      Eigen::MatrixXd b(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = B[(k * n + i) * n + j];
      require((b - b.transpose()).cwiseAbs().maxCoeff() == 0.0, "matrices must be symmetric");
      mats.push_back(std::move(b));
    }
    const auto r = lagrome::lili_check(mats);
    *lhs = r.lhs;
    *rhs = r.rhs;
  });
}

lagrome_status lagrome_lili_random(long trials, uint64_t seed, char** out_json) {
  return guarded([&] {
    require(out_json, "null output");
    const auto s = lagrome::lili_random(trials, seed);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd D(2, 2), W(2, 2);
    D << 1, 0, 0, -1;
    W << 0, 1, 1, 0;
    const auto eq = lagrome::lili_check({D, W});
    const auto id = lagrome::lili_check({I, I});
    json j;
    j["trials"] = s.trials;
    j["seed"] = seed;
    j["max_violation"] = s.max_violation;
    j["violations"] = s.violations;
    j["max_ratio"] = s.max_ratio;
    j["equality_tuple"] = {{"lhs", eq.lhs}, {"rhs", eq.rhs}};
    j["identity_tuple"] = {{"lhs", id.lhs}, {"rhs", id.rhs}};
    j["paper_ref"] = "matrix inequality for symmetric tuples";
    *out_json = dup_string(j.dump(2));
  });
}

// Verification and flow ---------------------------------------------------

lagrome_status lagrome_verify_json(const char* suite, uint64_t seed, int* all_pass, char** out_json) {
  return guarded([&] {
    require(suite && all_pass && out_json, "null argument");
    const auto rows = lagrome::run_suite(suite, seed);
    int pass = 1;
    for (const auto& r : rows) pass &= r.pass ? 1 : 0;
    *all_pass = pass;
    *out_json = dup_string(lagrome::rows_to_json(rows));
  });
}

lagrome_status lagrome_flow_run(const char* config_json, const char* out_dir, int* exit_code,
                                char** summary_json) {
  return guarded([&] {
    require(config_json && exit_code, "null argument");
    const auto cfg = lagrome::FlowConfig::from_json(config_json);
    const auto res = lagrome::run_flow(cfg, out_dir ? std::filesystem::path(out_dir) : std::filesystem::path());
    *exit_code = lagrome::exit_code(res.status);
    if (summary_json) *summary_json = dup_string(res.summary);
  });
}

}  // extern "C"
