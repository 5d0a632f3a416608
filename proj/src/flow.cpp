#include "lagrome/flow.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <nlohmann/json.hpp>

#include "lagrome/expr.hpp"
#include "lagrome/geometry.hpp"
#include "lagrome/maslov.hpp"
#include "lagrome/parallel.hpp"

namespace lagrome {

using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

std::mutex& fftw_planner_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

// ---------------------------------------------------------------------------
// config

void FlowConfig::validate() const {
  if (n != 2 && n != 3) throw std::invalid_argument("flow: n must be 2 or 3");
  if (!is_pow2(N) || N < 8) throw std::invalid_argument("flow: N must be a power of two >= 8");
  if (n == 3 && N > 64) throw std::invalid_argument("flow: N must be <= 64 for n = 3");
  if (N > 1024) throw std::invalid_argument("flow: N must be <= 1024");
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw std::invalid_argument("flow: dt must be >= 0 (0 selects the default)");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("flow: t_end must be finite and >= 0");
  if (diagnostics_every < 1) throw std::invalid_argument("flow: diagnostics_every must be >= 1");
  if (checkpoint_every < 0) throw std::invalid_argument("flow: checkpoint_every must be >= 0");
  if (!(tail_tolerance > 0.0)) throw std::invalid_argument("flow: tail_tolerance must be positive");
  if (!(blowup_threshold > 0.0)) throw std::invalid_argument("flow: blowup_threshold must be positive");
}

double FlowConfig::effective_dt() const {
  if (dt > 0.0) return dt;
  const double kmax = N / 2.0;
  return 0.5 / (c6() * std::pow(kmax, 6));
}

FlowConfig FlowConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("flow config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("flow config must be a JSON object");
  FlowConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const auto& v = it.value();
    try {
      if (k == "n") c.n = v.get<int>();
      else if (k == "N") c.N = v.get<int>();
      else if (k == "dt") c.dt = v.get<double>();
      else if (k == "t_end") c.t_end = v.get<double>();
      else if (k == "dealias") c.dealias = v.get<bool>();
      else if (k == "diagnostics_every") c.diagnostics_every = v.get<int>();
      else if (k == "checkpoint_every") c.checkpoint_every = v.get<int>();
      else if (k == "initial_potential") c.initial_potential = v.get<std::string>();
      else if (k == "tail_tolerance") c.tail_tolerance = v.get<double>();
      else if (k == "blowup_threshold") c.blowup_threshold = v.get<double>();
      else if (k == "scheme") {
        const std::string s = v.get<std::string>();
        if (s == "imex_bdf1") c.scheme = FlowScheme::imex_bdf1;
        else if (s == "imex_bdf2") c.scheme = FlowScheme::imex_bdf2;
        else throw std::invalid_argument("flow config: unknown scheme '" + s + "'");
      } else {
        throw std::invalid_argument("flow config: unknown key '" + k + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("flow config: bad value for '" + k + "': " + e.what());
    }
  }
  c.validate();
  return c;
}

std::string FlowConfig::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["N"] = N;
  j["dt"] = dt;
  j["t_end"] = t_end;
  j["scheme"] = scheme == FlowScheme::imex_bdf1 ? "imex_bdf1" : "imex_bdf2";
  j["dealias"] = dealias;
  j["diagnostics_every"] = diagnostics_every;
  j["checkpoint_every"] = checkpoint_every;
  j["initial_potential"] = initial_potential;
  j["tail_tolerance"] = tail_tolerance;
  j["blowup_threshold"] = blowup_threshold;
  return j.dump();
}

// ---------------------------------------------------------------------------

double flow_rhs_point(const Jet& phi) { return -AngleGeometry(phi, false).div_div_T(); }

struct FlowSolver::Plans {
  fftw_plan r2c = nullptr, c2r = nullptr;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  ~Plans() {
    std::lock_guard lock(fftw_planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
    fftw_free(real);
    fftw_free(spec);
  }
};

FlowSolver::FlowSolver(const FlowConfig& config) : cfg_(config), plans_(std::make_unique<Plans>()) {
  cfg_.validate();
  const int n = cfg_.n, N = cfg_.N;
  total_ = 1;
  for (int k = 0; k < n; ++k) total_ *= N;
  const int last = N / 2 + 1;
  spectral_ = total_ / N * last;

  wavenumbers_.resize(spectral_);
  k6_.resize(spectral_);
  kept_.resize(spectral_);
  for (std::size_t s = 0; s < spectral_; ++s) {
    std::array<int, 3> k{};
    std::size_t r = s;
    k[n - 1] = static_cast<int>(r % last);
    r /= last;
    for (int a = n - 2; a >= 0; --a) {
      const int idx = static_cast<int>(r % N);
      r /= N;
      k[a] = idx <= N / 2 ? idx : idx - N;
    }
    wavenumbers_[s] = k;
    double k2 = 0.0;
    bool keep = true;
    for (int a = 0; a < n; ++a) {
      k2 += double(k[a]) * k[a];
      if (3 * std::abs(k[a]) > N) keep = false;
    }
    k6_[s] = k2 * k2 * k2;
    kept_[s] = keep || !cfg_.dealias;
  }

  std::array<int, 3> dims{N, N, N};
  std::lock_guard lock(fftw_planner_mutex());
  plans_->real = fftw_alloc_real(total_);
  plans_->spec = fftw_alloc_complex(spectral_);
  plans_->r2c = fftw_plan_dft_r2c(n, dims.data(), plans_->real, plans_->spec, FFTW_ESTIMATE);
  plans_->c2r = fftw_plan_dft_c2r(n, dims.data(), plans_->spec, plans_->real, FFTW_ESTIMATE);
  if (!plans_->r2c || !plans_->c2r) throw std::runtime_error("flow: FFT planning failed");
}

FlowSolver::~FlowSolver() = default;

std::vector<cplx> FlowSolver::forward(const std::vector<double>& phi) const {
  std::copy(phi.begin(), phi.end(), plans_->real);
  fftw_execute(plans_->r2c);
  std::vector<cplx> out(spectral_);
  const double scale = 1.0 / static_cast<double>(total_);
  for (std::size_t s = 0; s < spectral_; ++s) out[s] = cplx(plans_->spec[s][0], plans_->spec[s][1]) * scale;
  return out;
}

std::vector<double> FlowSolver::backward(std::vector<cplx> coeffs) const {
  for (std::size_t s = 0; s < spectral_; ++s) {
    plans_->spec[s][0] = coeffs[s].real();
    plans_->spec[s][1] = coeffs[s].imag();
  }
  fftw_execute(plans_->c2r);
  return std::vector<double>(plans_->real, plans_->real + total_);
}

std::vector<double> FlowSolver::sample(const std::string& potential) const {
  const int n = cfg_.n, N = cfg_.N;
  const Expression e = Expression::parse(potential, n);
  std::vector<double> phi(total_);
  const double h = 2.0 * kPi / N;
  std::vector<double> x(n);
  for (std::size_t q = 0; q < total_; ++q) {
    std::size_t r = q;
    for (int a = n - 1; a >= 0; --a) {
      x[a] = h * static_cast<double>(r % N);
      r /= N;
    }
    phi[q] = e.eval<double>(x);
    if (!std::isfinite(phi[q])) throw std::invalid_argument("flow: initial potential is not finite on the grid");
  }
  return phi;
}

FlowState FlowSolver::initial_state() const {
  FlowState s;
  s.n = cfg_.n;
  s.N = cfg_.N;
  s.phi = sample(cfg_.initial_potential);
  return s;
}

std::vector<double> FlowSolver::derivative(const std::vector<double>& phi, const MultiIndex& alpha) const {
  std::vector<cplx> c = forward(phi);
  const int n = cfg_.n, N = cfg_.N;
  for (std::size_t s = 0; s < spectral_; ++s) {
    cplx f(1.0, 0.0);
    for (int a = 0; a < n; ++a) {
      const int k = wavenumbers_[s][a];
      const int p = alpha[a];
      if (p == 0) continue;
      if (p % 2 == 1 && 2 * std::abs(k) == N) {
        f = 0.0;
        break;
      }
      cplx ik(0.0, double(k));
      for (int e = 0; e < p; ++e) f *= ik;
    }
    c[s] *= f;
  }
  return backward(std::move(c));
}

std::vector<std::vector<double>> FlowSolver::all_partials(const std::vector<double>& phi) const {
  const JetLayout& L = JetLayout::get(cfg_.n, kMaxJetOrder);
  std::vector<std::vector<double>> D(L.size());
  for (std::size_t m = 0; m < L.size(); ++m) D[m] = derivative(phi, L.monomials[m]);
  return D;
}

double FlowSolver::tail_energy(const std::vector<double>& phi) const {
  const std::vector<cplx> c = forward(phi);
  const int n = cfg_.n, N = cfg_.N;
  double tail = 0.0, total = 0.0;
  for (std::size_t s = 0; s < spectral_; ++s) {
    const auto& k = wavenumbers_[s];
    const int kl = k[n - 1];
    const double w = (kl == 0 || 2 * kl == N) ? 1.0 : 2.0;
    int kinf = 0;
    for (int a = 0; a < n; ++a) kinf = std::max(kinf, std::abs(k[a]));
    if (kinf == 0) continue;
    const double e = w * std::norm(c[s]);
    total += e;
    if (4 * kinf > N) tail += e;
  }
  if (total < 1e-30) return 0.0;
  return tail / total;
}

std::vector<double> FlowSolver::leading_term(const std::vector<double>& phi) const {
  std::vector<cplx> c = forward(phi);
  for (std::size_t s = 0; s < spectral_; ++s) c[s] *= -cfg_.c6() * k6_[s];
  return backward(std::move(c));
}

std::vector<double> FlowSolver::rhs(const std::vector<double>& phi) const {
  const double tail = tail_energy(phi);
  if (tail > cfg_.tail_tolerance) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "spectral tail energy %.3e exceeds tolerance %.3e", tail, cfg_.tail_tolerance);
    throw UnderResolved(buf);
  }
  const auto D = all_partials(phi);
  const JetLayout& L = JetLayout::get(cfg_.n, kMaxJetOrder);
  std::vector<double> out(total_);
  parallel_for(total_, [&](std::size_t q) {
    Jet j(cfg_.n, kMaxJetOrder, 0.0);
    for (std::size_t m = 0; m < L.size(); ++m) {
      const double v = D[m][q];
      if (!std::isfinite(v)) throw BlowUp("non-finite derivative of phi");
      j.coeff_at(m) = v / L.factorial[m];
    }
    out[q] = flow_rhs_point(j);
  });
  return out;
}

std::vector<cplx> FlowSolver::explicit_part(const std::vector<double>& phi) const {
  const std::vector<double> r = rhs(phi);
  std::vector<cplx> rh = forward(r);
  const std::vector<cplx> ph = forward(phi);
  for (std::size_t s = 0; s < spectral_; ++s) {
    rh[s] += cfg_.c6() * k6_[s] * ph[s];
    if (!kept_[s]) rh[s] = 0.0;
  }
  return rh;
}

void FlowSolver::step(FlowState& state) {
  const double dt = cfg_.effective_dt();
  const double c6 = cfg_.c6();
  const std::vector<cplx> ph = forward(state.phi);
  const std::vector<cplx> E = explicit_part(state.phi);
  std::vector<cplx> next(spectral_);
  const bool bdf2 = cfg_.scheme == FlowScheme::imex_bdf2 && !prev_hat_.empty();
  for (std::size_t s = 0; s < spectral_; ++s) {
    if (bdf2)
      next[s] = (4.0 * ph[s] - prev_hat_[s] + 2.0 * dt * (2.0 * E[s] - prev_explicit_[s])) / (3.0 + 2.0 * dt * c6 * k6_[s]);
    else
      next[s] = (ph[s] + dt * E[s]) / (1.0 + dt * c6 * k6_[s]);
  }
  std::vector<double> phi = backward(std::move(next));
  double mx = 0.0;
  for (double v : phi) {
    if (!std::isfinite(v)) throw BlowUp("non-finite phi after step");
    mx = std::max(mx, std::abs(v));
  }
  if (mx > cfg_.blowup_threshold) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "max |phi| = %.3e exceeds blowup threshold %.3e", mx, cfg_.blowup_threshold);
    throw BlowUp(buf);
  }
  prev_hat_ = ph;
  prev_explicit_ = E;
  state.phi = std::move(phi);
  state.t += dt;
  ++state.step_count;
}

FlowDiagnostics FlowSolver::diagnostics(const FlowState& state) const {
  const int n = cfg_.n;
  FlowDiagnostics d;
  d.t = state.t;
  for (double v : state.phi) d.max_phi = std::max(d.max_phi, std::abs(v));
  d.tail_energy = tail_energy(state.phi);
  const auto D = all_partials(state.phi);
  const JetLayout& L = JetLayout::get(n, kMaxJetOrder);
  const double h = 2.0 * kPi / cfg_.N;
  const double w = std::pow(h, n);
  std::vector<double> ht(total_), T2(total_), ddt(total_);
  const AmbientSpace flat(0, n);
  parallel_for(total_, [&](std::size_t q) {
    Jet j(n, kMaxJetOrder, 0.0);
    for (std::size_t m = 0; m < L.size(); ++m) j.coeff_at(m) = D[m][q] / L.factorial[m];
    const AngleGeometry ag(j, false);
    const double vol = std::sqrt(std::max(0.0, ag.det_re().value() * ag.det_re().value() +
                                                   ag.det_im().value() * ag.det_im().value()));
    ddt[q] = w * vol * ag.div_div_T();
    // Graph F = (x, grad phi); component jets of order 3 give T.
    const Jet j4 = j.truncated(4);
    std::vector<Jet> F;
    std::size_t r = q;
    std::vector<double> x(n);
    for (int a = n - 1; a >= 0; --a) {
      x[a] = h * static_cast<double>(r % cfg_.N);
      r /= cfg_.N;
    }
    for (int a = 0; a < n; ++a) {
      F.push_back(Jet::variable(a, x[a], n, 3));
      F.push_back(j4.derivative(a));
    }
    const LocalGeometry geo(flat, F);
    const PointFrame f = geo.frame();
    ht[q] = w * vol * norm2(traceless_h(f), f.ginv);
    T2[q] = w * vol * norm2(maslov_T(f, geo.derived()), f.ginv);
  });
  d.l2_htilde = pairwise_sum(ht);
  d.l2_T = pairwise_sum(T2);
  d.int_divdivT = pairwise_sum(ddt);
  return d;
}

// ---------------------------------------------------------------------------

std::string to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::completed: return "completed";
    case FlowStatus::blowup: return "blowup";
    case FlowStatus::under_resolved: return "under_resolved";
  }
  return "?";
}

int exit_code(FlowStatus s) {
  switch (s) {
    case FlowStatus::completed: return 0;
    case FlowStatus::blowup: return 3;
    case FlowStatus::under_resolved: return 4;
  }
  return 2;
}

namespace {

void write_checkpoint(const std::filesystem::path& dir, const FlowState& s) {
  std::ofstream out(dir / ("phi_" + std::to_string(s.step_count) + ".csv"));
  char buf[32];
  for (std::size_t q = 0; q < s.phi.size(); ++q) {
    std::snprintf(buf, sizeof buf, "%.17g", s.phi[q]);
    out << buf << (((q + 1) % s.N == 0) ? '\n' : ',');
  }
}

bool finite_row(const FlowDiagnostics& d) {
  return std::isfinite(d.t) && std::isfinite(d.max_phi) && std::isfinite(d.l2_htilde) && std::isfinite(d.l2_T) &&
         std::isfinite(d.tail_energy) && std::isfinite(d.int_divdivT);
}

}  // namespace

FlowResult run_flow(const FlowConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  FlowConfig cfg = config;
  const double dt0 = cfg.effective_dt();
  const long nsteps = cfg.t_end > 0.0 ? static_cast<long>(std::ceil(cfg.t_end / dt0 - 1e-9)) : 0;
  if (nsteps > 0) cfg.dt = cfg.t_end / nsteps;
  else cfg.dt = dt0;

  FlowSolver solver(cfg);
  FlowResult res;
  FlowState state = solver.initial_state();

  const bool write = !out_dir.empty();
  std::ofstream series;
  if (write) {
    std::filesystem::create_directories(out_dir);
    series.open(out_dir / "series.csv");
    series << "t,max_phi,l2_htilde,l2_T,tail_energy\n";
  }
  double max_int_ddt = 0.0;
  auto record = [&](const FlowState& s) {
    const FlowDiagnostics d = solver.diagnostics(s);
    if (!finite_row(d)) throw BlowUp("non-finite diagnostics");
    res.series.push_back(d);
    max_int_ddt = std::max(max_int_ddt, std::abs(d.int_divdivT));
    if (write) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", d.t, d.max_phi, d.l2_htilde, d.l2_T,
                    d.tail_energy);
      series << buf;
    }
  };

  try {
    if (write) write_checkpoint(out_dir, state);
    const double tail = solver.tail_energy(state.phi);
    if (tail > cfg.tail_tolerance) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "initial spectral tail energy %.3e exceeds tolerance %.3e", tail,
                    cfg.tail_tolerance);
      throw UnderResolved(buf);
    }
    record(state);
    for (long k = 0; k < nsteps; ++k) {
      solver.step(state);
      const bool last = k + 1 == nsteps;
      if (state.step_count % cfg.diagnostics_every == 0 || last) record(state);
      if (write && cfg.checkpoint_every > 0 && state.step_count % cfg.checkpoint_every == 0 && !last)
        write_checkpoint(out_dir, state);
    }
    res.status = FlowStatus::completed;
  } catch (const UnderResolved& e) {
    res.status = FlowStatus::under_resolved;
    res.message = e.what();
  } catch (const BlowUp& e) {
    res.status = FlowStatus::blowup;
    res.message = e.what();
  }
  if (write && (state.step_count > 0 || res.status == FlowStatus::completed)) write_checkpoint(out_dir, state);
  res.final_state = state;

  nlohmann::json j;
  j["status"] = to_string(res.status);
  j["exit_code"] = exit_code(res.status);
  j["message"] = res.message;
  j["t"] = state.t;
  j["steps"] = state.step_count;
  j["dt"] = cfg.dt;
  j["config"] = nlohmann::json::parse(config.to_json());
  j["last_good_checkpoint"] = "phi_" + std::to_string(state.step_count) + ".csv";
  j["diagnostic_rows"] = res.series.size();
  j["max_abs_integral_divdivT"] = max_int_ddt;
  res.summary = j.dump(2);
  if (write) std::ofstream(out_dir / "run.json") << res.summary << "\n";
  return res;
}

}  // namespace lagrome
