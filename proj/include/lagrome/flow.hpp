#pragma once

// Sixth-order flow of periodic Lagrangian graphs, d phi/dt = -div_div_T(phi),
// on the flat torus [0, 2 pi)^n.
//
// Derivatives up to order six come from the FFT of phi.  At each node they
// fill an order-6 jet of phi, and the angle route of div_div_T gives the
// right-hand side exactly for the interpolant.  Time stepping is IMEX:
// c6 Delta^3 (c6 = (n-1)/(n+2)) is implicit through division by the flat
// symbol, the rest of the right-hand side is explicit.

#include <complex>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lagrome/jet.hpp"

namespace lagrome {

enum class FlowScheme { imex_bdf1, imex_bdf2 };

struct FlowConfig {
  int n = 2;
  int N = 64;
  double dt = 0.0;  // 0 selects 0.5 / (c6 k_max^6)
  double t_end = 0.0;
  FlowScheme scheme = FlowScheme::imex_bdf2;
  bool dealias = true;
  int diagnostics_every = 1;
  int checkpoint_every = 0;  // 0: initial and final state only
  std::string initial_potential = "0";
  double tail_tolerance = 1e-6;
  double blowup_threshold = 1e6;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
  double c6() const { return (n - 1.0) / (n + 2.0); }
  double effective_dt() const;

  static FlowConfig from_json(const std::string& text);
  std::string to_json() const;
};

struct FlowState {
  int n = 2;
  int N = 0;
  std::vector<double> phi;  // row-major, last axis fastest
  double t = 0.0;
  long step_count = 0;
};

class UnderResolved : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BlowUp : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FlowDiagnostics {
  double t = 0.0;
  double max_phi = 0.0;
  double l2_htilde = 0.0;  // integral of |htilde|^2 dnu
  double l2_T = 0.0;       // integral of |T|^2 dnu
  double tail_energy = 0.0;
  double int_divdivT = 0.0;  // integral of div_div_T dnu
};

/// Right-hand side at one point from a jet of phi (order 6).
double flow_rhs_point(const Jet& phi);

class FlowSolver {
 public:
  explicit FlowSolver(const FlowConfig& config);
  ~FlowSolver();
  FlowSolver(const FlowSolver&) = delete;
  FlowSolver& operator=(const FlowSolver&) = delete;

  const FlowConfig& config() const { return cfg_; }
  std::size_t size() const { return total_; }

  FlowState initial_state() const;
  /// Grid values of phi from a potential expression.
  std::vector<double> sample(const std::string& potential) const;

  /// d phi/dt at every node; throws UnderResolved when the tail exceeds tolerance.
  std::vector<double> rhs(const std::vector<double>& phi) const;
  /// Spectral derivative d^alpha phi on the grid.
  std::vector<double> derivative(const std::vector<double>& phi, const MultiIndex& alpha) const;
  /// Relative spectral energy of modes with max |k_j| > N/4.
  double tail_energy(const std::vector<double>& phi) const;
  /// Flat-symbol term c6 Delta^3 phi.
  std::vector<double> leading_term(const std::vector<double>& phi) const;

  /// One IMEX step; throws BlowUp on non-finite or runaway values (state unchanged).
  void step(FlowState& state);
  FlowDiagnostics diagnostics(const FlowState& state) const;

 private:
  struct Plans;
  std::vector<std::complex<double>> forward(const std::vector<double>& phi) const;
  std::vector<double> backward(std::vector<std::complex<double>> coeffs) const;
  std::vector<std::complex<double>> explicit_part(const std::vector<double>& phi) const;
  std::vector<std::vector<double>> all_partials(const std::vector<double>& phi) const;

  FlowConfig cfg_;
  std::size_t total_ = 0;
  std::size_t spectral_ = 0;
  std::vector<std::array<int, 3>> wavenumbers_;  // per spectral slot
  std::vector<double> k6_;                         // |k|^6 per slot
  std::vector<char> kept_;                         // dealias mask
  std::unique_ptr<Plans> plans_;
  // BDF2 history
  std::vector<std::complex<double>> prev_hat_, prev_explicit_;
};

enum class FlowStatus { completed, blowup, under_resolved };
std::string to_string(FlowStatus s);
int exit_code(FlowStatus s);

struct FlowResult {
  FlowStatus status = FlowStatus::completed;
  std::string message;
  FlowState final_state;
  std::vector<FlowDiagnostics> series;
  std::string summary;  // run.json contents
};

/// Integrates to t_end; writes series.csv, phi_<step>.csv and run.json into
/// out_dir when it is non-empty.  Failures are recorded, not thrown.
FlowResult run_flow(const FlowConfig& config, const std::filesystem::path& out_dir);

}  // namespace lagrome
