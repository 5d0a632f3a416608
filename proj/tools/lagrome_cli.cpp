// lagrome command-line front end.  Talks to the library only through the C API.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "lagrome/lagrome.h"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct ImmersionFlags {
  std::string kind = "whitney_sphere";
  int n = 2;
  std::string potential = "0";
  double radius = 1.0;
  std::vector<double> translation;
  std::vector<double> radii;
  double theta = 0.3;
  std::string spec_json;

  void attach(CLI::App* app) {
    app->add_option("--immersion", kind, "graph_torus | plane | whitney_sphere | product_torus | whitney_cp")
        ->check(CLI::IsMember({"graph_torus", "plane", "whitney_sphere", "product_torus", "whitney_cp"}));
    app->add_option("--n", n, "dimension of the submanifold")->check(CLI::Range(2, 3));
    app->add_option("--potential", potential, "graph potential in x1..xn");
    app->add_option("--radius", radius, "Whitney sphere radius");
    app->add_option("--translation", translation, "Whitney sphere translation (2n values)")->delimiter(',');
    app->add_option("--radii", radii, "product torus radii")->delimiter(',');
    app->add_option("--theta", theta, "parameter of the Whitney sphere in CP^n");
    app->add_option("--spec", spec_json, "immersion as JSON (overrides the flags above)");
  }

  std::string to_json() const {
    if (!spec_json.empty()) return spec_json;
    nlohmann::json j;
    j["kind"] = kind;
    j["n"] = kind == "product_torus" && !radii.empty() ? static_cast<int>(radii.size()) : n;
    if (kind == "graph_torus") j["potential"] = potential;
    if (kind == "whitney_sphere") {
      j["radius"] = radius;
      if (!translation.empty()) j["translation"] = translation;
    }
    if (kind == "product_torus" && !radii.empty()) j["radii"] = radii;
    if (kind == "whitney_cp") j["theta"] = theta;
    return j.dump();
  }
};

int report_error(lagrome_status st) {
  std::fprintf(stderr, "lagrome: error %d: %s\n", static_cast<int>(st), lagrome_last_error());
  return kExitError;
}

bool emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << "\n";
    return true;
  }
  std::ofstream out(path);
  out << text << "\n";
  return static_cast<bool>(out);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  lagrome_string_free(s);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical workbench for Lagrangian submanifolds in complex space forms"};
  app.require_subcommand(1);

  int threads = 0;
  std::uint64_t seed = 20240229;
  std::string output;
  app.add_option("--threads", threads, "worker thread cap (0: hardware default)")
      ->envname("LAGROME_THREADS")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "random seed");
  app.add_option("-o,--output", output, "write JSON here instead of stdout");

  auto* verify = app.add_subcommand("verify", "run invariant suites");
  std::string suite = "all";
  verify->add_option("--suite", suite, "suite name or 'all'");
  verify->add_option("--seed", seed, "random seed");

  auto* eval = app.add_subcommand("eval", "evaluate point quantities");
  ImmersionFlags eval_im;
  eval_im.attach(eval);
  int chart = 0;
  std::vector<double> point;
  std::string quantities = "all";
  eval->add_option("--chart", chart, "chart id (sphere kinds have charts 0 and 1)");
  eval->add_option("--point", point, "chart coordinates")->delimiter(',')->required();
  eval->add_option("--quantities", quantities, "comma-separated list or 'all'");

  auto* integ = app.add_subcommand("integrate", "integrate a functional");
  ImmersionFlags int_im;
  int_im.attach(integ);
  std::string functional = "willmore";
  int grid = 0;
  integ->add_option("--functional", functional,
                    "area | willmore | simons | htilde2 | h2 | T2 | divT2 | divdivT | energies");
  integ->add_option("--grid", grid, "coarse grid size (0: defaults)")->check(CLI::NonNegativeNumber);

  auto* flow = app.add_subcommand("flow", "run the graph flow");
  std::string config_path, out_dir = "flow_out";
  flow->add_option("--config", config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
  flow->add_option("--out", out_dir, "output directory");

  auto* lili = app.add_subcommand("lili", "randomized test of the symmetric matrix inequality");
  long trials = 100000;
  lili->add_option("--trials", trials, "number of random tuples")->check(CLI::NonNegativeNumber);
  lili->add_option("--seed", seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  if (const auto st = lagrome_set_threads(threads); st != LAGROME_OK) return report_error(st);

  if (verify->parsed()) {
    int all_pass = 0;
    char* js = nullptr;
    if (const auto st = lagrome_verify_json(suite.c_str(), seed, &all_pass, &js); st != LAGROME_OK)
      return report_error(st);
    if (!emit(take(js), output)) return kExitError;
    return all_pass ? 0 : kExitFail;
  }

  if (eval->parsed() || integ->parsed()) {
    const auto& flags = eval->parsed() ? eval_im : int_im;
    lagrome_immersion* im = nullptr;
    if (const auto st = lagrome_immersion_from_json(flags.to_json().c_str(), &im); st != LAGROME_OK)
      return report_error(st);
    char* js = nullptr;
    lagrome_status st;
    if (eval->parsed()) {
      int n = 0;
      lagrome_immersion_dim(im, &n);
      if (static_cast<int>(point.size()) != n) {
        lagrome_immersion_free(im);
        std::fprintf(stderr, "lagrome: --point needs %d coordinates\n", n);
        return kExitError;
      }
      st = lagrome_eval_json(im, chart, point.data(), quantities.c_str(), &js);
    } else {
      st = lagrome_integrate_json(im, functional.c_str(), grid, &js);
    }
    lagrome_immersion_free(im);
    if (st != LAGROME_OK) return report_error(st);
    return emit(take(js), output) ? 0 : kExitError;
  }

  if (flow->parsed()) {
    std::ifstream in(config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    int code = 0;
    char* js = nullptr;
    if (const auto st = lagrome_flow_run(buf.str().c_str(), out_dir.c_str(), &code, &js); st != LAGROME_OK)
      return report_error(st);
    emit(take(js), output);
    return code;
  }

  if (lili->parsed()) {
    char* js = nullptr;
    if (const auto st = lagrome_lili_random(trials, seed, &js); st != LAGROME_OK) return report_error(st);
    return emit(take(js), output) ? 0 : kExitError;
  }
  return kExitError;
}
