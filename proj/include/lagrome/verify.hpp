#pragma once

// Invariant suites over the immersion catalog and seeded random graphs.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lagrome/immersion.hpp"

namespace lagrome {

struct CheckRow {
  std::string name;
  std::string paper_ref;  // identity being checked
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct CatalogMember {
  std::string label;
  ImmersionSpec spec;
};

/// Whitney spheres (n = 2, 3; r = 1, 2; A = 0 or seeded), Whitney spheres in
/// CP^n (theta = 0.3, 1.0), product tori and the plane.
std::vector<CatalogMember> catalog(std::uint64_t seed);
std::vector<CatalogMember> whitney_members(std::uint64_t seed);

/// Band-limited trigonometric potential, modes |k_j| <= 2, total amplitude <= 0.3.
std::string random_potential(int n, std::mt19937_64& rng);
/// Seeded chart points inside the open chart (polar angles in [0.2, pi - 0.2]).
std::vector<ChartPoint> sample_points(const ImmersionSpec& spec, int count, std::mt19937_64& rng);

std::vector<std::string> suite_names();
/// Runs one suite ("all" runs every suite).  Throws std::invalid_argument for unknown names.
std::vector<CheckRow> run_suite(const std::string& suite, std::uint64_t seed);

std::string rows_to_json(const std::vector<CheckRow>& rows);

}  // namespace lagrome
