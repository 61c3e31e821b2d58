#pragma once

// End-to-end inequality experiments on a smoothed one-variable law (or a free
// tuple of copies): an exact matrix-model entropy lower bound, the
// flow-integral entropy upper estimate on the same law, and the margin
// between them with an explicit tolerance.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "freent/chi_star.hpp"
#include "freent/spectral_law.hpp"
#include "freent/trace_oracle.hpp"

namespace freent {

struct ExperimentConfig {
  SpectralLaw base = SpectralLaw::point_mass(0.0);
  int m = 1;                              // free copies of the base law
  double t0 = 1.0;                        // smoothing variance, > 0
  std::vector<int> n_grid = {8, 16, 32};  // strictly increasing matrix sizes
  int degree = 4;                         // Fisher basis degree
  int nodes = 64;                         // flow quadrature nodes
  double u_max = 0.999;
  std::uint64_t seed = 1;
  bool mc_check = true;  // Monte Carlo cross-check of the exact model entropy
  int mc_samples = 2000;
  std::string out;  // optional report path; CSV tables land next to it

  void validate() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Ready-made experiments: "semicircular", "semicircle-shift", "two-point".
ExperimentConfig builtin_config(const std::string& name);

// Joint law of m free copies of the base law.  m > 1 is supported for point
// mass and semicircle bases, where the free product has a closed-form oracle.
OraclePtr base_oracle_for(const ExperimentConfig& cfg);

struct MicrostatesRow {
  int n = 0;
  double exact = 0.0;  // closed-form model entropy at this n
  double mc = 0.0;     // plug-in Monte Carlo estimate, when enabled
  double mc_stderr = 0.0;
  bool has_mc = false;
};

struct MicrostatesBound {
  double value = 0.0;      // headline: the largest-n row, exact column
  double mc_stderr = 0.0;  // its Monte Carlo stderr (0 when mc is off)
  double t_eff = 0.0;      // Gaussian variance of the chosen model
  std::string model;       // description of the matrix model used
  std::string scope = "finite-n proxy for the ultralimit";
  std::vector<MicrostatesRow> per_n;

  nlohmann::json to_json() const;
};

// Entropy of an explicit deterministic-center-plus-Gaussian matrix model of
// the smoothed law, h^(n) = (m/2) log(2 pi e t_eff), maximized over the
// admissible model family: a semicircle base folds its variance into the
// Gaussian factor (the smoothed law is again a semicircle), a point mass
// centers on a scalar matrix, and any other base keeps quantile microstates
// as the center with t_eff = t0.  Every member is a valid lower bound, so the
// best one is reported.
MicrostatesBound microstates_entropy_lower_bound(const ExperimentConfig& cfg);

struct InequalityReport {
  ExperimentConfig config;
  MicrostatesBound chi_lower;
  ChiStarReport chi_star;
  double margin = 0.0;     // chi_star.value - chi_lower.value
  double tolerance = 0.0;  // quadrature error + 3 mc stderr + 1e-6 slack
  bool pass = false;       // margin >= -tolerance
  std::string timestamp;   // the one field that varies between identical runs

  nlohmann::json to_json() const;
};

// Runs both sides on the smoothed law base (+) semicircle(t0) and compares
// them.  Any component failure aborts with the failing stage named.
InequalityReport run_inequality_experiment(const ExperimentConfig& cfg);

// Report JSON to `path`, flow integrand samples to <path>.integrand.csv and
// the per-n entropy table to <path>.per_n.csv.
void write_report_files(const InequalityReport& report, const std::string& path);

// Command-line front end.  Returns 0 on success, 1 on usage or input errors,
// 2 when an inequality experiment reports a violated margin.
int cli_main(int argc, char** argv);

}  // namespace freent
