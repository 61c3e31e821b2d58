#pragma once
// Matrix-model side of the entropy comparison: Gaussian ensembles centered at
// deterministic tuples, their exact normalized entropy and Fisher values,
// Monte Carlo estimators for both, the score integration-by-parts check, and
// the asymptotic-freeness deviation table.
//
// Normalizations (trace inner product tr_n throughout):
//   h^(n) = n^-2 h + m log n,   I^(n) = n^-4 I.
#include <cstdint>
#include <string>
#include <vector>
#include <Eigen/Dense>
#include <json.hpp>
#include "freent/gue.hpp"
#include "freent/ncpoly.hpp"
#include "freent/numerics.hpp"
namespace freent {

// X = X0 + sqrt(t) S with S a standard GUE tuple; density proportional to
// exp(-n^2 ||x - X0||^2 / 2t) in tr_n-orthonormal coordinates.
struct GaussianEnsemble {
  std::vector<Eigen::MatrixXcd> center;
  double t = 1.0;
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
};
GaussianEnsemble make_ensemble(std::vector<Eigen::MatrixXcd> center, double t,
                               std::uint64_t seed);
GaussianEnsemble zero_ensemble(int n, int m, double t, std::uint64_t seed);

// (m/2) log(2 pi e t): the n-dependence of the raw Gaussian entropy cancels
// against the m log n correction exactly.
double gaussian_entropy_exact(const GaussianEnsemble& ens);

std::vector<Eigen::MatrixXcd> sample_ensemble(const GaussianEnsemble& ens,
                                              std::uint64_t sample_index);

// Score at a sample: n^2 (X - X0)/t, the tr_n-coordinate log-density gradient.
std::vector<Eigen::MatrixXcd> gaussian_score(const GaussianEnsemble& ens,
                                             const std::vector<Eigen::MatrixXcd>& x);

struct FisherEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  int n = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string normalization = "I^(n) = n^-4 I";
  nlohmann::json to_json() const;
};
// Monte Carlo mean of n^-4 ||score||^2; exact expectation is m/t.
FisherEstimate fisher_mc(const GaussianEnsemble& ens, int samples);

struct EntropyEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  int n = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string normalization = "h^(n) = n^-2 h + m log n";
  nlohmann::json to_json() const;
};

struct MixtureComponent {
  double weight = 1.0;
  std::vector<Eigen::MatrixXcd> center;
  double t = 1.0;
};
struct GaussianMixture {
  std::vector<MixtureComponent> components;
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
};
GaussianMixture make_mixture(std::vector<MixtureComponent> components,
                             std::uint64_t seed);
// Total tr_n variance sum_j E tr_n((X_j - E X_j)^2); h^(n) is bounded by
// (m/2) log(2 pi e Var/m).
double mixture_trace_variance(const GaussianMixture& mix);
// Plug-in estimator E[-n^-2 log rho(X)] + m log n over mixture samples.
EntropyEstimate entropy_mc(const GaussianMixture& mix, int samples);
EntropyEstimate entropy_mc(const GaussianEnsemble& ens, int samples);

// Paired Monte Carlo means of n^-2 <score_j, f_j> and tr_n (x) tr_n(d_j f_j)
// at the same samples; the residual mean must be 0 within noise for Gaussian
// ensembles.
struct IbpResult {
  int j = 1;
  double lhs_mean = 0.0, lhs_stderr = 0.0;
  double rhs_mean = 0.0, rhs_stderr = 0.0;
  double residual_mean = 0.0, residual_stderr = 0.0;
  nlohmann::json to_json() const;
};
std::vector<IbpResult> ibp_check(const GaussianEnsemble& ens,
                                 const std::vector<NCPoly>& f,
                                 const MatrixAssignment& y_assign, int samples);

// |[h(t1) - h(t0)] - (1/2) quadrature of m/u over [t0, t1]|; both sides are
// (m/2) log(t1/t0) in closed form.
double heat_flow_identity_residual(int m, double t0, double t1, int nodes = 32);

// Monte Carlo word traces of GUE tuples (plus fixed deterministic letters)
// against the exact free-semicircular oracle values.
struct FreenessRow {
  Word word;
  double mc_mean = 0.0;
  double stderr_ = 0.0;
  double oracle = 0.0;
  double deviation = 0.0;
};
std::vector<FreenessRow> freeness_deviation_table(
    int n, int m, const MatrixAssignment& y_assign,
    const std::vector<Word>& words, int samples, std::uint64_t seed);

}  // namespace freent
