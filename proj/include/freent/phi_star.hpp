#pragma once

// Degree-truncated variational lower estimates of the free Fisher
// information: over test polynomials f in the span of all words of length
// <= d, maximize |tau (x) tau(d_j f)|^2 subject to ||f||_2 <= 1.  The
// maximum is a pseudo-inverse quadratic form in the Gram matrix of the
// basis words.

#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "freent/ncpoly.hpp"
#include "freent/trace_oracle.hpp"

namespace freent {

struct BasisSpec {
  int x_count = 1;
  std::vector<int> y_indices;
  int degree = 1;
  std::vector<Word> words;  // all words of length <= degree, length-then-lex

  static BasisSpec make(int x_count, std::vector<int> y_indices, int degree);
  std::size_t size() const { return words.size(); }
};

// G[q][p] = tau(adjoint(w_q) w_p).  Verified Hermitian within 1e-10 and then
// symmetrized for the solve.
Eigen::MatrixXcd gram_matrix(const BasisSpec& basis, const TraceOracle& tau);

// L[p] = tau (x) tau (d_j w_p).
Eigen::VectorXcd divergence_functional(const BasisSpec& basis,
                                       const TraceOracle& tau, int j);

struct PhiStarEstimate {
  double value = 0.0;
  int degree = 0;
  std::vector<double> per_coordinate;
  int gram_rank = 0;
  double cutoff = 0.0;
  bool diverging = false;

  nlohmann::json to_json() const;
};

// Sum over coordinates of the truncated variational maximum.  Eigenvalues of
// the Gram below 1e-10 of the largest are treated as null directions.  The
// diverging flag is set when the value passes 1e6, or when the functional
// fails to vanish on a null direction (the sup is then unbounded already at
// this degree, as happens for purely atomic laws); the reported value is the
// finite range-restricted maximum either way.
PhiStarEstimate phi_star_lower(const TraceOracle& tau, int x_count,
                               const std::vector<int>& y_indices, int degree);

// max over basis words p of |tau(adjoint(xi) p) - tau (x) tau(d_j p)|: zero
// exactly when xi satisfies the conjugate relation on the tested span.
double conjugate_residual(const TraceOracle& tau, const NCPoly& xi, int j,
                          const BasisSpec& basis);

}  // namespace freent
