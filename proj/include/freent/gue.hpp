#pragma once
// Gaussian unitary ensemble tuples under the trace normalization
// E tr_n(S^2) = 1: real diagonal entries N(0, 1/n), off-diagonal real and
// imaginary parts N(0, 1/2n), Hermitian by construction.
#include <cstdint>
#include <vector>
#include <Eigen/Dense>
#include "freent/numerics.hpp"
namespace freent {
struct GueSpec {
  int n = 1;
  int m = 1;
  std::uint64_t seed = 0;
};
// Deterministic in (spec, sample_index); independent entries across indices.
std::vector<Eigen::MatrixXcd> sample_gue(const GueSpec& spec,
                                         std::uint64_t sample_index);
// Monte Carlo mean operator norm of the first tuple entry.
MeanStderr opnorm_stat(const GueSpec& spec, int samples);
}  // namespace freent
