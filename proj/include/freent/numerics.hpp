#pragma once

#include <cstddef>
#include <vector>

namespace freent {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1]; nodes ascend.
QuadRule gauss_legendre(int n);

// Same rule mapped to [a, b].
QuadRule gauss_legendre(int n, double a, double b);

// Pairwise (cascade) summation: deterministic and accurate regardless of the
// order samples were produced in.
double pairwise_sum(const std::vector<double>& xs);

// r-th Catalan number as a double (exact for the desk-scale r used here).
double catalan_number(int r);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t count = 0;
};

// Sample mean and standard error via pairwise sums.
MeanStderr mean_stderr(const std::vector<double>& xs);

}  // namespace freent
