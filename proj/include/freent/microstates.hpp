#pragma once

// Deterministic n x n approximants of a one-variable law: a diagonal matrix
// of mid-point quantiles, ascending.

#include <Eigen/Dense>

#include "freent/spectral_law.hpp"

namespace freent {

Eigen::MatrixXcd quantile_microstate(const SpectralLaw& law, int n);

}  // namespace freent
