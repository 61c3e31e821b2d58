#include "freent/microstates.hpp"

#include <cmath>
#include <stdexcept>

namespace freent {

Eigen::MatrixXcd quantile_microstate(const SpectralLaw& law, int n) {
  if (n < 1) throw std::invalid_argument("microstate dimension must be >= 1");
  if (!std::isfinite(law.support_min()) || !std::isfinite(law.support_max()))
    throw std::invalid_argument("microstates need a compactly supported law");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 1; k <= n; ++k)
    out(k - 1, k - 1) = law.quantile((k - 0.5) / n);
  return out;
}

}  // namespace freent
