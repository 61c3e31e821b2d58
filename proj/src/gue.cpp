#include "freent/gue.hpp"

#include <cmath>
#include <stdexcept>

#include "freent/rng.hpp"

namespace freent {

namespace {
constexpr std::uint64_t kGueTag = 0x475545ull;  // stream domain separator
}

std::vector<Eigen::MatrixXcd> sample_gue(const GueSpec& spec,
                                         std::uint64_t sample_index) {
  if (spec.n < 1 || spec.m < 1)
    throw std::invalid_argument("GUE spec needs n >= 1 and m >= 1");
  const int n = spec.n;
  const double diag_sd = 1.0 / std::sqrt(double(n));
  const double off_sd = 1.0 / std::sqrt(2.0 * n);
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(spec.m);
  for (int k = 0; k < spec.m; ++k) {
    Eigen::MatrixXcd s(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const std::uint64_t key = derive_key(
            {spec.seed, kGueTag, std::uint64_t(n), std::uint64_t(k),
             sample_index, std::uint64_t(i), std::uint64_t(j)});
        const NormalPair z = normal_pair(key);
        if (i == j) {
          s(i, i) = diag_sd * z.a;
        } else {
          s(i, j) = std::complex<double>{off_sd * z.a, off_sd * z.b};
          s(j, i) = std::conj(s(i, j));
        }
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

MeanStderr opnorm_stat(const GueSpec& spec, int samples) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  std::vector<double> norms(samples);
  for (int s = 0; s < samples; ++s) {
    const auto tup = sample_gue(spec, std::uint64_t(s));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(tup[0]);
    const auto& ev = es.eigenvalues();
    norms[s] = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  }
  return mean_stderr(norms);
}

}  // namespace freent
