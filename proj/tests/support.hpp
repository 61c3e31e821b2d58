#pragma once

// Shared helpers for the test suites: independent brute-force oracles and
// deterministic random generators.  Everything here is deliberately naive so
// it can serve as a cross-check for the library implementations.

#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "freent/ncpoly.hpp"

namespace freent::testsupport {

// Sums t^(pairs) over all index-matching NON-CROSSING perfect matchings of
// the letter sequence (entries are s-indices).  Enumerates every matching
// and filters, so it is an independent oracle for the pairing recursion.
inline double wick_pairing_oracle(const std::vector<int>& letters, double t) {
  const std::size_t n = letters.size();
  if (n % 2 != 0) return 0.0;
  std::vector<int> partner(n, -1);
  std::vector<std::pair<int, int>> pairs;
  double total = 0.0;

  auto crossing_free = [&]() {
    for (std::size_t a = 0; a < pairs.size(); ++a)
      for (std::size_t b = a + 1; b < pairs.size(); ++b) {
        auto [p1, q1] = pairs[a];
        auto [p2, q2] = pairs[b];
        if (p1 > p2) {
          std::swap(p1, p2);
          std::swap(q1, q2);
        }
        if (p2 < q1 && q1 < q2) return false;  // p1 < p2 < q1 < q2 crosses
      }
    return true;
  };

  std::function<void()> recurse = [&]() {
    std::size_t i = 0;
    while (i < n && partner[i] >= 0) ++i;
    if (i == n) {
      if (crossing_free())
        total += std::pow(t, static_cast<double>(n) / 2.0);
      return;
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (partner[j] >= 0 || letters[j] != letters[i]) continue;
      partner[i] = static_cast<int>(j);
      partner[j] = static_cast<int>(i);
      pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
      recurse();
      pairs.pop_back();
      partner[i] = partner[j] = -1;
    }
  };
  recurse();
  return total;
}

// Number of non-crossing pair partitions of 2r points.
inline double noncrossing_pairing_count(int r) {
  return wick_pairing_oracle(std::vector<int>(2 * r, 1), 1.0);
}

inline Eigen::MatrixXcd random_hermitian(int n, std::mt19937& rng,
                                         double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx{g(rng), g(rng)};
  Eigen::MatrixXcd h = (a + a.adjoint()) / 2.0;
  return scale * h;
}

inline Word random_word(std::mt19937& rng, const std::vector<Variable>& alphabet,
                        int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  Word w;
  const int l = len(rng);
  for (int i = 0; i < l; ++i) w.letters.push_back(alphabet[pick(rng)]);
  return w;
}

// Random polynomial with small Gaussian-integer coefficients, so algebraic
// identities hold exactly in double arithmetic.
inline NCPoly random_poly(std::mt19937& rng,
                          const std::vector<Variable>& alphabet, int max_deg,
                          int terms = 4) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  NCPoly p;
  for (int i = 0; i < terms; ++i) {
    const cplx c{static_cast<double>(coeff(rng)),
                 static_cast<double>(coeff(rng))};
    p.add_term(random_word(rng, alphabet, max_deg), c);
  }
  return p;
}

// tr_n-orthonormal basis of the n x n Hermitian matrices.
inline std::vector<Eigen::MatrixXcd> hermitian_basis(int n) {
  std::vector<Eigen::MatrixXcd> basis;
  const double rn = std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
    e(j, j) = rn;
    basis.push_back(e);
  }
  const double rh = std::sqrt(n / 2.0);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
      e(j, k) = rh;
      e(k, j) = rh;
      basis.push_back(e);
      Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(n, n);
      f(j, k) = cplx{0.0, rh};
      f(k, j) = cplx{0.0, -rh};
      basis.push_back(f);
    }
  return basis;
}

}  // namespace freent::testsupport
