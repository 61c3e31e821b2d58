#pragma once

// Tracial states presented as word-moment oracles.  Every oracle memoizes
// evaluated words in an append-only cache; concurrent lookups are safe and a
// duplicated computation on a race is harmless.

#include <memory>
#include <shared_mutex>
#include <unordered_map>

#include "freent/ncpoly.hpp"
#include "freent/spectral_law.hpp"

namespace freent {

class TraceOracle {
 public:
  virtual ~TraceOracle() = default;

  // Cached evaluation of tau(w).
  cplx operator()(const Word& w) const;
  // Linear extension to polynomials.
  cplx eval(const NCPoly& p) const;

  virtual bool supports(const Variable& v) const = 0;
  // Operator-norm bound for the generator; |tau(w)| <= product of radii.
  virtual double radius(const Variable& v) const = 0;
  // Number of x-generators the oracle models (0 when not applicable).
  virtual int x_count() const { return 0; }

 protected:
  virtual cplx eval_word(const Word& w) const = 0;

 private:
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::string, cplx> cache_;
};

using OraclePtr = std::shared_ptr<const TraceOracle>;

// tau = tr_n on a tuple of Hermitian matrices.
OraclePtr matrix_trace_oracle(const MatrixAssignment& matrices);

// One variable distributed by the given law; other letters are rejected.
OraclePtr law_oracle(const SpectralLaw& law, Variable var);

// The scalar algebra: tau(1) = 1 and no generators.
OraclePtr scalar_oracle();

// Law of (c x_1, c x_2, ...): scales each x-letter by c.  y-letters pass
// through unscaled.
OraclePtr scaled_oracle(OraclePtr base, double c);

// Law of (x_1 + c, x_2 + c, ...): shifts every x-generator by the scalar c.
OraclePtr shifted_oracle(OraclePtr base, double c);

}  // namespace freent
