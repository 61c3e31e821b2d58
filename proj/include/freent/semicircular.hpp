#pragma once

// Semicircular moments, free-independent semicircular extensions of a base
// trace, and the additive semicircular smoothing flow on laws.

#include <memory>

#include "freent/trace_oracle.hpp"

namespace freent {

// k-th moment of the centered semicircle of variance t: odd moments vanish,
// the (2r)-th is t^r times the r-th Catalan number.
double semicircle_moment(int k, double t);

struct SemicircularExtensionSpec {
  OraclePtr base;    // models x/y letters only
  int count = 0;     // adds s_1 .. s_count
  double variance = 1.0;
};

// Extends the base trace by `count` semicircular generators of the given
// variance, freely independent from the base algebra.  Mixed words reduce by
// pairing the first s-letter with each later matching s-letter: a pair at
// positions p < q contributes variance * tau(strictly inner word) * tau(word
// with p..q removed).  Words with an odd count of some s-index vanish.
OraclePtr free_semicircular_extend(const SemicircularExtensionSpec& spec);

// A standard free semicircular m-tuple (common variance), exposed as the
// x-generators x_1 .. x_m.
OraclePtr free_semicircular_family(int m, double variance = 1.0);

// Law of (x_1 + s_1, ..., x_m + s_m) with a free semicircular m-tuple of
// variance t; m is the base oracle's x-count.  t = 0 returns the base.
OraclePtr heat_flow_law(OraclePtr base, double t);

}  // namespace freent
