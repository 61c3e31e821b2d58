#pragma once
// Entropy from Fisher information along the semicircular flow: integrate
// (1/2)(m/(1+t) - PhiHat(t)) over t in (0, inf) and add (m/2) log 2pi e,
// where PhiHat(t) is the variational Fisher estimate of the law flowed by a
// free semicircular of variance t.  Since PhiHat is a lower estimate, the
// result is an upper estimate of the entropy up to quadrature and tail error,
// both of which are reported explicitly.
#include <string>
#include <vector>
#include <json.hpp>
#include "freent/trace_oracle.hpp"
namespace freent {
// Quadrature nodes for the substitution u = t/(1+t), which maps (0, inf) to
// (0, 1); dt = du/(1-u)^2.  The grid covers [0, u_max]; the remainder past
// u_max is handled by the tail estimate.
struct FlowGrid {
  std::vector<double> nodes;    // in u, strictly increasing
  std::vector<double> weights;  // positive
  double u_max = 0.999;
  static FlowGrid make(int node_count, double u_max = 0.999);
};
struct IntegrandSample {
  double t = 0.0;
  double target = 0.0;  // m/(1+t)
  double phi = 0.0;     // Fisher estimate of the flow at time t
};
struct ChiStarReport {
  double value = 0.0;  // quadrature + tail + constant
  int degree = 0;
  int m = 0;
  std::vector<IntegrandSample> samples;
  double quadrature = 0.0;      // grid part of the integral
  double tail = 0.0;            // estimated remainder past the grid
  double tail_constant = 0.0;   // C fitted from the last node, phi ~ m/(C+t)
  double constant = 0.0;        // (m/2) log 2 pi e
  double error_estimate = 0.0;  // |full-grid - half-grid| quadrature gap
  double u_max = 0.0;
  int nodes = 0;
  std::vector<std::string> warnings;
  nlohmann::json to_json() const;
};
// Fisher estimate of base flowed by a free semicircular of variance t;
// m is read off the base oracle.
double phi_star_flow(const OraclePtr& base, double t, int degree);
ChiStarReport chi_star_upper(const OraclePtr& base, int m, int degree,
                             const FlowGrid& grid);
}  // namespace freent
