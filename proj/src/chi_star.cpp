#include "freent/chi_star.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "freent/numerics.hpp"
#include "freent/phi_star.hpp"
#include "freent/semicircular.hpp"

namespace freent {

FlowGrid FlowGrid::make(int node_count, double u_max) {
  if (node_count < 2) throw std::invalid_argument("flow grid needs at least 2 nodes");
  if (!(u_max > 0.0) || !(u_max < 1.0))
    throw std::invalid_argument("u_max must lie strictly between 0 and 1");
  const QuadRule rule = gauss_legendre(node_count, 0.0, u_max);
  FlowGrid g;
  g.nodes = rule.nodes;
  g.weights = rule.weights;
  g.u_max = u_max;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (i > 0 && !(g.nodes[i] > g.nodes[i - 1]))
      throw std::logic_error("flow grid nodes must increase");
    if (!(g.weights[i] > 0.0)) throw std::logic_error("flow grid weights must be positive");
  }
  return g;
}

double phi_star_flow(const OraclePtr& base, double t, int degree) {
  if (!(t > 0.0)) throw std::invalid_argument("flow time must be positive");
  const int m = base->x_count();
  if (m < 1) throw std::invalid_argument("base oracle exposes no x variables");
  auto flowed = heat_flow_law(base, t);
  return phi_star_lower(*flowed, m, {}, degree).value;
}

namespace {

// Fisher estimates at each u-node, evaluated by a small worker pool; results
// land at fixed indices so the reduction order never depends on scheduling.
std::vector<double> flow_fisher_at(const OraclePtr& base, int m, int degree,
                                   const std::vector<double>& us) {
  std::vector<double> phi(us.size(), 0.0);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= us.size()) return;
      const double t = us[i] / (1.0 - us[i]);
      auto flowed = heat_flow_law(base, t);
      phi[i] = phi_star_lower(*flowed, m, {}, degree).value;
    }
  };
  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t workers =
      std::min<std::size_t>(us.size(), hw == 0 ? 4 : hw);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return phi;
}

double quadrature_sum(int m, const std::vector<double>& us,
                      const std::vector<double>& ws,
                      const std::vector<double>& phi) {
  std::vector<double> terms(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) {
    const double t = us[i] / (1.0 - us[i]);
    const double jac = 1.0 / ((1.0 - us[i]) * (1.0 - us[i]));
    terms[i] = ws[i] * 0.5 * (m / (1.0 + t) - phi[i]) * jac;
  }
  return pairwise_sum(terms);
}

}  // namespace

nlohmann::json ChiStarReport::to_json() const {
  nlohmann::json j;
  j["value"] = value;
  j["degree"] = degree;
  j["m"] = m;
  j["quadrature"] = quadrature;
  j["tail"] = tail;
  j["tail_constant"] = tail_constant;
  j["constant"] = constant;
  j["error_estimate"] = error_estimate;
  j["u_max"] = u_max;
  j["nodes"] = nodes;
  j["warnings"] = warnings;
  j["samples"] = nlohmann::json::array();
  for (const auto& s : samples)
    j["samples"].push_back({{"t", s.t}, {"target", s.target}, {"phi", s.phi}});
  return j;
}

ChiStarReport chi_star_upper(const OraclePtr& base, int m, int degree,
                             const FlowGrid& grid) {
  if (degree < 1) throw std::invalid_argument("degree must be at least 1");
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (base->x_count() != m)
    throw std::invalid_argument("m does not match the oracle's x variables");

  ChiStarReport rep;
  rep.degree = degree;
  rep.m = m;
  rep.u_max = grid.u_max;
  rep.nodes = static_cast<int>(grid.nodes.size());
  rep.constant = 0.5 * m * std::log(2.0 * M_PI * std::exp(1.0));

  const std::vector<double> phi = flow_fisher_at(base, m, degree, grid.nodes);
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const double t = grid.nodes[i] / (1.0 - grid.nodes[i]);
    rep.samples.push_back({t, m / (1.0 + t), phi[i]});
  }
  rep.quadrature = quadrature_sum(m, grid.nodes, grid.weights, phi);

  // Same truncated integral on a half-density grid; the gap stands in for
  // the quadrature error.
  const FlowGrid half =
      FlowGrid::make(std::max<int>(2, rep.nodes / 2), grid.u_max);
  const std::vector<double> phi_half =
      flow_fisher_at(base, m, degree, half.nodes);
  rep.error_estimate = std::abs(
      rep.quadrature - quadrature_sum(m, half.nodes, half.weights, phi_half));

  // Remainder past the grid: fit phi ~ m/(C+t) at the last node, which is
  // exact for semicircular flows, and integrate the fitted curve to infinity.
  const double cap_t = grid.u_max / (1.0 - grid.u_max);
  const double phi_last = phi.back();
  const double t_last = rep.samples.back().t;
  if (phi_last > 1e-12) {
    rep.tail_constant = m / phi_last - t_last;
    if (rep.tail_constant + cap_t > 0.0) {
      rep.tail = 0.5 * m * std::log((rep.tail_constant + cap_t) / (1.0 + cap_t));
    } else {
      rep.warnings.push_back("tail fit produced a nonpositive shift; tail dropped");
    }
  } else {
    rep.warnings.push_back("vanishing Fisher estimate at the last node; tail dropped");
  }

  int anomalies = 0;
  for (const auto& s : rep.samples)
    if (s.phi > s.target + 1e-9) ++anomalies;
  if (anomalies >= 2)
    rep.warnings.push_back(
        "Fisher estimate exceeds the semicircular target m/(1+t) on " +
        std::to_string(anomalies) + " nodes; the integrand is negative there");

  for (std::size_t i = 1; i < rep.samples.size(); ++i) {
    if (rep.samples[i].phi > rep.samples[i - 1].phi + 1e-6) {
      rep.warnings.push_back("Fisher samples fail to decrease along the flow");
      break;
    }
  }

  rep.value = rep.quadrature + rep.tail + rep.constant;
  return rep;
}

}  // namespace freent
