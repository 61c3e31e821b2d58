#include "freent/harness.hpp"

#include <cmath>
#include <ctime>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "freent/microstates.hpp"
#include "freent/rmt.hpp"
#include "freent/rng.hpp"
#include "freent/semicircular.hpp"
#include "freent/version.hpp"

namespace freent {

namespace {

constexpr std::uint64_t kEntropyMcTag = 0x4d435748ull;

// The matrix model actually used for the lower bound: a deterministic center
// plus sqrt(t_eff) times a standard GUE tuple.
struct ModelChoice {
  double t_eff = 0.0;
  bool quantile_center = false;  // otherwise the center is c * identity
  double center_scalar = 0.0;
  std::string label;
};

ModelChoice choose_model(const ExperimentConfig& cfg) {
  ModelChoice model;
  switch (cfg.base.kind()) {
    case LawKind::Semicircle:
      // base (+) semicircle(t0) is semicircle(v + t0) around the same
      // center, so the base variance can ride inside the Gaussian factor.
      // That member of the model family has the largest exact entropy.
      model.t_eff = cfg.base.semicircle_variance() + cfg.t0;
      model.center_scalar = cfg.base.semicircle_center();
      model.label =
          "scalar center, base variance folded into the Gaussian factor";
      break;
    case LawKind::Atoms:
      if (cfg.base.is_point_mass()) {
        model.t_eff = cfg.t0;
        model.center_scalar = cfg.base.atom_points().front();
        model.label = "scalar center plus Gaussian noise";
      } else {
        model.t_eff = cfg.t0;
        model.quantile_center = true;
        model.label = "quantile-diagonal center plus Gaussian noise";
      }
      break;
    case LawKind::Density:
      model.t_eff = cfg.t0;
      model.quantile_center = true;
      model.label = "quantile-diagonal center plus Gaussian noise";
      break;
  }
  return model;
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void require_known_fields(const nlohmann::json& j,
                          std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* name : allowed)
      if (item.key() == name) known = true;
    if (!known)
      throw std::invalid_argument("unknown config field: " + item.key());
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (!(t0 > 0.0))
    throw std::invalid_argument(
        "smoothing variance t0 must be positive; the matrix model needs a "
        "Gaussian factor");
  if (n_grid.empty()) throw std::invalid_argument("n_grid must be nonempty");
  int prev = 0;
  for (int n : n_grid) {
    if (n <= prev)
      throw std::invalid_argument("n_grid must be strictly increasing");
    prev = n;
  }
  if (degree < 1) throw std::invalid_argument("degree must be at least 1");
  if (nodes < 2) throw std::invalid_argument("nodes must be at least 2");
  if (!(u_max > 0.0) || !(u_max < 1.0))
    throw std::invalid_argument("u_max must lie in (0, 1)");
  if (mc_check && mc_samples < 2)
    throw std::invalid_argument("mc_samples must be at least 2");
  if (m > 1 && !(base.kind() == LawKind::Semicircle || base.is_point_mass()))
    throw std::invalid_argument(
        "m > 1 needs a point mass or semicircle base; the free product of "
        "general laws has no closed-form oracle here");
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  require_known_fields(j, {"base", "m", "t0", "n_grid", "degree", "nodes",
                           "u_max", "seed", "mc_check", "mc_samples", "out"});
  ExperimentConfig cfg;
  cfg.base = SpectralLaw::from_json(j.at("base"));
  cfg.m = j.value("m", 1);
  cfg.t0 = j.value("t0", 1.0);
  if (j.contains("n_grid")) cfg.n_grid = j.at("n_grid").get<std::vector<int>>();
  cfg.degree = j.value("degree", 4);
  cfg.nodes = j.value("nodes", 64);
  cfg.u_max = j.value("u_max", 0.999);
  cfg.seed = j.value("seed", std::uint64_t{1});
  cfg.mc_check = j.value("mc_check", true);
  cfg.mc_samples = j.value("mc_samples", 2000);
  cfg.out = j.value("out", std::string{});
  cfg.validate();
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"base", base.to_json()},
          {"m", m},
          {"t0", t0},
          {"n_grid", n_grid},
          {"degree", degree},
          {"nodes", nodes},
          {"u_max", u_max},
          {"seed", seed},
          {"mc_check", mc_check},
          {"mc_samples", mc_samples},
          {"out", out}};
}

ExperimentConfig builtin_config(const std::string& name) {
  ExperimentConfig cfg;
  if (name == "semicircular") {
    cfg.base = SpectralLaw::point_mass(0.0);
    cfg.t0 = 1.0;
  } else if (name == "semicircle-shift") {
    cfg.base = SpectralLaw::semicircle(1.0, 0.5);
    cfg.t0 = 1.0;
  } else if (name == "two-point") {
    cfg.base = SpectralLaw::atoms({-1.0, 1.0}, {0.5, 0.5});
    cfg.t0 = 0.5;
  } else {
    throw std::invalid_argument(
        "unknown builtin \"" + name +
        "\" (expected semicircular, semicircle-shift, or two-point)");
  }
  return cfg;
}

OraclePtr base_oracle_for(const ExperimentConfig& cfg) {
  if (cfg.m == 1) return law_oracle(cfg.base, xvar(1));
  if (cfg.base.is_point_mass()) {
    // m free copies of a point mass: every word with an x-letter has the
    // shifted-zero trace; scaling a semicircular family by 0 models the
    // centered case exactly.
    OraclePtr zero = scaled_oracle(free_semicircular_family(cfg.m, 1.0), 0.0);
    const double c = cfg.base.atom_points().front();
    return c == 0.0 ? zero : shifted_oracle(zero, c);
  }
  if (cfg.base.kind() == LawKind::Semicircle) {
    OraclePtr fam =
        free_semicircular_family(cfg.m, cfg.base.semicircle_variance());
    const double c = cfg.base.semicircle_center();
    return c == 0.0 ? fam : shifted_oracle(fam, c);
  }
  throw std::invalid_argument(
      "m > 1 needs a point mass or semicircle base; the free product of "
      "general laws has no closed-form oracle here");
}

nlohmann::json MicrostatesBound::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const MicrostatesRow& row : per_n) {
    nlohmann::json r = {{"n", row.n}, {"exact", row.exact}};
    if (row.has_mc) {
      r["mc"] = row.mc;
      r["mc_stderr"] = row.mc_stderr;
    }
    rows.push_back(std::move(r));
  }
  return {{"value", value},   {"mc_stderr", mc_stderr}, {"t_eff", t_eff},
          {"model", model},   {"scope", scope},         {"per_n", rows}};
}

MicrostatesBound microstates_entropy_lower_bound(const ExperimentConfig& cfg) {
  cfg.validate();
  const ModelChoice model = choose_model(cfg);
  MicrostatesBound out;
  out.t_eff = model.t_eff;
  out.model = model.label;
  const double exact =
      0.5 * cfg.m *
      std::log(2.0 * std::numbers::pi * std::exp(1.0) * model.t_eff);
  for (int n : cfg.n_grid) {
    MicrostatesRow row;
    row.n = n;
    row.exact = exact;
    if (cfg.mc_check) {
      std::vector<Eigen::MatrixXcd> center;
      if (model.quantile_center) {
        center.push_back(quantile_microstate(cfg.base, n));
      } else {
        for (int j = 0; j < cfg.m; ++j)
          center.push_back(model.center_scalar *
                           Eigen::MatrixXcd::Identity(n, n));
      }
      GaussianEnsemble ens = make_ensemble(
          std::move(center), model.t_eff,
          derive_key({cfg.seed, kEntropyMcTag, std::uint64_t(n)}));
      EntropyEstimate est = entropy_mc(ens, cfg.mc_samples);
      row.mc = est.value;
      row.mc_stderr = est.stderr_;
      row.has_mc = true;
    }
    out.per_n.push_back(row);
  }
  const MicrostatesRow& head = out.per_n.back();
  out.value = head.exact;
  out.mc_stderr = head.has_mc ? head.mc_stderr : 0.0;
  return out;
}

nlohmann::json InequalityReport::to_json() const {
  return {{"version", kVersion},
          {"config", config.to_json()},
          {"chi_lower", chi_lower.to_json()},
          {"chi_star", chi_star.to_json()},
          {"margin", margin},
          {"tolerance", tolerance},
          {"verdict", pass ? "pass" : "fail"},
          {"pass", pass},
          {"timestamp", timestamp}};
}

InequalityReport run_inequality_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  auto stage = [](const char* name, auto&& fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("stage ") + name + ": " + e.what());
    }
  };
  InequalityReport rep;
  rep.config = cfg;
  rep.chi_lower = stage("microstates-lower-bound",
                        [&] { return microstates_entropy_lower_bound(cfg); });
  OraclePtr smoothed = stage("smoothed-law-oracle", [&] {
    return heat_flow_law(base_oracle_for(cfg), cfg.t0);
  });
  rep.chi_star = stage("flow-integral-upper-estimate", [&] {
    return chi_star_upper(smoothed, cfg.m, cfg.degree,
                          FlowGrid::make(cfg.nodes, cfg.u_max));
  });
  rep.margin = rep.chi_star.value - rep.chi_lower.value;
  rep.tolerance =
      rep.chi_star.error_estimate + 3.0 * rep.chi_lower.mc_stderr + 1e-6;
  rep.pass = rep.margin >= -rep.tolerance;
  rep.timestamp = utc_timestamp();
  return rep;
}

void write_report_files(const InequalityReport& report,
                        const std::string& path) {
  if (path.empty()) throw std::invalid_argument("empty report path");
  {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << report.to_json().dump(2) << "\n";
  }
  {
    std::ofstream f(path + ".integrand.csv");
    if (!f) throw std::runtime_error("cannot write " + path + ".integrand.csv");
    f << "t,target,phi\n";
    for (const IntegrandSample& s : report.chi_star.samples)
      f << s.t << "," << s.target << "," << s.phi << "\n";
  }
  {
    std::ofstream f(path + ".per_n.csv");
    if (!f) throw std::runtime_error("cannot write " + path + ".per_n.csv");
    f << "n,exact,mc,mc_stderr\n";
    for (const MicrostatesRow& row : report.chi_lower.per_n) {
      f << row.n << "," << row.exact << ",";
      if (row.has_mc)
        f << row.mc << "," << row.mc_stderr;
      else
        f << ",";
      f << "\n";
    }
  }
}

}  // namespace freent
