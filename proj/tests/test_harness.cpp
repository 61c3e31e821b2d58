#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "freent/harness.hpp"
#include "freent/ncpoly.hpp"
#include "freent/semicircular.hpp"

using namespace freent;
namespace fs = std::filesystem;

namespace {

const double kHalfLog2PiE = 0.5 * std::log(2.0 * M_PI * std::exp(1.0));
const double kHalfLog4PiE = 0.5 * std::log(4.0 * M_PI * std::exp(1.0));
const double kHalfLogPiE = 0.5 * std::log(M_PI * std::exp(1.0));

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "freent-harness-tests";
  fs::create_directories(dir);
  return dir;
}

int call_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "freent");
  std::vector<std::vector<char>> store;
  std::vector<char*> argv;
  for (const std::string& s : args) {
    store.emplace_back(s.begin(), s.end());
    store.back().push_back('\0');
  }
  for (std::vector<char>& v : store) argv.push_back(v.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream f(path);
  REQUIRE(f);
  nlohmann::json j;
  f >> j;
  return j;
}

int count_lines(const fs::path& path) {
  std::ifstream f(path);
  REQUIRE(f);
  int lines = 0;
  std::string line;
  while (std::getline(f, line)) ++lines;
  return lines;
}

Word word_of(std::initializer_list<Variable> letters) {
  Word w = Word::unit();
  for (Variable v : letters) w = w.concat(Word::single(v));
  return w;
}

}  // namespace

TEST_CASE("builtin experiment configs") {
  const ExperimentConfig sc = builtin_config("semicircular");
  CHECK(sc.base.is_point_mass());
  CHECK(sc.base.atom_points().front() == 0.0);
  CHECK(sc.t0 == 1.0);
  CHECK(sc.m == 1);

  const ExperimentConfig shift = builtin_config("semicircle-shift");
  CHECK(shift.base.kind() == LawKind::Semicircle);
  CHECK(shift.base.semicircle_variance() == 1.0);
  CHECK(shift.base.semicircle_center() == 0.5);
  CHECK(shift.t0 == 1.0);

  const ExperimentConfig two = builtin_config("two-point");
  CHECK(two.base.atom_points() == std::vector<double>{-1.0, 1.0});
  CHECK(two.t0 == 0.5);

  CHECK_THROWS_AS(builtin_config("bogus"), std::invalid_argument);
}

TEST_CASE("config validation and JSON round trip") {
  const ExperimentConfig minimal = ExperimentConfig::from_json(
      nlohmann::json{{"base", {{"type", "point"}, {"value", 0.0}}}});
  CHECK(minimal.m == 1);
  CHECK(minimal.t0 == 1.0);
  CHECK(minimal.n_grid == std::vector<int>{8, 16, 32});
  CHECK(minimal.degree == 4);
  CHECK(minimal.nodes == 64);
  CHECK(minimal.u_max == 0.999);
  CHECK(minimal.seed == 1);
  CHECK(minimal.mc_check);
  CHECK(minimal.mc_samples == 2000);
  CHECK(minimal.out.empty());

  ExperimentConfig cfg = builtin_config("two-point");
  cfg.seed = 99;
  cfg.n_grid = {4, 8};
  cfg.out = "report.json";
  const ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
  CHECK(back.to_json().dump() == cfg.to_json().dump());

  auto broken = [](nlohmann::json patch) {
    nlohmann::json j = builtin_config("semicircular").to_json();
    for (const auto& item : patch.items()) j[item.key()] = item.value();
    return j;
  };
  CHECK_THROWS_AS(ExperimentConfig::from_json(broken({{"typo_field", 1}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_json(broken({{"t0", 0.0}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      ExperimentConfig::from_json(broken({{"n_grid", {8, 8, 16}}})),
      std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_json(broken({{"n_grid", nlohmann::json::array()}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_json(broken({{"degree", 0}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_json(broken({{"nodes", 1}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_json(broken({{"u_max", 1.0}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_json(broken({{"m", 0}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_json(broken({{"mc_samples", 1}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      ExperimentConfig::from_json(broken(
          {{"m", 2},
           {"base",
            {{"type", "density"}, {"expr", "uniform"}, {"support", {-1, 1}}}}})),
      std::invalid_argument);
}

TEST_CASE("free copies of a base law") {
  ExperimentConfig cfg;
  cfg.base = SpectralLaw::point_mass(0.0);
  cfg.m = 2;
  const OraclePtr zero2 = base_oracle_for(cfg);
  CHECK(zero2->x_count() == 2);
  CHECK((*zero2)(word_of({xvar(1)})).real() == 0.0);
  CHECK((*zero2)(word_of({xvar(1), xvar(1)})).real() == 0.0);

  // The heat flow turns the zero pair into a standard free semicircular pair.
  const OraclePtr flowed = heat_flow_law(zero2, 1.0);
  CHECK((*flowed)(word_of({xvar(1), xvar(1)})).real() == doctest::Approx(1.0));
  CHECK((*flowed)(word_of({xvar(1), xvar(1), xvar(1), xvar(1)})).real() ==
        doctest::Approx(2.0));
  CHECK((*flowed)(word_of({xvar(1), xvar(2)})).real() == doctest::Approx(0.0));
  CHECK((*flowed)(word_of({xvar(1), xvar(2), xvar(1), xvar(2)})).real() ==
        doctest::Approx(0.0));

  cfg.base = SpectralLaw::semicircle(0.25);
  const OraclePtr pair = base_oracle_for(cfg);
  CHECK((*pair)(word_of({xvar(1), xvar(1)})).real() == doctest::Approx(0.25));
  CHECK((*pair)(word_of({xvar(1), xvar(1), xvar(1), xvar(1)})).real() ==
        doctest::Approx(0.125));
  CHECK((*pair)(word_of({xvar(1), xvar(2), xvar(1), xvar(2)})).real() ==
        doctest::Approx(0.0));

  cfg.base = SpectralLaw::point_mass(0.5);
  const OraclePtr shifted = base_oracle_for(cfg);
  CHECK((*shifted)(word_of({xvar(1)})).real() == doctest::Approx(0.5));
  CHECK((*shifted)(word_of({xvar(1), xvar(2)})).real() == doctest::Approx(0.25));

  cfg.base = SpectralLaw::semicircle(1.0, 0.5);
  const OraclePtr shifted_pair = base_oracle_for(cfg);
  CHECK((*shifted_pair)(word_of({xvar(1)})).real() == doctest::Approx(0.5));
  CHECK((*shifted_pair)(word_of({xvar(1), xvar(1)})).real() ==
        doctest::Approx(1.25));

  cfg.base = SpectralLaw::density("uniform", -1.0, 1.0);
  CHECK_THROWS_AS(base_oracle_for(cfg), std::invalid_argument);
  cfg.m = 1;
  CHECK(base_oracle_for(cfg)->x_count() == 1);
}

TEST_CASE("entropy lower bound: closed forms per model") {
  ExperimentConfig cfg;
  cfg.base = SpectralLaw::point_mass(0.0);
  cfg.t0 = 1.0;
  cfg.mc_check = false;

  MicrostatesBound b = microstates_entropy_lower_bound(cfg);
  CHECK(b.value == doctest::Approx(kHalfLog2PiE).epsilon(1e-12));
  CHECK(b.t_eff == 1.0);
  CHECK(b.per_n.size() == cfg.n_grid.size());
  for (const MicrostatesRow& row : b.per_n) {
    CHECK(row.exact == b.value);
    CHECK_FALSE(row.has_mc);
  }
  CHECK(b.mc_stderr == 0.0);
  CHECK(b.scope == "finite-n proxy for the ultralimit");
  CHECK(b.model.find("scalar") != std::string::npos);

  cfg.t0 = std::exp(1.0) / (2.0 * M_PI);
  CHECK(microstates_entropy_lower_bound(cfg).value ==
        doctest::Approx(1.0).epsilon(1e-12));

  cfg.t0 = 1.0;
  cfg.m = 2;
  CHECK(microstates_entropy_lower_bound(cfg).value ==
        doctest::Approx(2.0 * kHalfLog2PiE).epsilon(1e-12));

  // A semicircle base folds its variance into the Gaussian factor.
  cfg = builtin_config("semicircle-shift");
  cfg.mc_check = false;
  b = microstates_entropy_lower_bound(cfg);
  CHECK(b.t_eff == 2.0);
  CHECK(b.value == doctest::Approx(kHalfLog4PiE).epsilon(1e-12));

  cfg = builtin_config("two-point");
  cfg.mc_check = false;
  b = microstates_entropy_lower_bound(cfg);
  CHECK(b.t_eff == 0.5);
  CHECK(b.value == doctest::Approx(kHalfLogPiE).epsilon(1e-12));
  CHECK(b.model.find("quantile") != std::string::npos);

  cfg.base = SpectralLaw::density("uniform", -1.0, 1.0);
  cfg.t0 = 0.25;
  b = microstates_entropy_lower_bound(cfg);
  CHECK(b.t_eff == 0.25);
  CHECK(b.value ==
        doctest::Approx(kHalfLog2PiE - 0.5 * std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("entropy lower bound: Monte Carlo cross-check") {
  ExperimentConfig cfg = builtin_config("two-point");
  cfg.n_grid = {4, 8};
  cfg.mc_samples = 400;
  const MicrostatesBound b = microstates_entropy_lower_bound(cfg);
  REQUIRE(b.per_n.size() == 2);
  for (const MicrostatesRow& row : b.per_n) {
    REQUIRE(row.has_mc);
    CHECK(row.mc_stderr > 0.0);
    CHECK(std::abs(row.mc - row.exact) <= 5.0 * row.mc_stderr);
  }
  CHECK(b.mc_stderr == b.per_n.back().mc_stderr);

  const MicrostatesBound again = microstates_entropy_lower_bound(cfg);
  CHECK(again.per_n[0].mc == b.per_n[0].mc);
  CHECK(again.per_n[1].mc == b.per_n[1].mc);

  cfg.seed = 7;
  const MicrostatesBound reseeded = microstates_entropy_lower_bound(cfg);
  CHECK(reseeded.per_n[1].mc != b.per_n[1].mc);
  CHECK(reseeded.value == b.value);  // the headline is the exact column
}

TEST_CASE("inequality experiment: semicircular equality case") {
  ExperimentConfig cfg = builtin_config("semicircular");
  cfg.n_grid = {8, 16};
  cfg.mc_samples = 300;
  const InequalityReport rep = run_inequality_experiment(cfg);
  CHECK(rep.chi_lower.value == doctest::Approx(kHalfLog2PiE).epsilon(1e-12));
  CHECK(rep.chi_star.value == doctest::Approx(kHalfLog2PiE).epsilon(1e-9));
  CHECK(std::abs(rep.margin) <= 1e-6);
  for (const IntegrandSample& s : rep.chi_star.samples)
    CHECK(std::abs(s.target - s.phi) <= 1e-8);
  CHECK(rep.pass);
  CHECK(rep.tolerance >= 1e-6);
  CHECK_FALSE(rep.timestamp.empty());
}

TEST_CASE("inequality experiment: shifted semicircle equality case") {
  ExperimentConfig cfg = builtin_config("semicircle-shift");
  cfg.n_grid = {8, 16};
  cfg.mc_samples = 300;
  const InequalityReport rep = run_inequality_experiment(cfg);
  CHECK(rep.chi_lower.value == doctest::Approx(kHalfLog4PiE).epsilon(1e-12));
  CHECK(rep.chi_star.value == doctest::Approx(kHalfLog4PiE).epsilon(1e-5));
  CHECK(std::abs(rep.margin) <= 1e-5);
  CHECK(rep.pass);
}

TEST_CASE("inequality experiment: two-point strict case and determinism") {
  ExperimentConfig cfg = builtin_config("two-point");
  cfg.n_grid = {4, 8};
  cfg.mc_samples = 200;
  cfg.nodes = 32;
  const InequalityReport rep = run_inequality_experiment(cfg);
  CHECK(rep.margin > 0.0);
  CHECK(rep.pass);
  CHECK(rep.to_json()["verdict"] == "pass");

  const InequalityReport rerun = run_inequality_experiment(cfg);
  nlohmann::json a = rep.to_json();
  nlohmann::json b = rerun.to_json();
  a.erase("timestamp");
  b.erase("timestamp");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("inequality experiment: free pair of semicircles") {
  ExperimentConfig cfg;
  cfg.base = SpectralLaw::semicircle(1.0);
  cfg.m = 2;
  cfg.t0 = 1.0;
  cfg.n_grid = {4, 8};
  cfg.degree = 2;
  cfg.nodes = 32;
  cfg.mc_check = false;
  const InequalityReport rep = run_inequality_experiment(cfg);
  CHECK(rep.chi_lower.value ==
        doctest::Approx(2.0 * kHalfLog4PiE).epsilon(1e-12));
  CHECK(std::abs(rep.margin) <= 1e-5);
  CHECK(rep.pass);
}

TEST_CASE("report files") {
  ExperimentConfig cfg = builtin_config("semicircular");
  cfg.n_grid = {4, 8};
  cfg.mc_samples = 100;
  cfg.nodes = 16;
  const InequalityReport rep = run_inequality_experiment(cfg);
  const fs::path base = scratch_dir() / "report.json";
  write_report_files(rep, base.string());
  CHECK(read_json(base).dump(2) == rep.to_json().dump(2));
  CHECK(count_lines(base.string() + ".integrand.csv") == cfg.nodes + 1);
  CHECK(count_lines(base.string() + ".per_n.csv") ==
        static_cast<int>(cfg.n_grid.size()) + 1);
  CHECK_THROWS_AS(write_report_files(rep, ""), std::invalid_argument);
}

TEST_CASE("cli: usage errors exit 1") {
  CHECK(call_cli({"--version"}) == 0);
  CHECK(call_cli({}) == 1);
  CHECK(call_cli({"bogus"}) == 1);
  CHECK(call_cli({"rmt"}) == 1);
  CHECK(call_cli({"phi-star", "--law", "no-such-file.json", "--quiet"}) == 1);
  CHECK(call_cli({"verify-inequality", "--quiet"}) == 1);
  CHECK(call_cli({"verify-inequality", "--builtin", "nope", "--quiet"}) == 1);
  CHECK(call_cli({"verify-inequality", "--builtin", "two-point", "--config",
                  "x.json", "--quiet"}) == 1);
}

TEST_CASE("cli: estimator subcommands") {
  const fs::path dir = scratch_dir();

  CHECK(call_cli({"phi-star", "--quiet"}) == 0);
  const fs::path phi_out = dir / "phi.json";
  CHECK(call_cli({"phi-star", "--law", R"({"type": "point", "value": 0.0})",
                  "--degree", "3", "--out", phi_out.string(), "--quiet"}) == 0);
  nlohmann::json pj = read_json(phi_out);
  CHECK(pj["version"] == "0.1.0");
  CHECK(pj["diverging"].get<bool>());

  const fs::path chi_out = dir / "chi.json";
  CHECK(call_cli({"chi-star", "--nodes", "16", "--out", chi_out.string(),
                  "--quiet"}) == 0);
  nlohmann::json cj = read_json(chi_out);
  CHECK(cj["value"].get<double>() ==
        doctest::Approx(kHalfLog2PiE).epsilon(1e-6));
  CHECK(cj.contains("version"));

  CHECK(call_cli({"rmt", "gue", "--n", "8", "--samples", "10", "--quiet"}) ==
        0);

  const fs::path ibp_out = dir / "ibp.json";
  CHECK(call_cli({"rmt", "ibp-check", "--n", "6", "--samples", "50", "--f",
                  "1*x1", "--out", ibp_out.string(), "--quiet"}) == 0);
  nlohmann::json ij = read_json(ibp_out);
  REQUIRE(ij["results"].size() == 1);
  CHECK(ij["results"][0]["rhs_mean"].get<double>() == doctest::Approx(1.0));

  CHECK(call_cli({"rmt", "entropy", "--n", "8", "--samples", "100",
                  "--quiet"}) == 0);

  const fs::path fre_out = dir / "freeness.json";
  CHECK(call_cli({"freeness-table", "--n", "20", "--m", "1", "--samples", "20",
                  "--max-len", "2", "--out", fre_out.string(), "--quiet"}) ==
        0);
  nlohmann::json fj = read_json(fre_out);
  REQUIRE(fj["rows"].size() == 2);
  CHECK(fj["rows"][0]["oracle"].get<double>() == 0.0);
  CHECK(fj["rows"][1]["oracle"].get<double>() == 1.0);
}

TEST_CASE("cli: verify-inequality") {
  const fs::path dir = scratch_dir();
  const fs::path cfg_path = dir / "two-point.json";
  {
    ExperimentConfig cfg = builtin_config("two-point");
    cfg.n_grid = {4, 8};
    cfg.mc_samples = 100;
    cfg.nodes = 16;
    std::ofstream f(cfg_path);
    f << cfg.to_json().dump(2) << "\n";
  }
  const fs::path rep_path = dir / "two-point-report.json";
  CHECK(call_cli({"verify-inequality", "--config", cfg_path.string(), "--out",
                  rep_path.string(), "--quiet"}) == 0);
  nlohmann::json rj = read_json(rep_path);
  CHECK(rj["verdict"] == "pass");
  CHECK(rj["margin"].get<double>() > 0.0);
  CHECK(rj["version"] == "0.1.0");
  CHECK(fs::exists(rep_path.string() + ".integrand.csv"));
  CHECK(fs::exists(rep_path.string() + ".per_n.csv"));

  // A seed override changes the Monte Carlo column but not the verdict.
  const fs::path rep2_path = dir / "two-point-report-2.json";
  CHECK(call_cli({"verify-inequality", "--config", cfg_path.string(), "--seed",
                  "9", "--out", rep2_path.string(), "--quiet"}) == 0);
  nlohmann::json rj2 = read_json(rep2_path);
  CHECK(rj2["config"]["seed"] == 9);
  CHECK(rj2["chi_lower"]["per_n"][1]["mc"].get<double>() !=
        rj["chi_lower"]["per_n"][1]["mc"].get<double>());
  CHECK(rj2["verdict"] == "pass");
}
