#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "freent/gue.hpp"
#include "freent/harness.hpp"
#include "freent/matrix_io.hpp"
#include "freent/phi_star.hpp"
#include "freent/poly_io.hpp"
#include "freent/rmt.hpp"
#include "freent/semicircular.hpp"
#include "freent/version.hpp"

namespace freent {

namespace {

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read " + path);
  nlohmann::json j;
  f >> j;
  return j;
}

// A law argument is either an inline JSON object or a path to a JSON file.
SpectralLaw law_from_arg(const std::string& spec) {
  if (!spec.empty() && spec.front() == '{')
    return SpectralLaw::from_json(nlohmann::json::parse(spec));
  return SpectralLaw::from_json(load_json_file(spec));
}

void emit(const nlohmann::json& j, const std::string& out, bool quiet) {
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << j.dump(2) << "\n";
    if (!quiet) std::cout << "wrote " << out << "\n";
  } else if (!quiet) {
    std::cout << j.dump(2) << "\n";
  }
}

std::vector<Word> s_words_up_to(int m, int max_len) {
  std::vector<Word> words;
  std::vector<Word> frontier{Word::unit()};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier)
      for (int k = 1; k <= m; ++k)
        next.push_back(w.concat(Word::single(svar(k))));
    words.insert(words.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return words;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"two-sided free entropy toolkit: exact moment oracles, "
               "variational Fisher estimates, flow-integral entropy, and "
               "random-matrix cross-checks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  int rc = 0;

  const std::string default_law = R"({"type": "semicircle", "variance": 1.0})";

  // phi-star
  struct {
    std::string law;
    int m = 1;
    int degree = 4;
    std::string out;
    bool quiet = false;
  } phi;
  phi.law = default_law;
  auto* phi_cmd = app.add_subcommand(
      "phi-star", "variational Fisher information lower estimate of a law");
  phi_cmd->add_option("--law", phi.law,
                      "law as inline JSON or a path to a JSON file");
  phi_cmd->add_option("--m", phi.m, "number of free copies of the law");
  phi_cmd->add_option("--degree", phi.degree, "test-polynomial degree");
  phi_cmd->add_option("--out", phi.out, "write the JSON report here");
  phi_cmd->add_flag("--quiet", phi.quiet, "suppress stdout");
  phi_cmd->callback([&] {
    ExperimentConfig cfg;
    cfg.base = law_from_arg(phi.law);
    cfg.m = phi.m;
    PhiStarEstimate est =
        phi_star_lower(*base_oracle_for(cfg), phi.m, {}, phi.degree);
    nlohmann::json j = est.to_json();
    j["version"] = kVersion;
    j["law"] = cfg.base.to_json();
    j["m"] = phi.m;
    emit(j, phi.out, phi.quiet);
  });

  // chi-star
  struct {
    std::string law;
    int m = 1;
    int degree = 4;
    int nodes = 64;
    double umax = 0.999;
    std::string out;
    bool quiet = false;
  } chi;
  chi.law = default_law;
  auto* chi_cmd = app.add_subcommand(
      "chi-star", "entropy upper estimate from the Fisher flow integral");
  chi_cmd->add_option("--law", chi.law,
                      "law as inline JSON or a path to a JSON file");
  chi_cmd->add_option("--m", chi.m, "number of free copies of the law");
  chi_cmd->add_option("--degree", chi.degree, "test-polynomial degree");
  chi_cmd->add_option("--nodes", chi.nodes, "flow quadrature nodes");
  chi_cmd->add_option("--umax", chi.umax, "grid end in u = t/(1+t)");
  chi_cmd->add_option("--out", chi.out, "write the JSON report here");
  chi_cmd->add_flag("--quiet", chi.quiet, "suppress stdout");
  chi_cmd->callback([&] {
    ExperimentConfig cfg;
    cfg.base = law_from_arg(chi.law);
    cfg.m = chi.m;
    ChiStarReport rep = chi_star_upper(base_oracle_for(cfg), chi.m, chi.degree,
                                       FlowGrid::make(chi.nodes, chi.umax));
    nlohmann::json j = rep.to_json();
    j["version"] = kVersion;
    j["law"] = cfg.base.to_json();
    emit(j, chi.out, chi.quiet);
  });

  // rmt with gue / ibp-check / entropy
  auto* rmt_cmd =
      app.add_subcommand("rmt", "random-matrix Monte Carlo experiments");
  rmt_cmd->require_subcommand(1);

  struct {
    int n = 50;
    int m = 1;
    int samples = 100;
    std::uint64_t seed = 1;
    std::string out;
    bool quiet = false;
  } gue;
  auto* gue_cmd = rmt_cmd->add_subcommand(
      "gue", "operator-norm statistics of GUE samples");
  gue_cmd->add_option("--n", gue.n, "matrix size");
  gue_cmd->add_option("--m", gue.m, "tuple length");
  gue_cmd->add_option("--samples", gue.samples, "Monte Carlo samples");
  gue_cmd->add_option("--seed", gue.seed, "RNG seed");
  gue_cmd->add_option("--out", gue.out, "write the JSON report here");
  gue_cmd->add_flag("--quiet", gue.quiet, "suppress stdout");
  gue_cmd->callback([&] {
    MeanStderr op = opnorm_stat({gue.n, gue.m, gue.seed}, gue.samples);
    emit({{"version", kVersion},
          {"n", gue.n},
          {"m", gue.m},
          {"samples", gue.samples},
          {"seed", gue.seed},
          {"opnorm", {{"mean", op.mean}, {"stderr", op.stderr_}}}},
         gue.out, gue.quiet);
  });

  struct {
    std::vector<std::string> f;
    int n = 20;
    double t = 1.0;
    int samples = 2000;
    std::uint64_t seed = 1;
    std::string out;
    bool quiet = false;
  } ibp;
  auto* ibp_cmd = rmt_cmd->add_subcommand(
      "ibp-check",
      "score-versus-difference-quotient integration by parts residuals");
  ibp_cmd->add_option("--f", ibp.f,
                      "test polynomial for each coordinate, e.g. 1*x1.x2.x1 "
                      "(repeat; tuple length = count)");
  ibp_cmd->add_option("--n", ibp.n, "matrix size");
  ibp_cmd->add_option("--t", ibp.t, "Gaussian variance");
  ibp_cmd->add_option("--samples", ibp.samples, "Monte Carlo samples");
  ibp_cmd->add_option("--seed", ibp.seed, "RNG seed");
  ibp_cmd->add_option("--out", ibp.out, "write the JSON report here");
  ibp_cmd->add_flag("--quiet", ibp.quiet, "suppress stdout");
  ibp_cmd->callback([&] {
    if (ibp.f.empty()) ibp.f.push_back("1*x1");
    std::vector<NCPoly> f;
    for (const std::string& s : ibp.f) f.push_back(parse_poly(s));
    GaussianEnsemble ens =
        zero_ensemble(ibp.n, static_cast<int>(f.size()), ibp.t, ibp.seed);
    std::vector<IbpResult> rows = ibp_check(ens, f, {}, ibp.samples);
    nlohmann::json arr = nlohmann::json::array();
    for (const IbpResult& r : rows) arr.push_back(r.to_json());
    emit({{"version", kVersion},
          {"n", ibp.n},
          {"t", ibp.t},
          {"samples", ibp.samples},
          {"seed", ibp.seed},
          {"results", arr}},
         ibp.out, ibp.quiet);
  });

  struct {
    int n = 16;
    int m = 1;
    double t = 1.0;
    int samples = 2000;
    std::uint64_t seed = 1;
    std::string center;
    std::string out;
    bool quiet = false;
  } ent;
  auto* ent_cmd = rmt_cmd->add_subcommand(
      "entropy", "plug-in entropy estimate of a Gaussian matrix ensemble");
  ent_cmd->add_option("--n", ent.n, "matrix size (ignored with --center)");
  ent_cmd->add_option("--m", ent.m, "tuple length (ignored with --center)");
  ent_cmd->add_option("--t", ent.t, "Gaussian variance");
  ent_cmd->add_option("--samples", ent.samples, "Monte Carlo samples");
  ent_cmd->add_option("--seed", ent.seed, "RNG seed");
  ent_cmd->add_option("--center", ent.center,
                      "JSON file with the center tuple as an array of "
                      "matrices, rows of [re, im] pairs");
  ent_cmd->add_option("--out", ent.out, "write the JSON report here");
  ent_cmd->add_flag("--quiet", ent.quiet, "suppress stdout");
  ent_cmd->callback([&] {
    GaussianEnsemble ens;
    if (ent.center.empty()) {
      ens = zero_ensemble(ent.n, ent.m, ent.t, ent.seed);
    } else {
      nlohmann::json cj = load_json_file(ent.center);
      if (!cj.is_array() || cj.empty())
        throw std::invalid_argument(
            "--center file must hold a nonempty JSON array of matrices");
      std::vector<Eigen::MatrixXcd> centers;
      for (const nlohmann::json& mj : cj)
        centers.push_back(matrix_from_json(mj));
      ens = make_ensemble(std::move(centers), ent.t, ent.seed);
    }
    EntropyEstimate est = entropy_mc(ens, ent.samples);
    const double exact = gaussian_entropy_exact(ens);
    emit({{"version", kVersion},
          {"estimate", est.to_json()},
          {"exact", exact},
          {"residual", est.value - exact}},
         ent.out, ent.quiet);
  });

  // freeness-table
  struct {
    int n = 150;
    int m = 2;
    int samples = 200;
    int max_len = 4;
    std::uint64_t seed = 1;
    std::string out;
    bool quiet = false;
  } fre;
  auto* fre_cmd = app.add_subcommand(
      "freeness-table",
      "GUE word traces against exact free semicircular values");
  fre_cmd->add_option("--n", fre.n, "matrix size");
  fre_cmd->add_option("--m", fre.m, "tuple length");
  fre_cmd->add_option("--samples", fre.samples, "Monte Carlo samples");
  fre_cmd->add_option("--max-len", fre.max_len, "longest word length");
  fre_cmd->add_option("--seed", fre.seed, "RNG seed");
  fre_cmd->add_option("--out", fre.out, "write the JSON report here");
  fre_cmd->add_flag("--quiet", fre.quiet, "suppress stdout");
  fre_cmd->callback([&] {
    std::vector<Word> words = s_words_up_to(fre.m, fre.max_len);
    std::vector<FreenessRow> rows = freeness_deviation_table(
        fre.n, fre.m, {}, words, fre.samples, fre.seed);
    nlohmann::json arr = nlohmann::json::array();
    double worst = 0.0;
    for (const FreenessRow& r : rows) {
      worst = std::max(worst, r.deviation);
      arr.push_back({{"word", to_string(r.word)},
                     {"mc_mean", r.mc_mean},
                     {"stderr", r.stderr_},
                     {"oracle", r.oracle},
                     {"deviation", r.deviation}});
    }
    emit({{"version", kVersion},
          {"n", fre.n},
          {"m", fre.m},
          {"samples", fre.samples},
          {"seed", fre.seed},
          {"max_deviation", worst},
          {"rows", arr}},
         fre.out, fre.quiet);
  });

  // verify-inequality
  struct {
    std::string builtin;
    std::string config;
    std::uint64_t seed = 0;
    std::string out;
    bool quiet = false;
  } ver;
  auto* ver_cmd = app.add_subcommand(
      "verify-inequality",
      "compare the matrix-model entropy lower bound with the flow-integral "
      "upper estimate");
  auto* builtin_opt = ver_cmd->add_option(
      "--builtin", ver.builtin,
      "ready-made experiment: semicircular, semicircle-shift, two-point");
  auto* config_opt =
      ver_cmd->add_option("--config", ver.config, "experiment JSON file");
  builtin_opt->excludes(config_opt);
  auto* seed_opt =
      ver_cmd->add_option("--seed", ver.seed, "override the config seed");
  ver_cmd->add_option("--out", ver.out, "override the config report path");
  ver_cmd->add_flag("--quiet", ver.quiet, "suppress stdout");
  ver_cmd->callback([&] {
    if (ver.builtin.empty() && ver.config.empty())
      throw std::invalid_argument(
          "verify-inequality needs --builtin or --config");
    ExperimentConfig cfg =
        ver.builtin.empty()
            ? ExperimentConfig::from_json(load_json_file(ver.config))
            : builtin_config(ver.builtin);
    if (seed_opt->count() > 0) cfg.seed = ver.seed;
    if (!ver.out.empty()) cfg.out = ver.out;
    InequalityReport rep = run_inequality_experiment(cfg);
    if (!cfg.out.empty()) write_report_files(rep, cfg.out);
    if (!ver.quiet) {
      if (cfg.out.empty()) std::cout << rep.to_json().dump(2) << "\n";
      std::cout << (rep.pass ? "PASS" : "FAIL") << " margin=" << rep.margin
                << " tolerance=" << rep.tolerance << "\n";
    }
    if (!rep.pass) rc = 2;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

}  // namespace

int cli_main(int argc, char** argv) { return run_cli(argc, argv); }

}  // namespace freent
