#include "freent/rmt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "freent/rng.hpp"
#include "freent/semicircular.hpp"
#include "freent/trace_oracle.hpp"

namespace freent {

namespace {

constexpr std::uint64_t kPickTag = 0x4d495854ull;  // mixture component choice

void check_hermitian_tuple(const std::vector<Eigen::MatrixXcd>& tup, int n) {
  for (const auto& c : tup) {
    if (c.rows() != n || c.cols() != n)
      throw std::invalid_argument("center matrices must share one square dimension");
    const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
    if ((c - c.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw std::invalid_argument("center matrices must be Hermitian");
  }
}

// run fn(i) for i in [0, count) on a small pool; results must land in
// index-addressed slots so the outcome is independent of scheduling
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t workers = std::min<std::size_t>(count, hw == 0 ? 4 : hw);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
}

double trace_n_sq(const Eigen::MatrixXcd& a) { return a.squaredNorm() / a.rows(); }

// tr_n(AB) without forming the product
cplx trace_n_pair(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return a.cwiseProduct(b.transpose()).sum() / double(a.rows());
}

}  // namespace

GaussianEnsemble make_ensemble(std::vector<Eigen::MatrixXcd> center, double t,
                               std::uint64_t seed) {
  if (center.empty()) throw std::invalid_argument("ensemble needs at least one center");
  if (!(t > 0.0)) throw std::invalid_argument("ensemble time must be positive");
  const int n = static_cast<int>(center[0].rows());
  check_hermitian_tuple(center, n);
  GaussianEnsemble ens;
  ens.n = n;
  ens.m = static_cast<int>(center.size());
  ens.center = std::move(center);
  ens.t = t;
  ens.seed = seed;
  return ens;
}

GaussianEnsemble zero_ensemble(int n, int m, double t, std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("need n >= 1 and m >= 1");
  std::vector<Eigen::MatrixXcd> center(m, Eigen::MatrixXcd::Zero(n, n));
  return make_ensemble(std::move(center), t, seed);
}

double gaussian_entropy_exact(const GaussianEnsemble& ens) {
  if (!(ens.t > 0.0)) throw std::invalid_argument("ensemble time must be positive");
  return 0.5 * ens.m * std::log(2.0 * M_PI * std::exp(1.0) * ens.t);
}

std::vector<Eigen::MatrixXcd> sample_ensemble(const GaussianEnsemble& ens,
                                              std::uint64_t sample_index) {
  auto x = sample_gue({ens.n, ens.m, ens.seed}, sample_index);
  const double root_t = std::sqrt(ens.t);
  for (int j = 0; j < ens.m; ++j) x[j] = ens.center[j] + root_t * x[j];
  return x;
}

std::vector<Eigen::MatrixXcd> gaussian_score(const GaussianEnsemble& ens,
                                             const std::vector<Eigen::MatrixXcd>& x) {
  if (static_cast<int>(x.size()) != ens.m)
    throw std::invalid_argument("sample tuple size does not match the ensemble");
  std::vector<Eigen::MatrixXcd> xi;
  xi.reserve(ens.m);
  const double scale = double(ens.n) * double(ens.n) / ens.t;
  for (int j = 0; j < ens.m; ++j) xi.push_back(scale * (x[j] - ens.center[j]));
  return xi;
}

nlohmann::json FisherEstimate::to_json() const {
  return {{"value", value},   {"stderr", stderr_}, {"n", n},
          {"samples", samples}, {"seed", seed},    {"normalization", normalization}};
}

nlohmann::json EntropyEstimate::to_json() const {
  return {{"value", value},   {"stderr", stderr_}, {"n", n},
          {"samples", samples}, {"seed", seed},    {"normalization", normalization}};
}

FisherEstimate fisher_mc(const GaussianEnsemble& ens, int samples) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  const double n4 = std::pow(double(ens.n), 4);
  std::vector<double> vals(samples);
  parallel_for(samples, [&](std::size_t s) {
    const auto x = sample_ensemble(ens, s);
    const auto xi = gaussian_score(ens, x);
    double acc = 0.0;
    for (const auto& g : xi) acc += trace_n_sq(g);
    vals[s] = acc / n4;
  });
  const MeanStderr ms = mean_stderr(vals);
  FisherEstimate est;
  est.value = ms.mean;
  est.stderr_ = ms.stderr_;
  est.n = ens.n;
  est.samples = samples;
  est.seed = ens.seed;
  return est;
}

GaussianMixture make_mixture(std::vector<MixtureComponent> components,
                             std::uint64_t seed) {
  if (components.empty()) throw std::invalid_argument("mixture needs a component");
  GaussianMixture mix;
  mix.n = static_cast<int>(components[0].center.empty()
                               ? 0
                               : components[0].center[0].rows());
  mix.m = static_cast<int>(components[0].center.size());
  if (mix.n < 1 || mix.m < 1)
    throw std::invalid_argument("mixture components need nonempty centers");
  double total = 0.0;
  for (const auto& c : components) {
    if (static_cast<int>(c.center.size()) != mix.m)
      throw std::invalid_argument("mixture components must share the tuple size");
    check_hermitian_tuple(c.center, mix.n);
    if (!(c.t > 0.0)) throw std::invalid_argument("component time must be positive");
    if (!(c.weight > 0.0)) throw std::invalid_argument("component weight must be positive");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw std::invalid_argument("mixture weights must sum to 1");
  mix.components = std::move(components);
  mix.seed = seed;
  return mix;
}

double mixture_trace_variance(const GaussianMixture& mix) {
  std::vector<Eigen::MatrixXcd> mean(mix.m,
                                     Eigen::MatrixXcd::Zero(mix.n, mix.n));
  for (const auto& c : mix.components)
    for (int j = 0; j < mix.m; ++j) mean[j] += c.weight * c.center[j];
  double var = 0.0;
  for (const auto& c : mix.components) {
    double spread = 0.0;
    for (int j = 0; j < mix.m; ++j) spread += trace_n_sq(c.center[j] - mean[j]);
    var += c.weight * (mix.m * c.t + spread);
  }
  return var;
}

EntropyEstimate entropy_mc(const GaussianMixture& mix, int samples) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  const int n = mix.n;
  const int m = mix.m;
  const double n2 = double(n) * double(n);
  const std::size_t ncomp = mix.components.size();

  std::vector<double> vals(samples);
  parallel_for(samples, [&](std::size_t s) {
    // pick a component, then reuse one underlying GUE draw for the offset
    const double u = uniform01(derive_key({mix.seed, kPickTag, s}));
    std::size_t pick = 0;
    double cum = 0.0;
    for (std::size_t k = 0; k < ncomp; ++k) {
      cum += mix.components[k].weight;
      if (u <= cum) {
        pick = k;
        break;
      }
      pick = k;
    }
    const auto& chosen = mix.components[pick];
    auto x = sample_gue({n, m, mix.seed}, s);
    const double root_t = std::sqrt(chosen.t);
    for (int j = 0; j < m; ++j) x[j] = chosen.center[j] + root_t * x[j];

    // log rho(X) via logsumexp over the component log densities
    std::vector<double> logs(ncomp);
    for (std::size_t k = 0; k < ncomp; ++k) {
      const auto& c = mix.components[k];
      double d = 0.0;
      for (int j = 0; j < m; ++j) d += trace_n_sq(x[j] - c.center[j]);
      logs[k] = std::log(c.weight) -
                0.5 * m * n2 * std::log(2.0 * M_PI * c.t / n2) -
                n2 * d / (2.0 * c.t);
    }
    double top = logs[0];
    for (double v : logs) top = std::max(top, v);
    double acc = 0.0;
    for (double v : logs) acc += std::exp(v - top);
    const double log_rho = top + std::log(acc);
    vals[s] = -log_rho / n2 + m * std::log(double(n));
  });

  const MeanStderr ms = mean_stderr(vals);
  EntropyEstimate est;
  est.value = ms.mean;
  est.stderr_ = ms.stderr_;
  est.n = n;
  est.samples = samples;
  est.seed = mix.seed;
  return est;
}

EntropyEstimate entropy_mc(const GaussianEnsemble& ens, int samples) {
  GaussianMixture mix;
  mix.components.push_back({1.0, ens.center, ens.t});
  mix.n = ens.n;
  mix.m = ens.m;
  mix.seed = ens.seed;
  return entropy_mc(mix, samples);
}

nlohmann::json IbpResult::to_json() const {
  return {{"j", j},
          {"lhs_mean", lhs_mean},
          {"lhs_stderr", lhs_stderr},
          {"rhs_mean", rhs_mean},
          {"rhs_stderr", rhs_stderr},
          {"residual_mean", residual_mean},
          {"residual_stderr", residual_stderr}};
}

std::vector<IbpResult> ibp_check(const GaussianEnsemble& ens,
                                 const std::vector<NCPoly>& f,
                                 const MatrixAssignment& y_assign, int samples) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  if (static_cast<int>(f.size()) != ens.m)
    throw std::invalid_argument("need one test polynomial per coordinate");
  for (const auto& [v, mat] : y_assign) {
    if (v.family == Family::X)
      throw std::invalid_argument("fixed letters must not use x variables");
    check_hermitian_tuple({mat}, ens.n);
  }
  const double n2 = double(ens.n) * double(ens.n);

  std::vector<TensorPoly> df;
  df.reserve(ens.m);
  for (int j = 0; j < ens.m; ++j) df.push_back(free_diff(f[j], j + 1));

  std::vector<std::vector<double>> lhs(ens.m, std::vector<double>(samples));
  std::vector<std::vector<double>> rhs(ens.m, std::vector<double>(samples));
  std::vector<std::vector<double>> res(ens.m, std::vector<double>(samples));
  parallel_for(samples, [&](std::size_t s) {
    const auto x = sample_ensemble(ens, s);
    const auto xi = gaussian_score(ens, x);
    MatrixAssignment asg = y_assign;
    for (int j = 0; j < ens.m; ++j) asg[xvar(j + 1)] = x[j];
    for (int j = 0; j < ens.m; ++j) {
      const Eigen::MatrixXcd fx = evaluate(f[j], asg);
      const double a = trace_n_pair(xi[j], fx).real() / n2;
      const double b = trace_pair(df[j], asg).real();
      lhs[j][s] = a;
      rhs[j][s] = b;
      res[j][s] = a - b;
    }
  });

  std::vector<IbpResult> out;
  for (int j = 0; j < ens.m; ++j) {
    const MeanStderr ml = mean_stderr(lhs[j]);
    const MeanStderr mr = mean_stderr(rhs[j]);
    const MeanStderr md = mean_stderr(res[j]);
    IbpResult r;
    r.j = j + 1;
    r.lhs_mean = ml.mean;
    r.lhs_stderr = ml.stderr_;
    r.rhs_mean = mr.mean;
    r.rhs_stderr = mr.stderr_;
    r.residual_mean = md.mean;
    r.residual_stderr = md.stderr_;
    out.push_back(r);
  }
  return out;
}

double heat_flow_identity_residual(int m, double t0, double t1, int nodes) {
  if (!(t0 > 0.0) || !(t1 > 0.0))
    throw std::invalid_argument("flow times must be positive");
  if (m < 1) throw std::invalid_argument("need m >= 1");
  const double lhs = 0.5 * m * std::log(t1) - 0.5 * m * std::log(t0);
  const QuadRule rule = gauss_legendre(nodes, t0, t1);
  std::vector<double> terms(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    terms[i] = rule.weights[i] * 0.5 * m / rule.nodes[i];
  return std::abs(lhs - pairwise_sum(terms));
}

std::vector<FreenessRow> freeness_deviation_table(
    int n, int m, const MatrixAssignment& y_assign,
    const std::vector<Word>& words, int samples, std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("need n >= 1 and m >= 1");
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  for (const auto& w : words) {
    for (const auto& v : w.letters) {
      if (v.family == Family::S) {
        if (v.index < 1 || v.index > m)
          throw std::invalid_argument("word uses an s letter outside the tuple");
      } else if (!y_assign.count(v)) {
        throw std::invalid_argument("word uses a letter with no fixed matrix");
      }
    }
  }

  // exact side: the free-semicircular extension of the fixed letters
  OraclePtr base = y_assign.empty()
                       ? scalar_oracle()
                       : matrix_trace_oracle(y_assign);
  OraclePtr exact = free_semicircular_extend({base, m, 1.0});

  // alphabet actually used, for per-sample pair products
  std::vector<Variable> alphabet;
  bool need_pairs = false;
  for (const auto& w : words) {
    if (w.size() >= 3) need_pairs = true;
    for (const auto& v : w.letters)
      if (std::find(alphabet.begin(), alphabet.end(), v) == alphabet.end())
        alphabet.push_back(v);
  }
  const std::size_t la = alphabet.size();
  auto letter_slot = [&](const Variable& v) {
    return std::size_t(std::find(alphabet.begin(), alphabet.end(), v) -
                       alphabet.begin());
  };

  std::vector<std::vector<double>> vals(words.size(),
                                        std::vector<double>(samples));
  parallel_for(samples, [&](std::size_t s) {
    const auto tup = sample_gue({n, m, seed}, s);
    std::vector<const Eigen::MatrixXcd*> mats(la);
    for (std::size_t a = 0; a < la; ++a) {
      const Variable& v = alphabet[a];
      mats[a] = v.family == Family::S ? &tup[v.index - 1] : &y_assign.at(v);
    }
    // products of letter pairs, so traces of words up to length 4 cost O(n^2)
    std::vector<Eigen::MatrixXcd> pair(need_pairs ? la * la : 0);
    if (need_pairs)
      for (std::size_t a = 0; a < la; ++a)
        for (std::size_t b = 0; b < la; ++b)
          pair[a * la + b] = (*mats[a]) * (*mats[b]);

    for (std::size_t wi = 0; wi < words.size(); ++wi) {
      const Word& w = words[wi];
      cplx tr;
      const auto& ls = w.letters;
      switch (w.size()) {
        case 0:
          tr = cplx{1.0};
          break;
        case 1:
          tr = mats[letter_slot(ls[0])]->trace() / double(n);
          break;
        case 2:
          tr = trace_n_pair(*mats[letter_slot(ls[0])], *mats[letter_slot(ls[1])]);
          break;
        case 3:
          tr = trace_n_pair(pair[letter_slot(ls[0]) * la + letter_slot(ls[1])],
                            *mats[letter_slot(ls[2])]);
          break;
        case 4:
          tr = trace_n_pair(pair[letter_slot(ls[0]) * la + letter_slot(ls[1])],
                            pair[letter_slot(ls[2]) * la + letter_slot(ls[3])]);
          break;
        default: {
          Eigen::MatrixXcd prod = *mats[letter_slot(ls[0])];
          for (std::size_t i = 1; i < w.size(); ++i)
            prod *= *mats[letter_slot(ls[i])];
          tr = prod.trace() / double(n);
        }
      }
      vals[wi][s] = tr.real();
    }
  });

  std::vector<FreenessRow> rows;
  for (std::size_t wi = 0; wi < words.size(); ++wi) {
    const MeanStderr ms = mean_stderr(vals[wi]);
    FreenessRow r;
    r.word = words[wi];
    r.mc_mean = ms.mean;
    r.stderr_ = ms.stderr_;
    r.oracle = (*exact)(words[wi]).real();
    r.deviation = std::abs(r.mc_mean - r.oracle);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace freent
