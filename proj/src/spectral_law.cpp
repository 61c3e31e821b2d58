#include "freent/spectral_law.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "freent/numerics.hpp"

namespace freent {

namespace {

constexpr double kMassTol = 1e-10;

double binom(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// Central moments of the semicircle of variance t: odd vanish, the (2r)-th
// is t^r * Catalan(r).
double semicircle_central_moment(int k, double t) {
  if (k % 2 != 0) return 0.0;
  return std::pow(t, k / 2) * catalan_number(k / 2);
}

}  // namespace

SpectralLaw SpectralLaw::semicircle(double variance, double center) {
  if (variance <= 0.0)
    throw std::invalid_argument("semicircle law needs positive variance");
  SpectralLaw law;
  law.kind_ = LawKind::Semicircle;
  law.variance_ = variance;
  law.center_ = center;
  return law;
}

SpectralLaw SpectralLaw::point_mass(double value) {
  return atoms({value}, {1.0});
}

SpectralLaw SpectralLaw::atoms(std::vector<double> points,
                               std::vector<double> weights) {
  if (points.empty() || points.size() != weights.size())
    throw std::invalid_argument("atomic law needs matching points and weights");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  SpectralLaw law;
  law.kind_ = LawKind::Atoms;
  for (std::size_t i : order) {
    if (weights[i] < 0.0)
      throw std::invalid_argument("atomic law weights must be nonnegative");
    if (!law.points_.empty() && law.points_.back() == points[i]) {
      law.weights_.back() += weights[i];  // merge duplicated support points
    } else {
      law.points_.push_back(points[i]);
      law.weights_.push_back(weights[i]);
    }
  }
  double mass = std::accumulate(law.weights_.begin(), law.weights_.end(), 0.0);
  if (std::abs(mass - 1.0) > kMassTol)
    throw std::invalid_argument("atomic law weights must sum to 1");
  return law;
}

SpectralLaw SpectralLaw::density(const std::string& expr, double a, double b) {
  if (expr != "uniform")
    throw std::invalid_argument("unknown density expression: " + expr);
  if (!(a < b)) throw std::invalid_argument("density support must satisfy a < b");
  SpectralLaw law;
  law.kind_ = LawKind::Density;
  law.expr_ = expr;
  law.lo_ = a;
  law.hi_ = b;
  return law;
}

double SpectralLaw::density_at(double x) const {
  // Only the uniform builtin for now.
  if (x < lo_ || x > hi_) return 0.0;
  return 1.0 / (hi_ - lo_);
}

double SpectralLaw::moment(int k) const {
  if (k < 0) throw std::invalid_argument("moment order must be nonnegative");
  if (k == 0) return 1.0;
  switch (kind_) {
    case LawKind::Semicircle: {
      // Shift the central moments by the center.
      double acc = 0.0;
      for (int j = 0; j <= k; j += 1) {
        double central = semicircle_central_moment(j, variance_);
        if (central != 0.0)
          acc += binom(k, j) * std::pow(center_, k - j) * central;
      }
      return acc;
    }
    case LawKind::Atoms: {
      double acc = 0.0;
      for (std::size_t i = 0; i < points_.size(); ++i)
        acc += weights_[i] * std::pow(points_[i], k);
      return acc;
    }
    case LawKind::Density:
      return integrate([k](double x) { return std::pow(x, k); });
  }
  return 0.0;
}

double SpectralLaw::variance() const {
  const double m1 = moment(1);
  return moment(2) - m1 * m1;
}

double SpectralLaw::support_min() const {
  switch (kind_) {
    case LawKind::Semicircle: return center_ - 2.0 * std::sqrt(variance_);
    case LawKind::Atoms: return points_.front();
    case LawKind::Density: return lo_;
  }
  return 0.0;
}

double SpectralLaw::support_max() const {
  switch (kind_) {
    case LawKind::Semicircle: return center_ + 2.0 * std::sqrt(variance_);
    case LawKind::Atoms: return points_.back();
    case LawKind::Density: return hi_;
  }
  return 0.0;
}

double SpectralLaw::radius() const {
  return std::max(std::abs(support_min()), std::abs(support_max()));
}

double SpectralLaw::cdf(double x) const {
  switch (kind_) {
    case LawKind::Semicircle: {
      const double r = 2.0 * std::sqrt(variance_);
      const double u = x - center_;
      if (u <= -r) return 0.0;
      if (u >= r) return 1.0;
      return 0.5 + u * std::sqrt(r * r - u * u) / (std::numbers::pi * r * r) +
             std::asin(u / r) / std::numbers::pi;
    }
    case LawKind::Atoms: {
      double acc = 0.0;
      for (std::size_t i = 0; i < points_.size() && points_[i] <= x; ++i)
        acc += weights_[i];
      return acc;
    }
    case LawKind::Density: {
      if (x <= lo_) return 0.0;
      if (x >= hi_) return 1.0;
      return (x - lo_) / (hi_ - lo_);
    }
  }
  return 0.0;
}

double SpectralLaw::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("quantile probability must lie in (0, 1)");
  if (kind_ == LawKind::Atoms) {
    double acc = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      acc += weights_[i];
      if (acc >= p - kMassTol) return points_[i];
    }
    return points_.back();
  }
  double lo = support_min(), hi = support_max();
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) >= p)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double SpectralLaw::semicircle_variance() const {
  if (kind_ != LawKind::Semicircle)
    throw std::logic_error("not a semicircle law");
  return variance_;
}

double SpectralLaw::semicircle_center() const {
  if (kind_ != LawKind::Semicircle)
    throw std::logic_error("not a semicircle law");
  return center_;
}

double SpectralLaw::integrate(const std::function<double(double)>& f) const {
  if (kind_ == LawKind::Atoms) {
    double acc = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i)
      acc += weights_[i] * f(points_[i]);
    return acc;
  }
  if (kind_ == LawKind::Semicircle) {
    // Substitute x = center + 2 sqrt(t) sin(theta); the edge square root
    // becomes a smooth cosine factor and Gauss-Legendre converges fast.
    const double root = std::sqrt(variance_);
    QuadRule rule =
        gauss_legendre(200, -std::numbers::pi / 2.0, std::numbers::pi / 2.0);
    std::vector<double> vals(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double th = rule.nodes[i];
      const double c = std::cos(th);
      const double x = center_ + 2.0 * root * std::sin(th);
      vals[i] = rule.weights[i] * (2.0 / std::numbers::pi) * c * c * f(x);
    }
    return pairwise_sum(vals);
  }
  QuadRule rule = gauss_legendre(200, lo_, hi_);
  std::vector<double> vals(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    vals[i] = rule.weights[i] * density_at(rule.nodes[i]) * f(rule.nodes[i]);
  return pairwise_sum(vals);
}

SpectralLaw SpectralLaw::from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "semicircle") {
    double center = j.value("center", 0.0);
    return semicircle(j.at("variance").get<double>(), center);
  }
  if (type == "atoms") {
    return atoms(j.at("points").get<std::vector<double>>(),
                 j.at("weights").get<std::vector<double>>());
  }
  if (type == "point") {
    return point_mass(j.at("value").get<double>());
  }
  if (type == "density") {
    auto support = j.at("support").get<std::vector<double>>();
    if (support.size() != 2)
      throw std::invalid_argument("density support must be [a, b]");
    return density(j.at("expr").get<std::string>(), support[0], support[1]);
  }
  throw std::invalid_argument("unknown law type: " + type);
}

nlohmann::json SpectralLaw::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case LawKind::Semicircle:
      j["type"] = "semicircle";
      j["variance"] = variance_;
      if (center_ != 0.0) j["center"] = center_;
      break;
    case LawKind::Atoms:
      j["type"] = "atoms";
      j["points"] = points_;
      j["weights"] = weights_;
      break;
    case LawKind::Density:
      j["type"] = "density";
      j["expr"] = expr_;
      j["support"] = {lo_, hi_};
      break;
  }
  return j;
}

}  // namespace freent
