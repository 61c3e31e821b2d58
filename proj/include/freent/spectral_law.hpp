#pragma once

// Compactly supported one-variable laws: semicircle (optionally shifted),
// finite atomic measures, and a small family of named densities.  Moments,
// CDF and quantiles are exposed; JSON descriptions round-trip.

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace freent {

enum class LawKind { Semicircle, Atoms, Density };

class SpectralLaw {
 public:
  static SpectralLaw semicircle(double variance, double center = 0.0);
  static SpectralLaw point_mass(double value);
  static SpectralLaw atoms(std::vector<double> points,
                           std::vector<double> weights);
  // expr currently supports "uniform" (constant density on [a, b]).
  static SpectralLaw density(const std::string& expr, double a, double b);

  LawKind kind() const { return kind_; }
  bool is_atomic() const { return kind_ == LawKind::Atoms; }
  bool is_point_mass() const {
    return kind_ == LawKind::Atoms && points_.size() == 1;
  }

  double moment(int k) const;  // raw moment, k >= 0
  double mean() const { return moment(1); }
  double variance() const;

  double support_min() const;
  double support_max() const;
  // Operator-norm bound for microstates built from this law.
  double radius() const;

  double cdf(double x) const;
  // Smallest x in the support with cdf(x) >= p, for p in (0, 1).
  double quantile(double p) const;

  // Semicircle accessors (throw for other kinds).
  double semicircle_variance() const;
  double semicircle_center() const;

  const std::vector<double>& atom_points() const { return points_; }
  const std::vector<double>& atom_weights() const { return weights_; }

  // Integrates f against the law with a fixed 200-node Gauss-Legendre rule
  // (exact sum for atoms).  Used by tests to cross-check closed forms.
  double integrate(const std::function<double(double)>& f) const;

  static SpectralLaw from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  SpectralLaw() = default;

  double density_at(double x) const;

  LawKind kind_ = LawKind::Atoms;
  // semicircle
  double variance_ = 0.0;
  double center_ = 0.0;
  // atoms
  std::vector<double> points_;
  std::vector<double> weights_;
  // density
  std::string expr_;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

}  // namespace freent
