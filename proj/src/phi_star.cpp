#include "freent/phi_star.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace freent {

BasisSpec BasisSpec::make(int x_count, std::vector<int> y_indices, int degree) {
  if (x_count < 1) throw std::invalid_argument("basis needs x_count >= 1");
  if (degree < 0) throw std::invalid_argument("basis degree must be >= 0");
  std::sort(y_indices.begin(), y_indices.end());
  y_indices.erase(std::unique(y_indices.begin(), y_indices.end()),
                  y_indices.end());

  BasisSpec spec;
  spec.x_count = x_count;
  spec.y_indices = y_indices;
  spec.degree = degree;

  std::vector<Variable> alphabet;
  for (int i = 1; i <= x_count; ++i) alphabet.push_back(xvar(i));
  for (int i : y_indices) alphabet.push_back(yvar(i));

  std::vector<Word> frontier{Word::unit()};
  spec.words.push_back(Word::unit());
  for (int len = 1; len <= degree; ++len) {
    std::vector<Word> next;
    next.reserve(frontier.size() * alphabet.size());
    for (const auto& w : frontier)
      for (const auto& v : alphabet) {
        Word ext = w;
        ext.letters.push_back(v);
        next.push_back(ext);
      }
    spec.words.insert(spec.words.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return spec;
}

Eigen::MatrixXcd gram_matrix(const BasisSpec& basis, const TraceOracle& tau) {
  const int nb = static_cast<int>(basis.size());
  Eigen::MatrixXcd g(nb, nb);
  for (int q = 0; q < nb; ++q)
    for (int p = 0; p < nb; ++p)
      g(q, p) = tau(basis.words[q].reversed().concat(basis.words[p]));
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::runtime_error("Gram matrix is not Hermitian; oracle broken");
  return ((g + g.adjoint()) / 2.0).eval();
}

Eigen::VectorXcd divergence_functional(const BasisSpec& basis,
                                       const TraceOracle& tau, int j) {
  const int nb = static_cast<int>(basis.size());
  Eigen::VectorXcd l(nb);
  for (int p = 0; p < nb; ++p) {
    const TensorPoly dv = free_diff(NCPoly::monomial(basis.words[p]), j);
    l(p) = pair_apply(dv, [&tau](const Word& w) { return tau(w); });
  }
  return l;
}

nlohmann::json PhiStarEstimate::to_json() const {
  nlohmann::json j;
  j["value"] = value;
  j["degree"] = degree;
  j["per_coordinate"] = per_coordinate;
  j["gram_rank"] = gram_rank;
  j["cutoff"] = cutoff;
  j["diverging"] = diverging;
  return j;
}

PhiStarEstimate phi_star_lower(const TraceOracle& tau, int x_count,
                               const std::vector<int>& y_indices, int degree) {
  if (degree < 1)
    throw std::invalid_argument("phi_star_lower needs degree >= 1");
  const BasisSpec basis = BasisSpec::make(x_count, y_indices, degree);
  Eigen::MatrixXcd g = gram_matrix(basis, tau);
  if (g.cwiseAbs().maxCoeff() == 0.0)
    throw std::runtime_error("all-zero Gram matrix; degenerate oracle");

  // Precondition by normalizing every basis word to unit 2-norm; the
  // variational maximum is invariant under this diagonal substitution, while
  // the eigenvalue cutoff becomes meaningful for bases with wildly different
  // word norms (high moments grow fast for wide laws).
  const int nb = static_cast<int>(basis.size());
  Eigen::VectorXd scale(nb);
  for (int p = 0; p < nb; ++p) {
    const double norm2 = g(p, p).real();
    scale(p) = norm2 > 0.0 ? 1.0 / std::sqrt(norm2) : 1.0;
  }
  for (int q = 0; q < nb; ++q)
    for (int p = 0; p < nb; ++p) g(q, p) *= scale(q) * scale(p);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("Gram eigendecomposition failed");
  const Eigen::VectorXd evals = es.eigenvalues();
  const double lmax = evals.maxCoeff();
  if (lmax <= 0.0)
    throw std::runtime_error("Gram matrix has no positive spectrum");
  const double cutoff = 1e-10 * lmax;
  if (evals.minCoeff() < -1e-9 * lmax)
    throw std::runtime_error("Gram matrix has a significantly negative eigenvalue");

  PhiStarEstimate out;
  out.degree = degree;
  out.cutoff = cutoff;
  for (int i = 0; i < evals.size(); ++i)
    if (evals(i) > cutoff) ++out.gram_rank;

  bool null_leak = false;
  for (int j = 1; j <= x_count; ++j) {
    Eigen::VectorXcd l = divergence_functional(basis, tau, j);
    for (int p = 0; p < nb; ++p) l(p) *= scale(p);
    // sup |l^T c|^2 over c* G c <= 1 equals l^T G^+ conj(l); eigenvalues at
    // or below the cutoff count as null directions of the truncated space.
    const Eigen::VectorXcd lbar = l.conjugate();
    Eigen::VectorXcd proj = es.eigenvectors().adjoint() * lbar;
    double null_mass = 0.0;
    for (int i = 0; i < evals.size(); ++i) {
      if (evals(i) > cutoff) {
        proj(i) /= evals(i);
      } else {
        null_mass += std::norm(proj(i));
        proj(i) = cplx{0.0};
      }
    }
    // A functional that does not vanish on a null direction of G has an
    // unbounded sup already at this degree: the seminorm constraint cannot
    // control it. Report the range-restricted value but flag the blow-up.
    if (null_mass > 1e-8 * lbar.squaredNorm()) null_leak = true;
    const cplx form = lbar.dot(es.eigenvectors() * proj);
    if (std::abs(form.imag()) > 1e-8 * std::max(1.0, std::abs(form.real())))
      throw std::runtime_error("estimate has a nonreal value; oracle broken");
    out.per_coordinate.push_back(form.real());
    out.value += form.real();
  }
  out.diverging = out.value > 1e6 || null_leak;
  return out;
}

double conjugate_residual(const TraceOracle& tau, const NCPoly& xi, int j,
                          const BasisSpec& basis) {
  const NCPoly xi_adj = xi.adjoint();
  double worst = 0.0;
  for (const auto& w : basis.words) {
    const cplx lhs = tau.eval(xi_adj * NCPoly::monomial(w));
    const TensorPoly dv = free_diff(NCPoly::monomial(w), j);
    const cplx rhs = pair_apply(dv, [&tau](const Word& ww) { return tau(ww); });
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace freent
