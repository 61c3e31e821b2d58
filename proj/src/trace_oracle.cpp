#include "freent/trace_oracle.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace freent {

cplx TraceOracle::operator()(const Word& w) const {
  const std::string key = w.key();
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  const cplx value = eval_word(w);
  {
    std::unique_lock lock(mutex_);
    cache_.emplace(key, value);
  }
  return value;
}

cplx TraceOracle::eval(const NCPoly& p) const {
  cplx acc = 0.0;
  for (const auto& [w, c] : p.terms()) acc += c * (*this)(w);
  return acc;
}

namespace {

[[noreturn]] void unknown_variable(const Variable& v) {
  throw std::invalid_argument("oracle does not model variable " +
                              std::string(1, v.letter()) +
                              std::to_string(v.index));
}

class MatrixTraceOracle final : public TraceOracle {
 public:
  explicit MatrixTraceOracle(MatrixAssignment matrices)
      : matrices_(std::move(matrices)) {
    if (matrices_.empty())
      throw std::invalid_argument("matrix oracle needs at least one matrix");
    const Eigen::Index n = matrices_.begin()->second.rows();
    for (const auto& [v, a] : matrices_) {
      if (a.rows() != n || a.cols() != n)
        throw std::invalid_argument("matrix oracle needs a common dimension");
      const double scale = std::max(1.0, a.norm());
      if ((a - a.adjoint()).norm() > 1e-12 * scale)
        throw std::invalid_argument("matrix assigned to " +
                                    std::string(1, v.letter()) +
                                    std::to_string(v.index) +
                                    " is not Hermitian");
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
      radii_[v] = es.eigenvalues().cwiseAbs().maxCoeff();
      if (v.family == Family::X) xcount_ = std::max(xcount_, v.index);
    }
    n_ = n;
  }

  bool supports(const Variable& v) const override {
    return matrices_.count(v) > 0;
  }

  double radius(const Variable& v) const override {
    auto it = radii_.find(v);
    if (it == radii_.end()) unknown_variable(v);
    return it->second;
  }

  int x_count() const override { return xcount_; }

 protected:
  cplx eval_word(const Word& w) const override {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(n_, n_);
    for (const auto& v : w.letters) {
      auto it = matrices_.find(v);
      if (it == matrices_.end()) unknown_variable(v);
      acc = acc * it->second;
    }
    return trace_n(acc);
  }

 private:
  MatrixAssignment matrices_;
  std::map<Variable, double> radii_;
  Eigen::Index n_ = 0;
  int xcount_ = 0;
};

class LawOracle final : public TraceOracle {
 public:
  LawOracle(SpectralLaw law, Variable var) : law_(std::move(law)), var_(var) {}

  bool supports(const Variable& v) const override { return v == var_; }

  double radius(const Variable& v) const override {
    if (v != var_) unknown_variable(v);
    return law_.radius();
  }

  int x_count() const override {
    return var_.family == Family::X ? var_.index : 0;
  }

 protected:
  cplx eval_word(const Word& w) const override {
    for (const auto& v : w.letters)
      if (v != var_) unknown_variable(v);
    return law_.moment(static_cast<int>(w.size()));
  }

 private:
  SpectralLaw law_;
  Variable var_;
};

class ScalarOracle final : public TraceOracle {
 public:
  bool supports(const Variable&) const override { return false; }
  double radius(const Variable& v) const override { unknown_variable(v); }

 protected:
  cplx eval_word(const Word& w) const override {
    if (!w.empty()) unknown_variable(w.letters.front());
    return 1.0;
  }
};

class ScaledOracle final : public TraceOracle {
 public:
  ScaledOracle(OraclePtr base, double c) : base_(std::move(base)), c_(c) {}

  bool supports(const Variable& v) const override {
    return base_->supports(v);
  }

  double radius(const Variable& v) const override {
    const double r = base_->radius(v);
    return v.family == Family::X ? std::abs(c_) * r : r;
  }

  int x_count() const override { return base_->x_count(); }

 protected:
  cplx eval_word(const Word& w) const override {
    int nx = 0;
    for (const auto& v : w.letters)
      if (v.family == Family::X) ++nx;
    return std::pow(c_, nx) * (*base_)(w);
  }

 private:
  OraclePtr base_;
  double c_;
};

class ShiftedOracle final : public TraceOracle {
 public:
  ShiftedOracle(OraclePtr base, double c) : base_(std::move(base)), c_(c) {}

  bool supports(const Variable& v) const override {
    return base_->supports(v);
  }

  double radius(const Variable& v) const override {
    const double r = base_->radius(v);
    return v.family == Family::X ? r + std::abs(c_) : r;
  }

  int x_count() const override { return base_->x_count(); }

 protected:
  cplx eval_word(const Word& w) const override {
    // Expand every x-letter as (x + c): subsets of x-positions pick the
    // scalar branch and are deleted from the word.
    std::vector<std::size_t> xpos;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w.letters[i].family == Family::X) xpos.push_back(i);
    const std::size_t k = xpos.size();
    if (k == 0) return (*base_)(w);
    cplx acc = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      Word sub;
      int dropped = 0;
      sub.letters.reserve(w.size());
      std::size_t xi = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (xi < k && xpos[xi] == i) {
          const bool scalar_branch = (mask >> xi) & 1u;
          ++xi;
          if (scalar_branch) {
            ++dropped;
            continue;
          }
        }
        sub.letters.push_back(w.letters[i]);
      }
      acc += std::pow(c_, dropped) * (*base_)(sub);
    }
    return acc;
  }

 private:
  OraclePtr base_;
  double c_;
};

}  // namespace

OraclePtr matrix_trace_oracle(const MatrixAssignment& matrices) {
  return std::make_shared<MatrixTraceOracle>(matrices);
}

OraclePtr law_oracle(const SpectralLaw& law, Variable var) {
  return std::make_shared<LawOracle>(law, var);
}

OraclePtr scalar_oracle() { return std::make_shared<ScalarOracle>(); }

OraclePtr scaled_oracle(OraclePtr base, double c) {
  return std::make_shared<ScaledOracle>(std::move(base), c);
}

OraclePtr shifted_oracle(OraclePtr base, double c) {
  return std::make_shared<ShiftedOracle>(std::move(base), c);
}

}  // namespace freent
