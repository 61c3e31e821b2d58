#include "freent/semicircular.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "freent/numerics.hpp"

namespace freent {

double semicircle_moment(int k, double t) {
  if (k < 0) throw std::invalid_argument("moment order must be nonnegative");
  if (t < 0.0) throw std::invalid_argument("variance must be nonnegative");
  if (k % 2 != 0) return 0.0;
  return std::pow(t, k / 2) * catalan_number(k / 2);
}

namespace {

class SemicircularExtension final : public TraceOracle {
 public:
  explicit SemicircularExtension(SemicircularExtensionSpec spec)
      : spec_(std::move(spec)) {
    if (!spec_.base)
      throw std::invalid_argument("semicircular extension needs a base oracle");
    if (spec_.count < 1)
      throw std::invalid_argument("semicircular extension needs count >= 1");
    if (spec_.variance < 0.0)
      throw std::invalid_argument("semicircular variance must be nonnegative");
  }

  bool supports(const Variable& v) const override {
    if (v.family == Family::S) return v.index >= 1 && v.index <= spec_.count;
    return spec_.base->supports(v);
  }

  double radius(const Variable& v) const override {
    if (v.family == Family::S) {
      if (v.index < 1 || v.index > spec_.count)
        throw std::invalid_argument("semicircular index out of range: s" +
                                    std::to_string(v.index));
      return 2.0 * std::sqrt(spec_.variance);
    }
    return spec_.base->radius(v);
  }

  int x_count() const override { return spec_.base->x_count(); }

 protected:
  cplx eval_word(const Word& w) const override {
    std::size_t first = w.size();
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w.letters[i].family == Family::S) {
        if (w.letters[i].index < 1 || w.letters[i].index > spec_.count)
          throw std::invalid_argument("semicircular index out of range: s" +
                                      std::to_string(w.letters[i].index));
        first = i;
        break;
      }
    }
    if (first == w.size()) return (*spec_.base)(w);

    // Odd occurrence count of any s-index kills the word outright.
    std::vector<int> parity(static_cast<std::size_t>(spec_.count) + 1, 0);
    for (const auto& v : w.letters)
      if (v.family == Family::S) parity[v.index] ^= 1;
    for (int p : parity)
      if (p) return 0.0;

    const Variable sv = w.letters[first];
    cplx acc = 0.0;
    for (std::size_t q = first + 1; q < w.size(); ++q) {
      if (w.letters[q] != sv) continue;
      acc += spec_.variance * (*this)(w.subword(first + 1, q)) *
             (*this)(w.splice_out(first, q + 1));
    }
    return acc;
  }

 private:
  SemicircularExtensionSpec spec_;
};

class FreeFamilyOracle final : public TraceOracle {
 public:
  FreeFamilyOracle(int m, double variance)
      : m_(m), variance_(variance),
        ext_(free_semicircular_extend({scalar_oracle(), m, variance})) {
    if (m < 1)
      throw std::invalid_argument("free semicircular family needs m >= 1");
  }

  bool supports(const Variable& v) const override {
    return v.family == Family::X && v.index >= 1 && v.index <= m_;
  }

  double radius(const Variable& v) const override {
    if (!supports(v))
      throw std::invalid_argument("family does not model variable " +
                                  std::string(1, v.letter()) +
                                  std::to_string(v.index));
    return 2.0 * std::sqrt(variance_);
  }

  int x_count() const override { return m_; }

 protected:
  cplx eval_word(const Word& w) const override {
    Word relabeled;
    relabeled.letters.reserve(w.size());
    for (const auto& v : w.letters) {
      if (!supports(v))
        throw std::invalid_argument("family does not model variable " +
                                    std::string(1, v.letter()) +
                                    std::to_string(v.index));
      relabeled.letters.push_back(svar(v.index));
    }
    return (*ext_)(relabeled);
  }

 private:
  int m_;
  double variance_;
  OraclePtr ext_;
};

class HeatFlowOracle final : public TraceOracle {
 public:
  HeatFlowOracle(OraclePtr base, double t)
      : base_(base), t_(t),
        ext_(free_semicircular_extend({base, base->x_count(), t})) {
    if (base_->x_count() < 1)
      throw std::invalid_argument("heat flow needs a base with x-generators");
  }

  bool supports(const Variable& v) const override {
    if (v.family == Family::S) return false;  // reserved for the flow
    return base_->supports(v);
  }

  double radius(const Variable& v) const override {
    const double r = base_->radius(v);
    return v.family == Family::X ? r + 2.0 * std::sqrt(t_) : r;
  }

  int x_count() const override { return base_->x_count(); }

 protected:
  cplx eval_word(const Word& w) const override {
    // Substitute x_j -> x_j + s_j and expand over the 2^k branch choices.
    std::vector<std::size_t> xpos;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w.letters[i].family == Family::S)
        throw std::invalid_argument(
            "s-letters are reserved by the smoothing flow");
      if (w.letters[i].family == Family::X) xpos.push_back(i);
    }
    if (xpos.empty()) return (*base_)(w);
    if (xpos.size() >= 63)
      throw std::invalid_argument("word too long for flow expansion");
    cplx acc = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << xpos.size());
         ++mask) {
      Word sub = w;
      for (std::size_t b = 0; b < xpos.size(); ++b) {
        if ((mask >> b) & 1u) {
          const std::size_t i = xpos[b];
          sub.letters[i] = svar(w.letters[i].index);
        }
      }
      acc += (*ext_)(sub);
    }
    return acc;
  }

 private:
  OraclePtr base_;
  double t_;
  OraclePtr ext_;
};

}  // namespace

OraclePtr free_semicircular_extend(const SemicircularExtensionSpec& spec) {
  return std::make_shared<SemicircularExtension>(spec);
}

OraclePtr free_semicircular_family(int m, double variance) {
  return std::make_shared<FreeFamilyOracle>(m, variance);
}

OraclePtr heat_flow_law(OraclePtr base, double t) {
  if (t < 0.0) throw std::invalid_argument("flow time must be nonnegative");
  if (t == 0.0) return base;
  return std::make_shared<HeatFlowOracle>(std::move(base), t);
}

}  // namespace freent
