#pragma once

// Non-commutative *-polynomials over three families of formally self-adjoint
// generators: x1,x2,... (the main tuple), y1,y2,... (auxiliary), s1,s2,...
// (semicircular helpers).  Polynomials are sparse maps from words to complex
// coefficients; zero coefficients are never stored.

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace freent {

using cplx = std::complex<double>;

enum class Family : std::uint8_t { X = 0, Y = 1, S = 2 };

struct Variable {
  Family family;
  int index;  // 1-based

  auto operator<=>(const Variable&) const = default;

  char letter() const {
    switch (family) {
      case Family::X: return 'x';
      case Family::Y: return 'y';
      default: return 's';
    }
  }
};

inline Variable xvar(int i) { return {Family::X, i}; }
inline Variable yvar(int i) { return {Family::Y, i}; }
inline Variable svar(int i) { return {Family::S, i}; }

// A word is a finite product of generators; the empty word is the unit.
struct Word {
  std::vector<Variable> letters;

  Word() = default;
  explicit Word(std::vector<Variable> ls) : letters(std::move(ls)) {}

  static Word unit() { return Word{}; }
  static Word single(Variable v) { return Word{{v}}; }

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }

  Word concat(const Word& rhs) const;
  // Adjoint of a word of self-adjoint generators: reverse the letters.
  Word reversed() const;
  Word subword(std::size_t begin, std::size_t end) const;  // [begin, end)
  // Prefix [0, cut) followed by suffix [from, size).
  Word splice_out(std::size_t cut, std::size_t from) const;

  bool operator==(const Word&) const = default;

  // Compact byte encoding, usable as a hash-map key.
  std::string key() const;
};

// Canonical term order: shorter words first, ties broken lexicographically.
struct WordOrder {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.letters < b.letters;
  }
};

class NCPoly {
 public:
  using TermMap = std::map<Word, cplx, WordOrder>;

  NCPoly() = default;

  static NCPoly zero() { return NCPoly{}; }
  static NCPoly one() { return monomial(Word::unit(), 1.0); }
  static NCPoly monomial(Word w, cplx c = 1.0);
  static NCPoly variable(Variable v) { return monomial(Word::single(v)); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Degree of the zero polynomial is reported as 0.
  int degree() const;

  // Accumulates c on word w, dropping the term if the result is zero.
  void add_term(const Word& w, cplx c);

  NCPoly operator+(const NCPoly& rhs) const;
  NCPoly operator-(const NCPoly& rhs) const;
  NCPoly operator*(const NCPoly& rhs) const;
  NCPoly operator*(cplx scalar) const;
  NCPoly operator-() const { return *this * cplx{-1.0}; }

  NCPoly adjoint() const;

  bool operator==(const NCPoly&) const = default;

 private:
  TermMap terms_;
};

inline NCPoly operator*(cplx scalar, const NCPoly& p) { return p * scalar; }

// Element of the algebraic tensor square, a sparse sum of u (x) v terms.
class TensorPoly {
 public:
  using Key = std::pair<Word, Word>;
  struct KeyOrder {
    bool operator()(const Key& a, const Key& b) const {
      WordOrder lt;
      if (lt(a.first, b.first)) return true;
      if (lt(b.first, a.first)) return false;
      return lt(a.second, b.second);
    }
  };
  using TermMap = std::map<Key, cplx, KeyOrder>;

  TensorPoly() = default;

  static TensorPoly zero() { return TensorPoly{}; }
  static TensorPoly simple(Word u, Word v, cplx c = 1.0);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Word& u, const Word& v, cplx c);

  TensorPoly operator+(const TensorPoly& rhs) const;
  TensorPoly operator-(const TensorPoly& rhs) const;
  // Componentwise product: (a (x) b)(c (x) d) = ac (x) bd.
  TensorPoly operator*(const TensorPoly& rhs) const;
  TensorPoly operator*(cplx scalar) const;

  bool operator==(const TensorPoly&) const = default;

 private:
  TermMap terms_;
};

// Embeddings p (x) 1 and 1 (x) p.
TensorPoly tensor_left(const NCPoly& p);
TensorPoly tensor_right(const NCPoly& p);

// Free difference quotient with respect to x_j.  On a word it inserts a
// tensor split at every occurrence of x_j; y and s letters are constants.
TensorPoly free_diff(const NCPoly& p, int j);

using MatrixAssignment = std::map<Variable, Eigen::MatrixXcd>;

// Evaluates p at the assigned matrices.  Throws std::invalid_argument naming
// the variable if one is unassigned, or on mismatched dimensions.
Eigen::MatrixXcd evaluate(const NCPoly& p, const MatrixAssignment& asg);

struct TensorTermEval {
  Eigen::MatrixXcd left;
  Eigen::MatrixXcd right;
  cplx coeff;
};

std::vector<TensorTermEval> evaluate_tensor(const TensorPoly& T,
                                            const MatrixAssignment& asg);

// Contraction against a direction: sum of coeff * left * D * right.
Eigen::MatrixXcd contract(const TensorPoly& T, const MatrixAssignment& asg,
                          const Eigen::MatrixXcd& direction);

// Normalized trace tr_n = (1/n) Tr.
cplx trace_n(const Eigen::MatrixXcd& a);

// tr_n (x) tr_n of the evaluated tensor.
cplx trace_pair(const TensorPoly& T, const MatrixAssignment& asg);

// Sum of coeff * f(u) * f(v) for a word-level functional f.
template <typename F>
cplx pair_apply(const TensorPoly& T, F&& f) {
  cplx acc = 0.0;
  for (const auto& [key, c] : T.terms()) acc += c * f(key.first) * f(key.second);
  return acc;
}

}  // namespace freent
