#include "freent/ncpoly.hpp"

#include <stdexcept>
#include <string>

namespace freent {

Word Word::concat(const Word& rhs) const {
  Word out;
  out.letters.reserve(letters.size() + rhs.letters.size());
  out.letters.insert(out.letters.end(), letters.begin(), letters.end());
  out.letters.insert(out.letters.end(), rhs.letters.begin(), rhs.letters.end());
  return out;
}

Word Word::reversed() const {
  Word out;
  out.letters.assign(letters.rbegin(), letters.rend());
  return out;
}

Word Word::subword(std::size_t begin, std::size_t end) const {
  Word out;
  out.letters.assign(letters.begin() + begin, letters.begin() + end);
  return out;
}

Word Word::splice_out(std::size_t cut, std::size_t from) const {
  Word out;
  out.letters.reserve(cut + (letters.size() - from));
  out.letters.insert(out.letters.end(), letters.begin(), letters.begin() + cut);
  out.letters.insert(out.letters.end(), letters.begin() + from, letters.end());
  return out;
}

std::string Word::key() const {
  std::string k;
  k.reserve(letters.size() * 2);
  for (const auto& v : letters) {
    k.push_back(static_cast<char>(static_cast<std::uint8_t>(v.family)));
    // Desk-scale indices; two bytes keep the key compact but safe.
    k.push_back(static_cast<char>(v.index & 0xff));
    if (v.index > 0xff) k.push_back(static_cast<char>(v.index >> 8));
  }
  return k;
}

NCPoly NCPoly::monomial(Word w, cplx c) {
  NCPoly p;
  p.add_term(w, c);
  return p;
}

int NCPoly::degree() const {
  // Terms are ordered by length, so the last word is the longest.
  if (terms_.empty()) return 0;
  return static_cast<int>(terms_.rbegin()->first.size());
}

void NCPoly::add_term(const Word& w, cplx c) {
  if (c == cplx{0.0}) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{0.0}) terms_.erase(it);
  }
}

NCPoly NCPoly::operator+(const NCPoly& rhs) const {
  NCPoly out = *this;
  for (const auto& [w, c] : rhs.terms_) out.add_term(w, c);
  return out;
}

NCPoly NCPoly::operator-(const NCPoly& rhs) const {
  NCPoly out = *this;
  for (const auto& [w, c] : rhs.terms_) out.add_term(w, -c);
  return out;
}

NCPoly NCPoly::operator*(const NCPoly& rhs) const {
  NCPoly out;
  for (const auto& [wa, ca] : terms_)
    for (const auto& [wb, cb] : rhs.terms_) out.add_term(wa.concat(wb), ca * cb);
  return out;
}

NCPoly NCPoly::operator*(cplx scalar) const {
  NCPoly out;
  if (scalar == cplx{0.0}) return out;
  for (const auto& [w, c] : terms_) out.add_term(w, c * scalar);
  return out;
}

NCPoly NCPoly::adjoint() const {
  NCPoly out;
  for (const auto& [w, c] : terms_) out.add_term(w.reversed(), std::conj(c));
  return out;
}

TensorPoly TensorPoly::simple(Word u, Word v, cplx c) {
  TensorPoly t;
  t.add_term(u, v, c);
  return t;
}

void TensorPoly::add_term(const Word& u, const Word& v, cplx c) {
  if (c == cplx{0.0}) return;
  Key k{u, v};
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{0.0}) terms_.erase(it);
  }
}

TensorPoly TensorPoly::operator+(const TensorPoly& rhs) const {
  TensorPoly out = *this;
  for (const auto& [k, c] : rhs.terms_) out.add_term(k.first, k.second, c);
  return out;
}

TensorPoly TensorPoly::operator-(const TensorPoly& rhs) const {
  TensorPoly out = *this;
  for (const auto& [k, c] : rhs.terms_) out.add_term(k.first, k.second, -c);
  return out;
}

TensorPoly TensorPoly::operator*(const TensorPoly& rhs) const {
  TensorPoly out;
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : rhs.terms_)
      out.add_term(ka.first.concat(kb.first), ka.second.concat(kb.second),
                   ca * cb);
  return out;
}

TensorPoly TensorPoly::operator*(cplx scalar) const {
  TensorPoly out;
  if (scalar == cplx{0.0}) return out;
  for (const auto& [k, c] : terms_) out.add_term(k.first, k.second, c * scalar);
  return out;
}

TensorPoly tensor_left(const NCPoly& p) {
  TensorPoly out;
  for (const auto& [w, c] : p.terms()) out.add_term(w, Word::unit(), c);
  return out;
}

TensorPoly tensor_right(const NCPoly& p) {
  TensorPoly out;
  for (const auto& [w, c] : p.terms()) out.add_term(Word::unit(), w, c);
  return out;
}

TensorPoly free_diff(const NCPoly& p, int j) {
  TensorPoly out;
  const Variable target = xvar(j);
  for (const auto& [w, c] : p.terms()) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w.letters[i] == target)
        out.add_term(w.subword(0, i), w.subword(i + 1, w.size()), c);
    }
  }
  return out;
}

namespace {

const Eigen::MatrixXcd& lookup(const MatrixAssignment& asg, const Variable& v) {
  auto it = asg.find(v);
  if (it == asg.end())
    throw std::invalid_argument("no matrix assigned to variable " +
                                std::string(1, v.letter()) +
                                std::to_string(v.index));
  return it->second;
}

Eigen::Index common_dim(const MatrixAssignment& asg) {
  if (asg.empty())
    throw std::invalid_argument("empty matrix assignment; dimension unknown");
  Eigen::Index n = asg.begin()->second.rows();
  for (const auto& [v, a] : asg) {
    if (a.rows() != n || a.cols() != n)
      throw std::invalid_argument(
          "matrix assigned to " + std::string(1, v.letter()) +
          std::to_string(v.index) + " is not square of the common dimension");
  }
  return n;
}

Eigen::MatrixXcd eval_word(const Word& w, const MatrixAssignment& asg,
                           Eigen::Index n) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(n, n);
  for (const auto& v : w.letters) acc = acc * lookup(asg, v);
  return acc;
}

}  // namespace

Eigen::MatrixXcd evaluate(const NCPoly& p, const MatrixAssignment& asg) {
  const Eigen::Index n = common_dim(asg);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [w, c] : p.terms()) acc += c * eval_word(w, asg, n);
  return acc;
}

std::vector<TensorTermEval> evaluate_tensor(const TensorPoly& T,
                                            const MatrixAssignment& asg) {
  const Eigen::Index n = common_dim(asg);
  std::vector<TensorTermEval> out;
  out.reserve(T.terms().size());
  for (const auto& [k, c] : T.terms())
    out.push_back({eval_word(k.first, asg, n), eval_word(k.second, asg, n), c});
  return out;
}

Eigen::MatrixXcd contract(const TensorPoly& T, const MatrixAssignment& asg,
                          const Eigen::MatrixXcd& direction) {
  const Eigen::Index n = common_dim(asg);
  if (direction.rows() != n || direction.cols() != n)
    throw std::invalid_argument("contraction direction has mismatched dimension");
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [k, c] : T.terms())
    acc += c * (eval_word(k.first, asg, n) * direction *
                eval_word(k.second, asg, n));
  return acc;
}

cplx trace_n(const Eigen::MatrixXcd& a) {
  return a.trace() / static_cast<double>(a.rows());
}

cplx trace_pair(const TensorPoly& T, const MatrixAssignment& asg) {
  const Eigen::Index n = common_dim(asg);
  cplx acc = 0.0;
  for (const auto& [k, c] : T.terms())
    acc += c * trace_n(eval_word(k.first, asg, n)) *
           trace_n(eval_word(k.second, asg, n));
  return acc;
}

}  // namespace freent
