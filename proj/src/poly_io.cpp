#include "freent/poly_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace freent {

namespace {

// Shortest clean form for a real: "2" not "2.000000".
std::string fmt_real(double v) {
  std::ostringstream os;
  os.precision(17);  // full round-trip precision
  os << v;
  return os.str();
}

std::string fmt_coeff(cplx c) {
  if (c.imag() == 0.0) {
    if (c.real() < 0.0) return '(' + fmt_real(c.real()) + ')';
    return fmt_real(c.real());
  }
  std::ostringstream os;
  os << '(' << fmt_real(c.real());
  if (c.imag() >= 0.0) os << '+';
  os << fmt_real(c.imag()) << "i)";
  return os.str();
}

}  // namespace

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out.push_back('.');
    out.push_back(w.letters[i].letter());
    out += std::to_string(w.letters[i].index);
  }
  return out;
}

std::string to_string(const NCPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : p.terms()) {
    if (!first) out += " + ";
    first = false;
    if (w.empty()) {
      out += fmt_coeff(c);
    } else if (c == cplx{1.0}) {
      out += to_string(w);
    } else {
      out += fmt_coeff(c);
      out += '*';
      out += to_string(w);
    }
  }
  return out;
}

std::string to_string(const TensorPoly& t) {
  if (t.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : t.terms()) {
    if (!first) out += " + ";
    first = false;
    if (c != cplx{1.0}) {
      out += fmt_coeff(c);
      out += '*';
    }
    out += '[';
    out += to_string(k.first);
    out += " (x) ";
    out += to_string(k.second);
    out += ']';
  }
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NCPoly run() {
    NCPoly out;
    skip_ws();
    if (at_end()) fail("empty polynomial");
    bool negate = consume_sign();
    term(out, negate);
    skip_ws();
    while (!at_end()) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        skip_ws();
        term(out, false);
      } else if (c == '-') {
        ++pos_;
        skip_ws();
        term(out, true);
      } else {
        fail("expected '+' between terms");
      }
      skip_ws();
    }
    return out;
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("polynomial parse error at offset " +
                                std::to_string(pos_) + ": " + why);
  }

  bool consume_sign() {
    if (!at_end() && peek() == '-') {
      ++pos_;
      skip_ws();
      return true;
    }
    if (!at_end() && peek() == '+') {
      ++pos_;
      skip_ws();
    }
    return false;
  }

  double real_number() {
    skip_ws();
    const char* start = s_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - start);
    return v;
  }

  // One signed summand inside a coefficient: `2`, `-0.5`, `1i`, `-i`.
  // Returns the value and whether it carried the imaginary marker.
  std::pair<double, bool> complex_item() {
    double sign = 1.0;
    if (!at_end() && (peek() == '+' || peek() == '-')) {
      if (peek() == '-') sign = -1.0;
      ++pos_;
      skip_ws();
    }
    if (!at_end() && peek() == 'i') {
      ++pos_;
      return {sign, true};
    }
    double v = real_number();
    bool imag = false;
    if (!at_end() && peek() == 'i') {
      ++pos_;
      imag = true;
    }
    return {sign * v, imag};
  }

  // Inside parentheses: `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
  cplx paren_complex() {
    ++pos_;  // '('
    skip_ws();
    double re = 0.0, im = 0.0;
    auto [v1, imag1] = complex_item();
    (imag1 ? im : re) = v1;
    skip_ws();
    if (!at_end() && (peek() == '+' || peek() == '-')) {
      auto [v2, imag2] = complex_item();
      if (imag2)
        im += v2;
      else
        re += v2;
      skip_ws();
    }
    if (at_end() || peek() != ')') fail("expected ')' closing coefficient");
    ++pos_;
    return {re, im};
  }

  Variable parse_letter() {
    char c = peek();
    Family fam;
    if (c == 'x') fam = Family::X;
    else if (c == 'y') fam = Family::Y;
    else if (c == 's') fam = Family::S;
    else fail("expected a letter x/y/s");
    ++pos_;
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected a variable index");
    int idx = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      idx = idx * 10 + (peek() - '0');
      ++pos_;
    }
    if (idx < 1) fail("variable indices start at 1");
    return {fam, idx};
  }

  // `1` as a word token means the unit word.  A bare number is a constant
  // term; a bare word has coefficient 1.
  void term(NCPoly& out, bool negate) {
    skip_ws();
    if (at_end()) fail("expected a term");
    if (peek() == '+' || peek() == '-') {
      if (consume_sign()) negate = !negate;
      if (at_end()) fail("expected a term after sign");
    }
    cplx coeff = 1.0;
    bool have_coeff = false;
    char c = peek();
    if (c == '(') {
      coeff = paren_complex();
      have_coeff = true;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      coeff = real_number();
      have_coeff = true;
    }
    skip_ws();
    Word w = Word::unit();
    if (have_coeff) {
      if (!at_end() && peek() == '*') {
        ++pos_;
        skip_ws();
        w = parse_word();
      }
    } else {
      w = parse_word();
    }
    if (negate) coeff = -coeff;
    out.add_term(w, coeff);
  }

  Word parse_word() {
    skip_ws();
    if (!at_end() && peek() == '1') {
      ++pos_;
      return Word::unit();
    }
    Word w;
    w.letters.push_back(parse_letter());
    skip_ws();
    while (!at_end() && peek() == '.') {
      ++pos_;
      skip_ws();
      w.letters.push_back(parse_letter());
      skip_ws();
    }
    return w;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

NCPoly parse_poly(const std::string& text) { return Parser(text).run(); }

}  // namespace freent
