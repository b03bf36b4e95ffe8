#include "hsd/poly_text.hpp"

#include <algorithm>
#include <cctype>
#include <type_traits>

namespace hsd {

namespace {

template <class T>
T power_of(const T& base, std::uint64_t n) {
  if constexpr (std::is_same_v<T, MultiPoly>) {
    return base.pow(n);
  } else {
    T out = T::one(base.field(), base.vars());
    T b = base;
    for (; n; n >>= 1) {
      if (n & 1) out *= b;
      if (n > 1) b *= b;
    }
    return out;
  }
}

/// Recursive descent over + - * ^ and parentheses; T = RationalFunc also
/// accepts '/'.
template <class T>
class Parser {
 public:
  Parser(std::string_view text, const Field& field, const VarList& vars) : s_(text), k_(field), vars_(vars) {}

  T parse_all() {
    T out = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError, what + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  T constant(Fq c) const {
    if constexpr (std::is_same_v<T, MultiPoly>)
      return MultiPoly::constant(k_, vars_, c);
    else
      return RationalFunc::constant(k_, vars_, c);
  }
  T variable(std::size_t i) const { return T(MultiPoly::variable(k_, vars_, i)); }

  T expr() {
    skip();
    bool negate = false;
    if (eat('+')) {
    } else if (eat('-')) {
      negate = true;
    }
    T acc = term();
    if (negate) acc = -acc;
    for (;;) {
      if (eat('+')) {
        acc += term();
      } else if (eat('-')) {
        acc -= term();
      } else {
        break;
      }
    }
    return acc;
  }

  T term() {
    T acc = power();
    for (;;) {
      if (eat('*')) {
        acc = acc * power();
      } else if (eat('/')) {
        if constexpr (std::is_same_v<T, MultiPoly>) {
          fail("'/' in a polynomial");
        } else {
          T d = power();
          if (d.is_zero()) throw Error(ErrorKind::DivisionByZero, "zero denominator in \"" + std::string(s_) + "\"");
          acc = acc / d;
        }
      } else {
        return acc;
      }
    }
  }

  std::uint64_t integer() {
    skip();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected integer");
    std::uint64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      if (v > (std::uint64_t{1} << 40)) fail("integer too large");
      v = v * 10 + static_cast<unsigned>(s_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  T power() {
    T base = atom();
    if (eat('^')) {
      std::uint64_t n = integer();
      if (n > 100000) fail("exponent too large");
      return power_of(base, n);
    }
    return base;
  }

  T atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      T inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::uint64_t v = integer();
      return constant(k_.from_int(static_cast<long long>(v % k_.p())));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < vars_->size(); ++i)
        if ((*vars_)[i] == name) return variable(i);
      // a lone x1 may be written x
      auto one = std::find(vars_->begin(), vars_->end(), name + "1");
      if (one != vars_->end() && std::find(vars_->begin(), vars_->end(), name + "2") == vars_->end())
        return variable(static_cast<std::size_t>(one - vars_->begin()));
      if (name == "g") {
        if (k_.d() == 1) fail("symbol g needs an extension field");
        return constant(k_.generator());
      }
      throw Error(ErrorKind::UnknownVariable, "unknown variable " + name + " in \"" + std::string(s_) + "\"");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const Field& k_;
  VarList vars_;
  std::size_t pos_ = 0;
};

std::string monomial_text(const std::vector<std::string>& names, const Exponents& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += names[i];
    if (e[i] > 1) out += '^' + std::to_string(e[i]);
  }
  return out;
}

// coefficient pieces whose sum is c; each piece is "" for 1
std::vector<std::string> coefficient_pieces(Fq c) {
  const Field& k = c.field();
  if (k.d() == 1) return {c.is_one() ? std::string() : std::to_string(c.code())};
  if (k.generator_is_primitive()) {
    long long l = k.log_generator(c.code());
    if (l == 0) return {""};
    if (l == 1) return {"g"};
    return {"g^" + std::to_string(l)};
  }
  std::vector<std::string> out;
  for (unsigned i = k.d(); i-- > 0;) {
    std::uint32_t dg = k.digit(c.code(), i);
    if (dg == 0) continue;
    std::string s;
    if (dg != 1 || i == 0) s = std::to_string(dg);
    if (i > 0) {
      if (!s.empty()) s += '*';
      s += i == 1 ? "g" : "g^" + std::to_string(i);
    }
    if (s == "1") s.clear();
    out.push_back(s);
  }
  return out;
}

std::string terms_text(const std::vector<std::string>& names, std::vector<std::pair<Exponents, Fq>> terms) {
  if (terms.empty()) return "0";
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return display_less(a.first, b.first); });
  std::string out;
  for (const auto& [e, c] : terms) {
    std::string mono = monomial_text(names, e);
    for (const auto& piece : coefficient_pieces(c)) {
      std::string t;
      if (piece.empty()) {
        t = mono.empty() ? "1" : mono;
      } else {
        t = mono.empty() ? piece : piece + "*" + mono;
      }
      if (!out.empty()) out += " + ";
      out += t;
    }
  }
  return out;
}

}  // namespace

MultiPoly parse_multipoly(std::string_view text, const Field& field, const VarList& vars) {
  return Parser<MultiPoly>(text, field, vars).parse_all();
}

Poly parse_poly(std::string_view text, const Field& field, const LayoutPtr& layout) {
  return to_trunc(parse_multipoly(text, field, make_vars(layout->var_names())), layout);
}

RationalFunc parse_ratfunc(std::string_view text, const Field& field, const VarList& vars) {
  return Parser<RationalFunc>(text, field, vars).parse_all();
}

std::string to_string(const MultiPoly& f) {
  std::vector<std::pair<Exponents, Fq>> terms(f.terms().begin(), f.terms().end());
  return terms_text(*f.vars(), std::move(terms));
}

std::string to_string(const Poly& f) {
  std::vector<std::pair<Exponents, Fq>> terms;
  for (const auto& [key, c] : f.terms()) terms.emplace_back(f.layout()->unpack(key), c);
  return terms_text(f.layout()->var_names(), std::move(terms));
}

std::string to_string(const RationalFunc& f) {
  if (f.is_polynomial()) return to_string(f.num());
  return "(" + to_string(f.num()) + ")/(" + to_string(f.den()) + ")";
}

std::string to_string(Fq c) {
  if (c.is_zero()) return "0";
  std::string out;
  for (const auto& piece : coefficient_pieces(c)) {
    if (!out.empty()) out += " + ";
    out += piece.empty() ? "1" : piece;
  }
  return out;
}

}  // namespace hsd
