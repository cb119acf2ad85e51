#include "unispace/smoothfn.hpp"

#include <cctype>
#include <sstream>

namespace unispace {

using Node = SmoothFn::Node;
using Kind = SmoothFn::Kind;

namespace {

std::string poly_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    Rational a = abs(c);
    bool monomial_one = true;
    for (int x : e)
      if (x) monomial_one = false;
    std::string term;
    if (monomial_one || a != 1) term = to_string(a);
    for (size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (!term.empty()) term += '*';
      term += 'x' + std::to_string(i + 1);
      if (e[i] > 1) term += '^' + std::to_string(e[i]);
    }
    if (first) out = (sgn(c) < 0 ? "-" : "") + term;
    else out += (sgn(c) < 0 ? " - " : " + ") + term;
    first = false;
  }
  return out;
}

std::string list_string(const std::vector<Rational>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += to_string(v[i]);
  }
  return s;
}

std::string mask_string(const std::vector<bool>& m) {
  std::string s;
  for (size_t i = 0; i < m.size(); ++i) {
    if (i) s += ',';
    s += m[i] ? '1' : '0';
  }
  return s;
}

bool needs_parens(const SmoothFn& f) {
  if (f.kind() == Kind::Add) return true;
  if (f.kind() != Kind::Poly) return false;
  const auto& t = f.poly().terms();
  if (t.size() > 1) return true;
  if (t.size() == 1 && sgn(t.begin()->second) < 0) return true;
  return false;
}

std::string str(const SmoothFn& f, const SmoothFn::NameMap* names, bool wrap, bool top);

std::string atom(const SmoothFn& f, const SmoothFn::NameMap* names) {
  std::string s = str(f, names, false, false);
  bool named = names && names->count(f.node());
  if (!named && (needs_parens(f) || f.kind() == Kind::Mul || f.kind() == Kind::Pow ||
                 (f.is_polynomial() && s.find_first_of("*/^") != std::string::npos)))
    return "(" + s + ")";
  return s;
}

std::string str(const SmoothFn& f, const SmoothFn::NameMap* names, bool wrap, bool top) {
  const Node& n = *f.node();
  if (names && !top) {
    auto it = names->find(&n);
    if (it != names->end()) return "$" + it->second;
  }
  std::string s;
  switch (n.kind) {
    case Kind::Poly: s = poly_string(n.poly); break;
    case Kind::Pi: return "pi";
    case Kind::Add: s = str(n.kids[0], names, false, false) + " + " + str(n.kids[1], names, true, false); break;
    case Kind::Mul: return str(n.kids[0], names, true, false) + "*" + str(n.kids[1], names, true, false);
    case Kind::Pow: return atom(n.kids[0], names) + "^" + std::to_string(n.ipow);
    case Kind::Sin: return "sin(" + str(n.kids[0], names, false, false) + ")";
    case Kind::Cos: return "cos(" + str(n.kids[0], names, false, false) + ")";
    case Kind::Bump:
    case Kind::BumpGrad: {
      std::string head = n.kind == Kind::Bump ? "bump(" : "dbump(" + std::to_string(n.ipow + 1) + ";";
      s = head + to_string(n.r0) + "," + to_string(n.r1) + "," + list_string(n.center);
      if (!n.periodic.empty()) s += ";" + mask_string(n.periodic);
      return s + ")";
    }
    case Kind::Cone:
      return "cone(" + std::to_string(n.ipow) + ";" + list_string(n.center) + ";" +
             str(n.kids[0], names, false, false) + ")";
    case Kind::Compose: {
      s = "compose(" + str(n.kids[0], names, false, false) + ";";
      for (size_t i = 1; i < n.kids.size(); ++i) {
        if (i > 1) s += ",";
        s += str(n.kids[i], names, false, false);
      }
      return s + ")";
    }
  }
  if (wrap && needs_parens(f)) return "(" + s + ")";
  return s;
}

class Parser {
 public:
  Parser(std::string_view text, int arity, const SmoothFn::Env* env) : s_(text), n_(arity), env_(env) {}

  SmoothFn parse_all() {
    SmoothFn f = expr();
    skip();
    if (p_ != s_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ExprError(msg + " at offset " + std::to_string(p_) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  bool eat(char c) {
    skip();
    if (p_ < s_.size() && s_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool keyword(std::string_view w) {
    skip();
    if (s_.substr(p_, w.size()) != w) return false;
    size_t q = p_ + w.size();
    if (q < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[q])) || s_[q] == '_')) return false;
    p_ = q;
    return true;
  }

  SmoothFn expr() {
    SmoothFn f = term();
    while (true) {
      if (eat('+')) f = f + term();
      else if (eat('-')) f = f - term();
      else return f;
    }
  }
  SmoothFn term() {
    SmoothFn f = unary();
    while (true) {
      if (eat('*')) f = f * unary();
      else if (eat('/')) f = f / unary();
      else return f;
    }
  }
  SmoothFn unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  SmoothFn power() {
    SmoothFn f = primary();
    if (eat('^')) {
      skip();
      bool neg = eat('-');
      skip();
      size_t start = p_;
      while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
      if (start == p_) fail("expected integer exponent");
      int e = std::stoi(std::string(s_.substr(start, p_ - start)));
      f = pow(f, neg ? -e : e);
    }
    return f;
  }

  Rational number_literal() {
    skip();
    size_t start = p_;
    while (p_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[p_])) || s_[p_] == '.')) ++p_;
    if (p_ < s_.size() && (s_[p_] == 'e' || s_[p_] == 'E')) {
      size_t q = p_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        p_ = q;
        while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
      }
    }
    if (start == p_) fail("expected number");
    try {
      return parse_rational(s_.substr(start, p_ - start));
    } catch (const std::exception&) {
      fail("bad number");
    }
  }

  // Signed rational constant; '/' allowed for p/q.
  Rational signed_rational() {
    bool neg = eat('-');
    Rational r = number_literal();
    if (eat('/')) {
      Rational d = number_literal();
      if (sgn(d) == 0) fail("zero denominator");
      r /= d;
    }
    return neg ? Rational(-r) : r;
  }

  std::vector<Rational> rational_list(size_t count) {
    std::vector<Rational> v;
    for (size_t i = 0; i < count; ++i) {
      if (i) expect(',');
      v.push_back(signed_rational());
    }
    return v;
  }

  std::vector<bool> mask_list(size_t count) {
    std::vector<bool> m;
    for (size_t i = 0; i < count; ++i) {
      if (i) expect(',');
      Rational r = signed_rational();
      m.push_back(sgn(r) != 0);
    }
    return m;
  }

  // Finds the end of a sub-expression: the next ';' or ',' or ')' at depth 0.
  size_t scan_to(std::string_view stops) const {
    int depth = 0;
    for (size_t q = p_; q < s_.size(); ++q) {
      char c = s_[q];
      if (c == '(') ++depth;
      else if (c == ')') {
        if (depth == 0) return q;
        --depth;
      } else if (depth == 0 && stops.find(c) != std::string_view::npos) {
        return q;
      }
    }
    fail("unterminated argument list");
  }

  SmoothFn primary() {
    skip();
    if (p_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[p_];
    if (c == '(') {
      ++p_;
      SmoothFn f = expr();
      expect(')');
      return f;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return SmoothFn::constant(n_, number_literal());
    if (c == '$') {
      ++p_;
      size_t start = p_;
      while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_')) ++p_;
      std::string name(s_.substr(start, p_ - start));
      if (!env_ || !env_->count(name)) fail("unknown reference $" + name);
      const SmoothFn& f = env_->at(name);
      if (f.arity() != n_) fail("reference $" + name + " has arity " + std::to_string(f.arity()));
      return f;
    }
    if (keyword("pi")) return SmoothFn::pi(n_);
    if (keyword("sin")) {
      expect('(');
      SmoothFn f = expr();
      expect(')');
      return sin(f);
    }
    if (keyword("cos")) {
      expect('(');
      SmoothFn f = expr();
      expect(')');
      return cos(f);
    }
    if (keyword("bump")) {
      expect('(');
      Rational r0 = signed_rational();
      expect(',');
      Rational r1 = signed_rational();
      expect(',');
      auto center = rational_list(static_cast<size_t>(n_));
      std::vector<bool> mask;
      if (eat(';')) mask = mask_list(static_cast<size_t>(n_));
      expect(')');
      return SmoothFn::bump(r0, r1, center, mask);
    }
    if (keyword("dbump")) {
      expect('(');
      Rational ax = signed_rational();
      expect(';');
      Rational r0 = signed_rational();
      expect(',');
      Rational r1 = signed_rational();
      expect(',');
      auto center = rational_list(static_cast<size_t>(n_));
      std::vector<bool> mask;
      if (eat(';')) mask = mask_list(static_cast<size_t>(n_));
      expect(')');
      if (ax.get_den() != 1 || ax < 1 || ax > n_) fail("dbump axis out of range");
      return SmoothFn::bump(r0, r1, center, mask).partial(static_cast<int>(ax.get_num().get_si()) - 1);
    }
    if (keyword("cone")) {
      expect('(');
      Rational k = signed_rational();
      if (k.get_den() != 1 || k < 1) fail("cone degree must be a positive integer");
      expect(';');
      auto center = rational_list(static_cast<size_t>(n_));
      expect(';');
      SmoothFn f = expr();
      expect(')');
      return SmoothFn::cone(f, static_cast<int>(k.get_num().get_si()), center);
    }
    if (keyword("compose")) {
      expect('(');
      skip();
      size_t outer_start = p_;
      size_t outer_end = scan_to(";");
      if (outer_end >= s_.size() || s_[outer_end] != ';') fail("compose needs ';' after the outer function");
      p_ = outer_end + 1;
      std::vector<SmoothFn> inner;
      do {
        inner.push_back(expr());
      } while (eat(','));
      expect(')');
      Parser outer(s_.substr(outer_start, outer_end - outer_start), static_cast<int>(inner.size()), env_);
      return SmoothFn::compose(outer.parse_all(), inner);
    }
    if (c == 'x') {
      ++p_;
      size_t start = p_;
      while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
      if (start == p_) fail("expected coordinate index after 'x'");
      int i = std::stoi(std::string(s_.substr(start, p_ - start)));
      if (i < 1 || i > n_) fail("coordinate x" + std::to_string(i) + " outside arity " + std::to_string(n_));
      return SmoothFn::coordinate(n_, i - 1);
    }
    fail("unexpected character");
  }

  std::string_view s_;
  size_t p_ = 0;
  int n_;
  const SmoothFn::Env* env_;
};

}  // namespace

std::string SmoothFn::to_string(const NameMap* names) const { return str(*this, names, false, true); }

SmoothFn SmoothFn::parse(std::string_view text, int arity, const Env* env) {
  return Parser(text, arity, env).parse_all();
}

}  // namespace unispace
