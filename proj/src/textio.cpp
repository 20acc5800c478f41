#include "kinetic/textio.hpp"

#include <cctype>

#include "kinetic/errors.hpp"

namespace kinetic {

namespace {

struct Token {
  enum Kind { Number, Ident, Op, End } kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(&s) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, tok_.line, tok_.col);
  }

 private:
  void advance() {
    const std::string& s = *s_;
    while (pos_ < s.size()) {
      char c = s[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= s.size()) {
      tok_ = {Token::End, "", line_, col_};
      return;
    }
    char c = s[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (pos_ < s.size() &&
             std::isdigit(static_cast<unsigned char>(s[pos_]))) {
        num += s[pos_++];
        ++col_;
      }
      tok_ = {Token::Number, num, tok_.line, tok_.col};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos_])) ||
              s[pos_] == '_')) {
        id += s[pos_++];
        ++col_;
      }
      tok_ = {Token::Ident, id, tok_.line, tok_.col};
      return;
    }
    std::string op(1, c);
    ++pos_;
    ++col_;
    tok_ = {Token::Op, op, tok_.line, tok_.col};
  }

  const std::string* s_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& text, const ParseContext& ctx)
      : lex_(text), ctx_(ctx) {
    dim_ = static_cast<int>(ctx.coords.size());
  }

  VelocityExpr parseAll() {
    VelocityExpr e = expression();
    if (lex_.peek().kind != Token::End) lex_.fail("unexpected trailing input");
    return e;
  }

 private:
  VelocityExpr expression() {
    bool neg = false;
    if (isOp("+") || isOp("-")) neg = lex_.take().text == "-";
    VelocityExpr acc = term();
    if (neg) acc = acc * Scalar(-1);
    while (isOp("+") || isOp("-")) {
      bool minus = lex_.take().text == "-";
      VelocityExpr t = term();
      acc += minus ? t * Scalar(-1) : t;
    }
    return acc;
  }

  VelocityExpr term() {
    VelocityExpr acc = factor();
    while (isOp("*") || isOp("/")) {
      bool div = lex_.take().text == "/";
      VelocityExpr f = factor();
      if (!div) {
        acc = acc * f;
      } else {
        acc = divide(acc, f);
      }
    }
    return acc;
  }

  VelocityExpr divide(const VelocityExpr& a, const VelocityExpr& b) {
    // divisor must be a single profile-free, velocity-free term
    RatFunc d = asCoefficient(b, "divisor");
    VelocityExpr out(dim_);
    for (const auto& [p, cm] : a.buckets())
      for (const auto& [e, c] : cm) out.add(p, e, c.divide(d));
    return out;
  }

  VelocityExpr factor() {
    VelocityExpr base = primary();
    if (isOp("^")) {
      Token caret = lex_.take();
      if (lex_.peek().kind != Token::Number)
        throw ParseError("expected integer exponent after '^'", caret.line,
                         caret.col);
      long e = std::stol(lex_.take().text);
      VelocityExpr acc(dim_);
      acc.add(Profile{}, Expo{}, RatFunc::constant(dim_, Scalar(1), ctx_.factors));
      for (long k = 0; k < e; ++k) acc = acc * base;
      return acc;
    }
    return base;
  }

  VelocityExpr primary() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Number) {
      Token num = lex_.take();
      mpq_class q(num.text);
      if (isOp("/")) {
        // lookahead: "3/4" as a rational literal only when followed by a
        // number; otherwise leave the '/' to the term loop
        Lexer save = lex_;
        lex_.take();
        if (lex_.peek().kind == Token::Number) {
          q /= mpq_class(lex_.take().text);
          q.canonicalize();
        } else {
          lex_ = save;
        }
      }
      return constant(Scalar(q));
    }
    if (t.kind == Token::Ident) return identifier();
    if (isOp("(")) {
      lex_.take();
      VelocityExpr e = expression();
      expectOp(")");
      return e;
    }
    lex_.fail("expected number, identifier or '('");
  }

  VelocityExpr identifier() {
    Token id = lex_.take();
    const std::string& name = id.text;
    if (name == "i") return constant(Scalar::i());
    if (name == "t") {
      if (!ctx_.allowTime)
        throw ParseError("time variable not allowed here", id.line, id.col);
      VelocityExpr e(dim_);
      e.add(Profile{Scalar(0), 1}, Expo{},
            RatFunc::constant(dim_, Scalar(1), ctx_.factors));
      return e;
    }
    if (name == "exp") {
      if (!ctx_.allowTime)
        throw ParseError("exponential profile not allowed here", id.line,
                         id.col);
      expectOp("(");
      VelocityExpr arg = expression();
      expectOp(")");
      // argument must be (Scalar) * t
      Scalar lam;
      bool ok = arg.buckets().size() == 1;
      if (ok) {
        const auto& [p, cm] = *arg.buckets().begin();
        ok = p.lambda.isZero() && p.tpow == 1 && cm.size() == 1 &&
             cm.begin()->first == Expo{} && cm.begin()->second.isPolynomial() &&
             cm.begin()->second.num().isConstant();
        if (ok) lam = cm.begin()->second.num().constantTerm();
      }
      if (!ok)
        throw ParseError("exp() argument must be a constant times t", id.line,
                         id.col);
      VelocityExpr e(dim_);
      e.add(Profile{lam, 0}, Expo{},
            RatFunc::constant(dim_, Scalar(1), ctx_.factors));
      return e;
    }
    for (int k = 0; k < dim_; ++k)
      if (ctx_.coords[k] == name) {
        VelocityExpr e(dim_);
        e.add(Profile{}, Expo{},
              RatFunc(SpacePoly::variable(dim_, k), ctx_.factors));
        return e;
      }
    if (ctx_.allowVelocities && name.size() > 1 && name[0] == 'd') {
      std::string base = name.substr(1);
      for (int k = 0; k < dim_; ++k)
        if (ctx_.coords[k] == base) {
          VelocityExpr e(dim_);
          e.add(Profile{}, Expo::unit(k),
                RatFunc::constant(dim_, Scalar(1), ctx_.factors));
          return e;
        }
    }
    auto it = ctx_.params.find(name);
    if (it != ctx_.params.end()) return constant(it->second);
    throw ParseError("unknown identifier '" + name + "'", id.line, id.col);
  }

  VelocityExpr constant(const Scalar& s) {
    VelocityExpr e(dim_);
    e.add(Profile{}, Expo{}, RatFunc::constant(dim_, s, ctx_.factors));
    return e;
  }

  RatFunc asCoefficient(const VelocityExpr& e, const char* what) {
    if (e.buckets().size() != 1) lex_.fail(std::string(what) + " must be time-free");
    const auto& [p, cm] = *e.buckets().begin();
    if (!(p == Profile{}) || cm.size() != 1 || !(cm.begin()->first == Expo{}))
      lex_.fail(std::string(what) + " must be a plain coordinate expression");
    return cm.begin()->second;
  }

  bool isOp(const char* op) const {
    return lex_.peek().kind == Token::Op && lex_.peek().text == op;
  }
  void expectOp(const char* op) {
    if (!isOp(op)) lex_.fail(std::string("expected '") + op + "'");
    lex_.take();
  }

  Lexer lex_;
  const ParseContext& ctx_;
  int dim_;
};

}  // namespace

VelocityExpr parse_expression(const std::string& text,
                              const ParseContext& ctx) {
  return Parser(text, ctx).parseAll();
}

SpacePoly parse_poly(const std::string& text, const ParseContext& ctx) {
  ParseContext c = ctx;
  c.allowVelocities = false;
  c.allowTime = false;
  VelocityExpr e = Parser(text, c).parseAll();
  if (e.isZero()) return SpacePoly(static_cast<int>(ctx.coords.size()));
  const auto& [p, cm] = *e.buckets().begin();
  const RatFunc& r = cm.begin()->second;
  if (!r.isPolynomial())
    throw ParseError("expected a polynomial, found denominator factors", 1, 1);
  return r.num();
}

RatFunc parse_ratfunc(const std::string& text, const ParseContext& ctx) {
  ParseContext c = ctx;
  c.allowVelocities = false;
  c.allowTime = false;
  VelocityExpr e = Parser(text, c).parseAll();
  if (e.isZero())
    return RatFunc(SpacePoly(static_cast<int>(ctx.coords.size())), ctx.factors);
  return e.buckets().begin()->second.begin()->second;
}

namespace {

// coefficient in front of a monomial: "", "-", "2*", "3/4*", "i*", "(1+2*i)*"
std::string coeffPrefix(const Scalar& c, bool leading, std::string* sep) {
  std::string sign;
  Scalar v = c;
  bool negReal = c.im().get_num() == 0 && c.re() < 0;
  bool negImag = c.re() == 0 && c.im() < 0;
  if (negReal || negImag) {
    v = -v;
    sign = leading ? "-" : " - ";
  } else {
    sign = leading ? "" : " + ";
  }
  *sep = sign;
  if (v.isOne()) return "";
  if (v.re() == 0 && v.im() == 1) return "i*";
  if (v.im() == 0) return v.re().get_str() + "*";
  if (v.re() == 0) return v.im().get_str() + "*i*";
  std::string s = v.str();
  // canonicalize "a+bi" to "(a+b*i)" for expression round-trips
  std::string out = "(";
  for (size_t k = 0; k < s.size(); ++k) {
    if (s[k] == 'i') out += "*i";
    else out += s[k];
  }
  out += ")*";
  return out;
}

std::string monoStr(const Expo& m, const std::vector<std::string>& names) {
  std::string out;
  for (size_t k = 0; k < names.size(); ++k) {
    if (m.e[k] == 0) continue;
    if (!out.empty()) out += "*";
    out += names[k];
    if (m.e[k] > 1) out += "^" + std::to_string(m.e[k]);
  }
  return out;
}

}  // namespace

std::string poly_str(const SpacePoly& p,
                     const std::vector<std::string>& names) {
  if (p.isZero()) return "0";
  std::string out;
  bool leading = true;
  for (const auto& [m, c] : p.terms()) {
    std::string sep;
    std::string pre = coeffPrefix(c, leading, &sep);
    std::string mono = monoStr(m, names);
    out += sep;
    if (mono.empty()) {
      // bare coefficient term
      Scalar v = c;
      bool neg = (c.im() == 0 && c.re() < 0) || (c.re() == 0 && c.im() < 0);
      if (neg) v = -v;
      std::string s = v.str();
      std::string lit;
      for (char ch : s) {
        if (ch == 'i')
          lit += lit.empty() || lit == "-" ? "i" : "*i";
        else
          lit += ch;
      }
      if (!v.isReal() && v.re() != 0) lit = "(" + lit + ")";
      out += lit;
    } else {
      out += pre + mono;
    }
    leading = false;
  }
  return out;
}

std::string ratfunc_str(const RatFunc& r,
                        const std::vector<std::string>& names) {
  std::string out = poly_str(r.num(), names);
  std::string den;
  for (size_t k = 0; k < r.denPowers().size(); ++k) {
    int p = r.denPowers()[k];
    if (p == 0) continue;
    if (!den.empty()) den += "*";
    std::string f = poly_str(r.factorSet()->factor(k), names);
    bool needParen = f.find_first_of("+- ") != std::string::npos;
    den += needParen ? "(" + f + ")" : f;
    if (p > 1) den += "^" + std::to_string(p);
  }
  if (den.empty()) return out;
  bool needParen = r.num().termCount() > 1;
  return (needParen ? "(" + out + ")" : out) + "/" +
         (den.find('*') != std::string::npos ? "(" + den + ")" : den);
}

std::string velocity_str(const VelocityExpr& e,
                         const std::vector<std::string>& coords,
                         const std::string& velPrefix) {
  if (e.isZero()) return "0";
  std::vector<std::string> names;  // coords then velocities
  for (const auto& c : coords) names.push_back(c);
  std::string out;
  for (const auto& [prof, cm] : e.buckets()) {
    std::string profStr;
    if (!prof.lambda.isZero()) {
      std::string lam = prof.lambda.str();
      std::string lit;
      for (char ch : lam) {
        if (ch == 'i')
          lit += (lit.empty() || lit == "-") ? "i" : "*i";
        else
          lit += ch;
      }
      profStr += "exp(" + (lit == "1" ? std::string("t") : lit + "*t") + ")";
    }
    if (prof.tpow > 0) {
      if (!profStr.empty()) profStr += "*";
      profStr += "t";
      if (prof.tpow > 1) profStr += "^" + std::to_string(prof.tpow);
    }
    // body: sum over velocity monomials of coeff * dmono
    std::string body;
    bool leading = true;
    for (const auto& [vm, c] : cm) {
      std::string vmono;
      for (size_t k = 0; k < coords.size(); ++k) {
        if (vm.e[k] == 0) continue;
        if (!vmono.empty()) vmono += "*";
        vmono += velPrefix + coords[k];
        if (vm.e[k] > 1) vmono += "^" + std::to_string(vm.e[k]);
      }
      std::string cs = ratfunc_str(c, coords);
      bool isNeg = !cs.empty() && cs[0] == '-';
      std::string mag = isNeg ? cs.substr(1) : cs;
      bool simple = mag.find_first_of("+-") == std::string::npos ||
                    (mag.find(" + ") == std::string::npos &&
                     mag.find(" - ") == std::string::npos);
      body += leading ? (isNeg ? "-" : "") : (isNeg ? " - " : " + ");
      if (vmono.empty()) {
        body += simple ? mag : "(" + mag + ")";
      } else if (mag == "1") {
        body += vmono;
      } else {
        body += (simple ? mag : "(" + mag + ")") + "*" + vmono;
      }
      leading = false;
    }
    std::string block;
    bool bareBody = cm.size() == 1 && !body.empty() && body[0] != '-' &&
                    body.find(" + ") == std::string::npos &&
                    body.find(" - ") == std::string::npos;
    if (profStr.empty())
      block = body;
    else if (bareBody)
      block = profStr + "*" + body;
    else
      block = profStr + "*(" + body + ")";
    if (!out.empty()) out += " + ";
    out += block;
  }
  return out;
}

}  // namespace kinetic
