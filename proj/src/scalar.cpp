#include "kinetic/scalar.hpp"

#include <cctype>

#include "kinetic/errors.hpp"

namespace kinetic {

size_t Scalar::digitSize() const {
  auto limbs = [](const mpq_class& q) {
    return mpz_size(q.get_num().get_mpz_t()) +
           mpz_size(q.get_den().get_mpz_t());
  };
  return limbs(re_) + limbs(im_);
}

static std::string ratStr(const mpq_class& q) {
  return q.get_str();
}

std::string Scalar::str() const {
  if (isZero()) return "0";
  std::string out;
  if (re_ != 0) out += ratStr(re_);
  if (im_ != 0) {
    if (!out.empty() && im_ > 0) out += "+";
    if (im_ == -1)
      out += "-";
    else if (im_ != 1)
      out += ratStr(im_);
    out += "i";
  }
  return out;
}

namespace {

// rational := ['+'|'-'] digits ['/' digits]
bool parseRational(const std::string& s, size_t& pos, mpq_class& out) {
  size_t start = pos;
  std::string num;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    if (s[pos] == '-') num += '-';  // mpq_set_str rejects a leading '+'
    ++pos;
  }
  size_t d0 = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
    num += s[pos++];
  if (pos == d0) {
    pos = start;
    return false;
  }
  std::string den = "1";
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    den.clear();
    size_t d1 = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      den += s[pos++];
    if (pos == d1) {
      pos = start;
      return false;
    }
  }
  out = mpq_class(num + "/" + den);
  out.canonicalize();
  return true;
}

}  // namespace

Scalar Scalar::parse(const std::string& text) {
  // Accepted forms: "a", "bi", "a+bi", "a-bi", "i", "-i", "a+i", "a-i".
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ParseError("empty scalar literal", 1, 1);

  size_t pos = 0;
  mpq_class first;
  bool haveFirst = parseRational(s, pos, first);

  auto atI = [&](size_t p) { return p < s.size() && s[p] == 'i'; };

  if (!haveFirst) {
    // "i", "-i", "+i"
    mpq_class sign = 1;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      if (s[pos] == '-') sign = -1;
      ++pos;
    }
    if (atI(pos) && pos + 1 == s.size()) return Scalar(mpq_class(0), sign);
    throw ParseError("malformed scalar literal '" + text + "'", 1,
                     static_cast<int>(pos) + 1);
  }

  if (pos == s.size()) return Scalar(first);
  if (atI(pos) && pos + 1 == s.size()) return Scalar(mpq_class(0), first);

  // first is the real part; expect signed imaginary part ending in 'i'
  if (s[pos] != '+' && s[pos] != '-')
    throw ParseError("malformed scalar literal '" + text + "'", 1,
                     static_cast<int>(pos) + 1);
  mpq_class second;
  size_t save = pos;
  if (parseRational(s, pos, second)) {
    if (atI(pos) && pos + 1 == s.size()) return Scalar(first, second);
  } else {
    // "a+i" / "a-i"
    mpq_class sign = (s[save] == '-') ? -1 : 1;
    pos = save + 1;
    if (atI(pos) && pos + 1 == s.size()) return Scalar(first, sign);
  }
  throw ParseError("malformed scalar literal '" + text + "'", 1,
                   static_cast<int>(pos) + 1);
}

}  // namespace kinetic
