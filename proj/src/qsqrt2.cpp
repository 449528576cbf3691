#include "hlab/qsqrt2.hpp"

#include <cctype>
#include <ostream>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace hlab {

int sign(const Rational& q) {
  if (q > 0) return 1;
  if (q < 0) return -1;
  return 0;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ParseError("empty rational");
  std::size_t i = 0;
  if (text[0] == '+' || text[0] == '-') i = 1;
  bool digits = false, slash = false, denom_digits = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      (slash ? denom_digits : digits) = true;
    } else if (c == '/' && !slash && digits) {
      slash = true;
    } else {
      throw ParseError("bad rational '" + text + "'");
    }
  }
  if (!digits || (slash && !denom_digits)) throw ParseError("bad rational '" + text + "'");
  Rational q(text.front() == '+' ? text.substr(1) : text);
  return q;
}

std::string to_string(const Rational& q) {
  const BigInt num = numerator(q);
  const BigInt den = denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

QSqrt2 QSqrt2::sqrt_pow2(int k) {
  if (k < 0) throw Error("sqrt_pow2 needs k >= 0");
  BigInt half_power = BigInt(1) << (k / 2);
  if (k % 2 == 0) return QSqrt2(Rational(half_power));
  return QSqrt2(Rational(0), Rational(half_power));
}

int QSqrt2::sign() const {
  const int sr = hlab::sign(rat);
  const int ss = hlab::sign(surd);
  if (ss == 0) return sr;
  if (sr == 0) return ss;
  if (sr == ss) return sr;
  // Opposite signs: compare |a| with |b|*sqrt2 by squaring.
  const Rational a2 = rat * rat;
  const Rational b2 = 2 * surd * surd;
  if (a2 == b2) return 0;  // cannot occur for rational components; kept for totality
  return a2 > b2 ? sr : ss;
}

QSqrt2 QSqrt2::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero in Q(sqrt2)");
  // (a + b sqrt2)^-1 = (a - b sqrt2) / (a^2 - 2 b^2); the denominator is
  // nonzero because sqrt2 is irrational.
  const Rational den = rat * rat - 2 * surd * surd;
  return {rat / den, -surd / den};
}

QSqrt2& QSqrt2::operator*=(const QSqrt2& o) {
  Rational r = rat * o.rat + 2 * surd * o.surd;
  Rational s = rat * o.surd + surd * o.rat;
  rat = std::move(r);
  surd = std::move(s);
  return *this;
}

int compare(const QSqrt2& a, const QSqrt2& b) { return (a - b).sign(); }

QSqrt2 abs(const QSqrt2& x) { return x.sign() < 0 ? -x : x; }

double to_double(const QSqrt2& x) {
  using Wide = boost::multiprecision::cpp_bin_float_50;
  static const Wide root2 = sqrt(Wide(2));
  const Wide value = Wide(x.rat) + Wide(x.surd) * root2;
  return value.convert_to<double>();
}

std::string to_string(const QSqrt2& x) {
  if (x.surd == 0) return to_string(x.rat);
  const std::string surd_part = to_string(abs(x.surd).convert_to<Rational>()) + "*sqrt2";
  if (x.rat == 0) return (x.surd < 0 ? "-" : "") + surd_part;
  return to_string(x.rat) + (x.surd < 0 ? "-" : "+") + surd_part;
}

QSqrt2 parse_qsqrt2(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty scalar");

  // Split into signed addends at top-level '+'/'-'.
  std::vector<std::string> addends;
  std::size_t start = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] == '+' || s[i] == '-') {
      addends.push_back(s.substr(start, i - start));
      start = (s[i] == '+') ? i + 1 : i;
      if (s[i] == '+' && start >= s.size()) throw ParseError("dangling sign in '" + text + "'");
    }
  }
  addends.push_back(s.substr(start));

  QSqrt2 total;
  for (std::string part : addends) {
    if (part.empty()) throw ParseError("bad scalar '" + text + "'");
    bool negative = false;
    if (part[0] == '+' || part[0] == '-') {
      negative = part[0] == '-';
      part = part.substr(1);
    }
    Rational value;
    bool is_surd = false;
    static const std::string kTag = "sqrt2";
    if (part == kTag) {
      value = 1;
      is_surd = true;
    } else if (part.size() > kTag.size() + 1 &&
               part.compare(part.size() - kTag.size(), kTag.size(), kTag) == 0 &&
               part[part.size() - kTag.size() - 1] == '*') {
      value = parse_rational(part.substr(0, part.size() - kTag.size() - 1));
      is_surd = true;
    } else {
      value = parse_rational(part);
    }
    if (negative) value = -value;
    if (is_surd)
      total.surd += value;
    else
      total.rat += value;
  }
  return total;
}

std::ostream& operator<<(std::ostream& os, const QSqrt2& x) { return os << to_string(x); }

}  // namespace hlab
