#pragma once

#include <iosfwd>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "hlab/errors.hpp"
#include "hlab/rational.hpp"

namespace hlab {

/// Element a + b*sqrt(2) of the real quadratic field Q(sqrt 2).
/// The representation is unique, so equality is componentwise.
struct QSqrt2 {
  Rational rat;   // a
  Rational surd;  // b

  QSqrt2() = default;
  QSqrt2(int v) : rat(v) {}  // implicit so integer literals mix into expressions
  QSqrt2(Rational r) : rat(std::move(r)) {}
  QSqrt2(Rational r, Rational s) : rat(std::move(r)), surd(std::move(s)) {}

  static QSqrt2 sqrt2() { return {Rational(0), Rational(1)}; }

  /// sqrt(2^k) for k >= 0: 2^(k/2) when k is even, 2^((k-1)/2)*sqrt2 when odd.
  static QSqrt2 sqrt_pow2(int k);

  bool is_zero() const { return rat == 0 && surd == 0; }

  /// Exact sign in {-1, 0, +1}, decided by rational comparisons only.
  int sign() const;

  /// Field inverse; throws DivisionByZero on the zero element.
  QSqrt2 inverse() const;

  bool operator==(const QSqrt2&) const = default;

  QSqrt2 operator-() const { return {-rat, -surd}; }
  QSqrt2& operator+=(const QSqrt2& o) {
    rat += o.rat;
    surd += o.surd;
    return *this;
  }
  QSqrt2& operator-=(const QSqrt2& o) {
    rat -= o.rat;
    surd -= o.surd;
    return *this;
  }
  QSqrt2& operator*=(const QSqrt2& o);
  QSqrt2& operator/=(const QSqrt2& o) { return *this *= o.inverse(); }
};

inline QSqrt2 operator+(QSqrt2 a, const QSqrt2& b) { return a += b; }
inline QSqrt2 operator-(QSqrt2 a, const QSqrt2& b) { return a -= b; }
inline QSqrt2 operator*(QSqrt2 a, const QSqrt2& b) { return a *= b; }
inline QSqrt2 operator/(QSqrt2 a, const QSqrt2& b) { return a /= b; }

/// Three-way comparison consistent with the real values.
int compare(const QSqrt2& a, const QSqrt2& b);

inline bool operator<(const QSqrt2& a, const QSqrt2& b) { return compare(a, b) < 0; }
inline bool operator>(const QSqrt2& a, const QSqrt2& b) { return compare(a, b) > 0; }
inline bool operator<=(const QSqrt2& a, const QSqrt2& b) { return compare(a, b) <= 0; }
inline bool operator>=(const QSqrt2& a, const QSqrt2& b) { return compare(a, b) >= 0; }

QSqrt2 abs(const QSqrt2& x);

/// Nearest double, computed through a 50-digit floating intermediate.
double to_double(const QSqrt2& x);

/// Canonical scalar text: "a", "b*sqrt2", "a+b*sqrt2" or "a-b*sqrt2",
/// with each rational rendered as "p" or "p/q".
std::string to_string(const QSqrt2& x);

/// Inverse of to_string; also accepts bare "sqrt2" / "-sqrt2".
QSqrt2 parse_qsqrt2(const std::string& text);

std::ostream& operator<<(std::ostream& os, const QSqrt2& x);

using QMatrix = Eigen::Matrix<QSqrt2, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace hlab

template <>
struct Eigen::NumTraits<hlab::QSqrt2> : Eigen::GenericNumTraits<hlab::QSqrt2> {
  using Real = hlab::QSqrt2;
  using NonInteger = hlab::QSqrt2;
  using Nested = hlab::QSqrt2;
  using Literal = int;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 30,
    MulCost = 60,
  };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static int digits10() { return 0; }
};
