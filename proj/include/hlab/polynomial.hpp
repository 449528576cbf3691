#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hlab/errors.hpp"
#include "hlab/multi_index.hpp"
#include "hlab/qsqrt2.hpp"

namespace hlab {

/// Sparse multivariate polynomial over coefficient type T (double or QSqrt2).
/// Terms live in a graded-lex map; zero coefficients are never stored, so the
/// zero polynomial is the empty map and its degree is undefined.
template <typename T>
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, T, GradedLex>;

  explicit Polynomial(int num_vars = 0) : num_vars_(num_vars) {}

  static Polynomial constant(int num_vars, T value) {
    Polynomial p(num_vars);
    p.add_term(MultiIndex::zero(num_vars), std::move(value));
    return p;
  }

  static Polynomial variable(int num_vars, int var) {
    std::vector<int> e(static_cast<std::size_t>(num_vars), 0);
    e[static_cast<std::size_t>(var)] = 1;
    Polynomial p(num_vars);
    p.add_term(MultiIndex(std::move(e)), T(1));
    return p;
  }

  static Polynomial monomial(int num_vars, MultiIndex alpha, T value) {
    Polynomial p(num_vars);
    p.add_term(std::move(alpha), std::move(value));
    return p;
  }

  int num_vars() const { return num_vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// nullopt for the zero polynomial; callers must handle that case.
  std::optional<int> degree() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.rbegin()->first.degree();
  }

  T coeff(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? T{} : it->second;
  }

  void add_term(const MultiIndex& alpha, T value) {
    if (alpha.size() != num_vars_) throw DimensionError("term dimension mismatch");
    auto [it, fresh] = terms_.try_emplace(alpha, value);
    if (!fresh) it->second = it->second + value;
    if (it->second == T{}) terms_.erase(it);
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_vars(o);
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_vars(o);
    for (const auto& [a, c] : o.terms_) add_term(a, -c);
    return *this;
  }
  Polynomial& operator*=(const T& c) {
    TermMap scaled;
    for (const auto& [a, v] : terms_) {
      T w = v * c;
      if (!(w == T{})) scaled.emplace(a, std::move(w));
    }
    terms_ = std::move(scaled);
    return *this;
  }
  Polynomial operator-() const {
    Polynomial r(num_vars_);
    for (const auto& [a, c] : terms_) r.terms_.emplace(a, -c);
    return r;
  }
  Polynomial operator*(const Polynomial& o) const {
    check_vars(o);
    Polynomial r(num_vars_);
    for (const auto& [a, ca] : terms_)
      for (const auto& [b, cb] : o.terms_) r.add_term(a + b, ca * cb);
    return r;
  }

  bool operator==(const Polynomial&) const = default;

 private:
  void check_vars(const Polynomial& o) const {
    if (num_vars_ != o.num_vars_) throw DimensionError("polynomial dimension mismatch");
  }

  int num_vars_ = 0;
  TermMap terms_;
};

template <typename T>
Polynomial<T> operator+(Polynomial<T> a, const Polynomial<T>& b) {
  return a += b;
}
template <typename T>
Polynomial<T> operator-(Polynomial<T> a, const Polynomial<T>& b) {
  return a -= b;
}
template <typename T>
Polynomial<T> operator*(const T& c, Polynomial<T> p) {
  return p *= c;
}
template <typename T>
Polynomial<T> operator*(Polynomial<T> p, const T& c) {
  return p *= c;
}

template <typename T>
T eval(const Polynomial<T>& p, const std::vector<T>& x) {
  if (static_cast<int>(x.size()) != p.num_vars())
    throw DimensionError("evaluation point dimension mismatch");
  T total{};
  for (const auto& [alpha, c] : p.terms()) {
    T term = c;
    for (int i = 0; i < p.num_vars(); ++i)
      for (int k = 0; k < alpha[i]; ++k) term = term * x[i];
    total = total + term;
  }
  return total;
}

template <typename T>
Polynomial<T> partial(const Polynomial<T>& p, int var) {
  Polynomial<T> r(p.num_vars());
  for (const auto& [alpha, c] : p.terms()) {
    const int e = alpha[var];
    if (e == 0) continue;
    MultiIndex beta = alpha;
    beta.exponents[static_cast<std::size_t>(var)] -= 1;
    r.add_term(beta, c * T(e));
  }
  return r;
}

template <typename T>
Polynomial<T> pow(const Polynomial<T>& p, int k) {
  if (k < 0) throw Error("polynomial power needs k >= 0");
  Polynomial<T> r = Polynomial<T>::constant(p.num_vars(), T(1));
  for (int i = 0; i < k; ++i) r = r * p;
  return r;
}

/// x_1^2 + ... + x_n^2, the premultiplier base of the r-strengthened hierarchies.
template <typename T>
Polynomial<T> squared_norm_poly(int num_vars) {
  Polynomial<T> q(num_vars);
  for (int i = 0; i < num_vars; ++i) {
    std::vector<int> e(static_cast<std::size_t>(num_vars), 0);
    e[static_cast<std::size_t>(i)] = 2;
    q.add_term(MultiIndex(std::move(e)), T(1));
  }
  return q;
}

inline Polynomial<double> to_double(const Polynomial<QSqrt2>& p) {
  Polynomial<double> r(p.num_vars());
  for (const auto& [a, c] : p.terms()) r.add_term(a, to_double(c));
  return r;
}

/// Canonical text: "(coeff)" plus "*x<i>^<e>" factors, terms joined by " + "
/// in ascending graded-lex order; the zero polynomial renders as "(0)".
std::string to_text(const Polynomial<QSqrt2>& p);

/// Inverse of to_text. Variables are named x1..x<num_vars>.
Polynomial<QSqrt2> parse_polynomial(const std::string& text, int num_vars);

}  // namespace hlab
