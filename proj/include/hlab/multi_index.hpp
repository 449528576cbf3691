#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace hlab {

/// Exponent vector of a monomial, one entry per variable.
struct MultiIndex {
  std::vector<int> exponents;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> e);
  MultiIndex(std::initializer_list<int> e);

  static MultiIndex zero(int num_vars) { return MultiIndex(std::vector<int>(num_vars, 0)); }

  int size() const { return static_cast<int>(exponents.size()); }
  int degree() const;
  int operator[](int i) const { return exponents[static_cast<std::size_t>(i)]; }

  bool operator==(const MultiIndex&) const = default;
  MultiIndex operator+(const MultiIndex& o) const;
};

/// Graded lexicographic order: lower degree first; within a degree the index
/// with the larger leading exponent comes first, so (1,0) precedes (0,1).
/// Both sides must have the same dimension.
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

struct GradedLex {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const { return graded_lex_less(a, b); }
};

std::int64_t binomial(int n, int k);

/// All multi-indices over n variables with degree <= d in graded-lex order,
/// starting from the zero index. Throws DimensionError when n < 1.
std::vector<MultiIndex> monomials_up_to(int n, int d);

std::string to_string(const MultiIndex& a);  // "(2,0)"

}  // namespace hlab
