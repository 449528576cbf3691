#include "hlab/multi_index.hpp"

#include <numeric>

#include "hlab/errors.hpp"

namespace hlab {

MultiIndex::MultiIndex(std::vector<int> e) : exponents(std::move(e)) {
  for (int v : exponents)
    if (v < 0) throw DimensionError("multi-index exponents must be nonnegative");
}

MultiIndex::MultiIndex(std::initializer_list<int> e) : MultiIndex(std::vector<int>(e)) {}

int MultiIndex::degree() const {
  return std::accumulate(exponents.begin(), exponents.end(), 0);
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  if (size() != o.size()) throw DimensionError("multi-index dimension mismatch");
  MultiIndex r;
  r.exponents.resize(exponents.size());
  for (std::size_t i = 0; i < exponents.size(); ++i)
    r.exponents[i] = exponents[i] + o.exponents[i];
  return r;
}

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
  const int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.exponents.size() && i < b.exponents.size(); ++i) {
    if (a.exponents[i] != b.exponents[i]) return a.exponents[i] > b.exponents[i];
  }
  return false;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

namespace {

void emit_exact_degree(int remaining_vars, int total, std::vector<int>& prefix,
                       std::vector<MultiIndex>& out) {
  if (remaining_vars == 1) {
    prefix.push_back(total);
    out.push_back(MultiIndex(prefix));
    prefix.pop_back();
    return;
  }
  for (int e = total; e >= 0; --e) {
    prefix.push_back(e);
    emit_exact_degree(remaining_vars - 1, total - e, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> monomials_up_to(int n, int d) {
  if (n < 1) throw DimensionError("monomials_up_to needs at least one variable");
  if (d < 0) throw DimensionError("monomials_up_to needs d >= 0");
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(binomial(n + d, d)));
  std::vector<int> prefix;
  for (int t = 0; t <= d; ++t) emit_exact_degree(n, t, prefix, out);
  return out;
}

std::string to_string(const MultiIndex& a) {
  std::string s = "(";
  for (int i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + ")";
}

}  // namespace hlab
