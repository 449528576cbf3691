#include <cctype>
#include <string>
#include <vector>

#include "hlab/polynomial.hpp"

namespace hlab {

std::string to_text(const Polynomial<QSqrt2>& p) {
  if (p.is_zero()) return "(0)";
  std::string out;
  for (const auto& [alpha, c] : p.terms()) {
    if (!out.empty()) out += " + ";
    out += "(" + to_string(c) + ")";
    for (int i = 0; i < alpha.size(); ++i) {
      if (alpha[i] == 0) continue;
      out += "*x" + std::to_string(i + 1);
      if (alpha[i] > 1) out += "^" + std::to_string(alpha[i]);
    }
  }
  return out;
}

namespace {

// One term: "(scalar)" followed by "*x<i>" or "*x<i>^<e>" factors.
void parse_term(const std::string& term, int num_vars, Polynomial<QSqrt2>& into) {
  if (term.empty() || term[0] != '(') throw ParseError("term must start with a coefficient in parentheses: '" + term + "'");
  const std::size_t close = term.find(')');
  if (close == std::string::npos) throw ParseError("unbalanced parentheses in '" + term + "'");
  const QSqrt2 coeff = parse_qsqrt2(term.substr(1, close - 1));

  std::vector<int> exponents(static_cast<std::size_t>(num_vars), 0);
  std::size_t i = close + 1;
  while (i < term.size()) {
    if (term[i] != '*' || i + 1 >= term.size() || term[i + 1] != 'x')
      throw ParseError("bad monomial factor in '" + term + "'");
    i += 2;
    std::size_t j = i;
    while (j < term.size() && std::isdigit(static_cast<unsigned char>(term[j]))) ++j;
    if (j == i) throw ParseError("missing variable index in '" + term + "'");
    const int var = std::stoi(term.substr(i, j - i));
    if (var < 1 || var > num_vars) throw ParseError("variable x" + std::to_string(var) + " out of range");
    i = j;
    int e = 1;
    if (i < term.size() && term[i] == '^') {
      ++i;
      j = i;
      while (j < term.size() && std::isdigit(static_cast<unsigned char>(term[j]))) ++j;
      if (j == i) throw ParseError("missing exponent in '" + term + "'");
      e = std::stoi(term.substr(i, j - i));
      i = j;
    }
    exponents[static_cast<std::size_t>(var - 1)] += e;
  }
  into.add_term(MultiIndex(exponents), coeff);
}

}  // namespace

Polynomial<QSqrt2> parse_polynomial(const std::string& text, int num_vars) {
  if (num_vars < 1) throw DimensionError("parse_polynomial needs at least one variable");
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty polynomial");

  Polynomial<QSqrt2> p(num_vars);
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == '+' && depth == 0) {
      parse_term(s.substr(start, i - start), num_vars, p);
      start = i + 1;
    }
  }
  if (depth != 0) throw ParseError("unbalanced parentheses in '" + text + "'");
  parse_term(s.substr(start), num_vars, p);
  return p;
}

}  // namespace hlab
