#include "hlab/certificates.hpp"

#include <algorithm>
#include <map>

namespace hlab {

Polynomial<QSqrt2> SquareDecomposition::expand(int num_vars) const {
  Polynomial<QSqrt2> total(num_vars);
  for (const auto& [w, poly] : squares) {
    if (poly.num_vars() != num_vars) throw DimensionError("square dimension mismatch");
    total += w * (poly * poly);
  }
  return total;
}

std::string to_string(const MultiplierClass& c) {
  std::string tags = "SOS";
  if (c.sdsos) tags += " SDSOS";
  if (c.dsos) tags += " DSOS";
  return tags;
}

MultiplierClass classify_multiplier(const SquareDecomposition& sigma) {
  MultiplierClass result;
  result.sdsos = true;
  std::map<MultiIndex, int, GradedLex> basis_index;
  for (const auto& [w, poly] : sigma.squares) {
    if (w.sign() < 0) throw InvalidDecomposition("negative weight in a square decomposition");
    if (poly.terms().size() > 2) result.sdsos = false;
    for (const auto& [alpha, c] : poly.terms()) basis_index.emplace(alpha, 0);
  }

  int k = 0;
  for (auto& [alpha, idx] : basis_index) idx = k++;
  QMatrix gram(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) gram(i, j) = QSqrt2(0);
  for (const auto& [w, poly] : sigma.squares) {
    std::vector<std::pair<int, QSqrt2>> coeffs;
    for (const auto& [alpha, c] : poly.terms()) coeffs.emplace_back(basis_index.at(alpha), c);
    for (const auto& [i, ci] : coeffs)
      for (const auto& [j, cj] : coeffs) gram(i, j) += w * ci * cj;
  }

  result.dsos = true;
  for (int i = 0; i < k && result.dsos; ++i) {
    QSqrt2 off_sum;
    for (int j = 0; j < k; ++j)
      if (j != i) off_sum += abs(gram(i, j));
    if (gram(i, i).sign() < 0 || (gram(i, i) - off_sum).sign() < 0) result.dsos = false;
  }
  return result;
}

Polynomial<QSqrt2> verify_identity(const PolyProblem<QSqrt2>& p, const Certificate& cert) {
  const int n = p.num_vars;
  if (cert.sigmas.size() != p.constraints.size() + 1)
    throw DimensionError("certificate must provide sigma_0 through sigma_m");
  if (cert.r < 0) throw Error("certificate premultiplication power must be nonnegative");

  Polynomial<QSqrt2> lhs =
      pow(squared_norm_poly<QSqrt2>(n), cert.r) *
      (p.objective - Polynomial<QSqrt2>::constant(n, cert.lambda));
  Polynomial<QSqrt2> rhs = cert.sigmas[0].expand(n);
  for (std::size_t i = 0; i < p.constraints.size(); ++i)
    rhs += cert.sigmas[i + 1].expand(n) * p.constraints[i];
  return lhs - rhs;
}

bool psd_2x2(const QSqrt2& a, const QSqrt2& b, const QSqrt2& c) {
  return a.sign() >= 0 && c.sign() >= 0 && (a * c - b * b).sign() >= 0;
}

bool psd_exact(const QMatrix& input) {
  QMatrix a = input;
  const int n = static_cast<int>(a.rows());
  for (int k = 0; k < n; ++k) {
    const int s = a(k, k).sign();
    if (s < 0) return false;
    if (s == 0) {
      // In a PSD matrix a zero diagonal entry zeroes its whole row.
      for (int j = k + 1; j < n; ++j)
        if (!a(k, j).is_zero()) return false;
      continue;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = i; j < n; ++j) a(i, j) -= a(k, i) * a(k, j) / a(k, k);
  }
  return true;
}

bool check_moment_feasibility(const MomentSequence<QSqrt2>& y, int d, const Polynomial<QSqrt2>& g) {
  const int n = y.num_vars();
  if (g.num_vars() != n) throw DimensionError("constraint dimension mismatch");
  const int k = degree_bound(g);
  if (d < k) throw OrderTooSmall("order " + std::to_string(d) + " is below the constraint degree bound");
  if (y.max_degree() < 2 * d + *g.degree())
    throw IncompleteSequence("feasibility check at order " + std::to_string(d) +
                             " needs moments up to degree " + std::to_string(2 * d + *g.degree()));

  if (!(y.at(MultiIndex::zero(n)) == QSqrt2(1))) return false;

  const auto basis = monomials_up_to(n, d);
  for (const auto& alpha : basis)
    if (y.at(alpha + alpha).sign() < 0) return false;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (!psd_2x2(y.at(basis[i] + basis[i]), y.at(basis[i] + basis[j]), y.at(basis[j] + basis[j])))
        return false;

  // Localizing analogues run over the full order-d basis (the stored degree
  // 2d + deg g admits them); a measure on g >= 0 satisfies every such minor.
  const auto loc_basis = monomials_up_to(n, d);
  auto loc = [&](const MultiIndex& a, const MultiIndex& b) {
    QSqrt2 v;
    for (const auto& [gamma, c] : g.terms()) v += c * y.at(a + b + gamma);
    return v;
  };
  for (const auto& alpha : loc_basis)
    if (loc(alpha, alpha).sign() < 0) return false;
  for (std::size_t i = 0; i < loc_basis.size(); ++i)
    for (std::size_t j = i + 1; j < loc_basis.size(); ++j)
      if (!psd_2x2(loc(loc_basis[i], loc_basis[i]), loc(loc_basis[i], loc_basis[j]),
                   loc(loc_basis[j], loc_basis[j])))
        return false;
  return true;
}

std::vector<QSqrt2> kkt_residual(const std::vector<QSqrt2>& x, const QSqrt2& lam,
                                 const PolyProblem<QSqrt2>& p) {
  if (p.constraints.size() != 1)
    throw UnsupportedProblem("kkt_residual handles exactly one constraint");
  const int n = p.num_vars;
  if (static_cast<int>(x.size()) != n) throw DimensionError("point dimension mismatch");

  std::vector<QSqrt2> res;
  res.reserve(static_cast<std::size_t>(n) + 3);
  const auto& g = p.constraints[0];
  for (int i = 0; i < n; ++i)
    res.push_back(eval(partial(p.objective, i), x) - lam * eval(partial(g, i), x));
  res.push_back(lam.sign() < 0 ? lam : QSqrt2(0));
  const QSqrt2 gval = eval(g, x);
  res.push_back(gval.sign() < 0 ? gval : QSqrt2(0));
  res.push_back(lam * gval);
  return res;
}

bool check_hessian_psd_constant(const Polynomial<QSqrt2>& p) {
  const int n = p.num_vars();
  QMatrix hess(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Polynomial<QSqrt2> h = partial(partial(p, i), j);
      if (!h.is_zero() && *h.degree() > 0)
        throw UnsupportedDegree("Hessian is not constant; higher-degree convexity checks are out of scope");
      hess(i, j) = h.coeff(MultiIndex::zero(n));
    }
  return psd_exact(hess);
}

NonexistenceReport certify_nonexistence_report(const PolyProblem<QSqrt2>& p, Hierarchy kind,
                                               const std::vector<int>& orders,
                                               const NonexistenceOptions& opts) {
  if (orders.empty()) throw Error("certify_nonexistence_report needs at least one order");
  NonexistenceReport report;
  report.kind = kind;
  report.r = opts.r;

  const PolyProblem<double> pd = to_double(p);
  bool sequence_ok_everywhere = static_cast<bool>(opts.exact_sequence);

  for (int d : orders) {
    NonexistenceRow row;
    row.order = d;
    const ConicProgram cp = build_relaxation(pd, d, kind, opts.r);
    const SolveResult sr = solve(cp, opts.solve);
    if (sr.status == SolveStatus::NumericalFailure)
      throw SolverError("numerical failure at order " + std::to_string(d));
    row.status = sr.status;
    row.bound = sr.dual_value;
    row.primal = sr.primal_value;
    if (opts.reference_value)
      row.gap_to_reference = to_double(*opts.reference_value) - sr.dual_value;

    if (opts.exact_sequence && p.constraints.size() == 1 && kind != Hierarchy::Lasserre) {
      const int need = 2 * d + *p.constraints[0].degree();
      const auto y = MomentSequence<QSqrt2>::tabulate(p.num_vars, need, opts.exact_sequence);
      row.sequence_feasible = check_moment_feasibility(y, d, p.constraints[0]);
    }
    sequence_ok_everywhere = sequence_ok_everywhere && row.sequence_feasible;
    report.rows.push_back(row);
  }

  if (sequence_ok_everywhere && kind != Hierarchy::Lasserre) {
    const int need = p.objective.degree().value_or(0) + 2 * opts.r;
    const auto y = MomentSequence<QSqrt2>::tabulate(p.num_vars, need, opts.exact_sequence);
    const QSqrt2 value = riesz(p.objective, y);
    if (opts.r == 0) {
      report.exact_cap = value;
      report.note =
          "the registered sequence is exactly feasible at every tested order, so weak duality caps "
          "all dual values by its objective value";
    } else {
      const QSqrt2 rvalue = riesz(pow(squared_norm_poly<QSqrt2>(p.num_vars), opts.r) * p.objective, y);
      if (!(rvalue == value))
        throw Error("premultiplied Riesz value does not match the plain value");
      report.exact_cap = QSqrt2(0);
      report.note =
          "the registered sequence stays feasible under the premultiplied objective with the same "
          "negative value, so no dual value can reach 0";
    }
  }
  return report;
}

}  // namespace hlab
