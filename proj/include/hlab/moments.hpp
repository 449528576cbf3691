#pragma once

#include <map>
#include <vector>

#include <Eigen/Core>

#include "hlab/polynomial.hpp"

namespace hlab {

/// Dense table of moments y_alpha for every |alpha| <= max_degree.
/// Problem sizes here are tiny, so the full graded-lex table is stored.
template <typename T>
class MomentSequence {
 public:
  MomentSequence(int num_vars, int max_degree)
      : num_vars_(num_vars),
        max_degree_(max_degree),
        labels_(monomials_up_to(num_vars, max_degree)),
        values_(labels_.size(), T{}) {
    for (std::size_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], i);
  }

  template <typename Gen>
  static MomentSequence tabulate(int num_vars, int max_degree, Gen&& gen) {
    MomentSequence y(num_vars, max_degree);
    for (std::size_t i = 0; i < y.labels_.size(); ++i) y.values_[i] = gen(y.labels_[i]);
    return y;
  }

  int num_vars() const { return num_vars_; }
  int max_degree() const { return max_degree_; }
  const std::vector<MultiIndex>& labels() const { return labels_; }

  const T& at(const MultiIndex& alpha) const { return values_[find(alpha)]; }
  T& at(const MultiIndex& alpha) { return values_[find(alpha)]; }

  bool normalized() const { return at(MultiIndex::zero(num_vars_)) == T(1); }

 private:
  std::size_t find(const MultiIndex& alpha) const {
    if (alpha.size() != num_vars_) throw DimensionError("moment index dimension mismatch");
    auto it = index_.find(alpha);
    if (it == index_.end())
      throw IncompleteSequence("moment y_" + to_string(alpha) + " exceeds stored degree " +
                               std::to_string(max_degree_));
    return it->second;
  }

  int num_vars_, max_degree_;
  std::vector<MultiIndex> labels_;
  std::map<MultiIndex, std::size_t, GradedLex> index_;
  std::vector<T> values_;
};

/// Symmetric matrix with moment-basis row labels.
template <typename T>
struct SymMatrix {
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> entries;
  std::vector<MultiIndex> row_labels;
  int dim() const { return static_cast<int>(entries.rows()); }
};

/// Riesz functional: pairs f's coefficients against the moment table.
template <typename T>
T riesz(const Polynomial<T>& f, const MomentSequence<T>& y) {
  if (f.num_vars() != y.num_vars()) throw DimensionError("riesz dimension mismatch");
  T total{};
  for (const auto& [alpha, c] : f.terms()) total = total + c * y.at(alpha);
  return total;
}

/// Moment matrix of order d: entry (alpha, beta) = y_{alpha+beta}.
template <typename T>
SymMatrix<T> moment_matrix(const MomentSequence<T>& y, int d) {
  if (y.max_degree() < 2 * d)
    throw IncompleteSequence("moment matrix of order " + std::to_string(d) +
                             " needs moments up to degree " + std::to_string(2 * d));
  SymMatrix<T> m;
  m.row_labels = monomials_up_to(y.num_vars(), d);
  const int k = static_cast<int>(m.row_labels.size());
  m.entries.resize(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      const T v = y.at(m.row_labels[static_cast<std::size_t>(i)] +
                       m.row_labels[static_cast<std::size_t>(j)]);
      m.entries(i, j) = v;
      m.entries(j, i) = v;
    }
  return m;
}

/// Localizing matrix of order e: entry (alpha, beta) = sum_gamma g_gamma y_{alpha+beta+gamma}.
template <typename T>
SymMatrix<T> localizing_matrix(const Polynomial<T>& g, const MomentSequence<T>& y, int e) {
  if (g.num_vars() != y.num_vars()) throw DimensionError("localizing dimension mismatch");
  if (g.is_zero()) throw DegenerateConstraint("localizing matrix of the zero polynomial");
  if (y.max_degree() < 2 * e + *g.degree())
    throw IncompleteSequence("localizing matrix of order " + std::to_string(e) +
                             " needs moments up to degree " + std::to_string(2 * e + *g.degree()));
  SymMatrix<T> m;
  m.row_labels = monomials_up_to(y.num_vars(), e);
  const int k = static_cast<int>(m.row_labels.size());
  m.entries.resize(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      T v{};
      const MultiIndex ab = m.row_labels[static_cast<std::size_t>(i)] +
                            m.row_labels[static_cast<std::size_t>(j)];
      for (const auto& [gamma, c] : g.terms()) v = v + c * y.at(ab + gamma);
      m.entries(i, j) = v;
      m.entries(j, i) = v;
    }
  return m;
}

/// Half-degree bound k = max over stored terms of ceil(|alpha|/2).
/// The zero polynomial has no such bound and is rejected rather than treated
/// as degree zero, which would silently create empty localizing blocks.
template <typename T>
int degree_bound(const Polynomial<T>& g) {
  if (g.is_zero()) throw DegenerateConstraint("degree bound of the zero polynomial");
  int k = 0;
  for (const auto& [alpha, c] : g.terms()) k = std::max(k, (alpha.degree() + 1) / 2);
  return k;
}

/// The closed-form moment sequence over two variables:
///   y_alpha = (1 + (-1)^a1 + (-1)^a2 - (-1)^(a1+a2)) / (2 sqrt(2^(a1+a2))),
/// exact in Q(sqrt2). |y_alpha| = 2^(-|alpha|/2); negative iff a1 and a2 are odd.
QSqrt2 counterexample_sequence(const MultiIndex& alpha);

/// The sequence above tabulated up to max_degree.
MomentSequence<QSqrt2> counterexample_moments(int max_degree);

MomentSequence<double> to_double(const MomentSequence<QSqrt2>& y);
SymMatrix<double> to_double(const SymMatrix<QSqrt2>& m);

}  // namespace hlab
