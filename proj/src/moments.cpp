#include "hlab/moments.hpp"

namespace hlab {

QSqrt2 counterexample_sequence(const MultiIndex& alpha) {
  if (alpha.size() != 2) throw DimensionError("the sequence is defined over two variables");
  const int s1 = alpha[0] % 2 == 0 ? 1 : -1;
  const int s2 = alpha[1] % 2 == 0 ? 1 : -1;
  const int numerator = 1 + s1 + s2 - s1 * s2;  // always +2 or -2
  const QSqrt2 denominator = QSqrt2(2) * QSqrt2::sqrt_pow2(alpha.degree());
  return QSqrt2(numerator) * denominator.inverse();
}

MomentSequence<QSqrt2> counterexample_moments(int max_degree) {
  return MomentSequence<QSqrt2>::tabulate(2, max_degree, counterexample_sequence);
}

MomentSequence<double> to_double(const MomentSequence<QSqrt2>& y) {
  return MomentSequence<double>::tabulate(y.num_vars(), y.max_degree(),
                                          [&](const MultiIndex& a) { return to_double(y.at(a)); });
}

SymMatrix<double> to_double(const SymMatrix<QSqrt2>& m) {
  SymMatrix<double> r;
  r.row_labels = m.row_labels;
  r.entries.resize(m.entries.rows(), m.entries.cols());
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i)
    for (Eigen::Index j = 0; j < m.entries.cols(); ++j)
      r.entries(i, j) = to_double(m.entries(i, j));
  return r;
}

}  // namespace hlab
