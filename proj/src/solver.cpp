#include "hlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Dense>

#include "hlab/errors.hpp"

namespace hlab {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIterations: return "max-iterations";
    case SolveStatus::NumericalFailure: return "numerical-failure";
    case SolveStatus::InfeasibleDetected: return "infeasible-detected";
  }
  return "?";
}

namespace {

// Internals run in long double: the Schur complement picks up condition
// numbers near 1/mu on degenerate optimal faces, and the extra mantissa keeps
// directions usable down to gaps around 1e-12.
using Real = long double;
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

constexpr Real kInf = std::numeric_limits<Real>::infinity();
constexpr Real kStepFraction = 0.99L;  // fraction of the distance to the boundary

struct DenseCone {
  int dim = 0;
  std::vector<int> ys;          // y indices with nonzero maps
  std::vector<Mat> coeff;       // dense symmetric A_i, aligned with ys
  Mat constant;                 // constant part of the affine map
  Mat X, Z;
  Mat Xinv, Rx, Rc, dX, dZ, dXaff, dZaff;
};

struct DiagCone {
  int dim = 0;
  std::vector<std::vector<std::pair<int, Real>>> rows;  // per row: (y, coeff)
  Vec constant;
  Vec x, z;
  Vec rx, rc, dx, dz, dxaff, dzaff;
};

Mat dense_map(const DenseCone& c, const Vec& y) {
  Mat s = c.constant;
  for (std::size_t i = 0; i < c.ys.size(); ++i) s += y[c.ys[i]] * c.coeff[i];
  return s;
}

Vec diag_map(const DiagCone& c, const Vec& y) {
  Vec s = c.constant;
  for (int r = 0; r < c.dim; ++r)
    for (const auto& [yi, v] : c.rows[static_cast<std::size_t>(r)]) s[r] += v * y[yi];
  return s;
}

/// Largest alpha with X + alpha * dX still positive semidefinite.
Real max_step_dense(const Mat& X, const Mat& dX) {
  Eigen::SelfAdjointEigenSolver<Mat> es(X);
  const Vec lam = es.eigenvalues();
  const Real floor = std::max(lam.maxCoeff(), Real(1)) * Real(1e-18);
  Vec inv_sqrt(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    inv_sqrt[i] = Real(1) / std::sqrt(std::max(lam[i], floor));
  const Mat rot = es.eigenvectors().transpose() * dX * es.eigenvectors();
  const Mat scaled = inv_sqrt.asDiagonal() * rot * inv_sqrt.asDiagonal();
  const Real lmin =
      Eigen::SelfAdjointEigenSolver<Mat>(scaled, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  if (lmin >= -Real(1e-18)) return kInf;
  return Real(1) / (-lmin);
}

Real max_step_diag(const Vec& x, const Vec& dx) {
  Real alpha = kInf;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (dx[i] < Real(0)) alpha = std::min(alpha, x[i] / (-dx[i]));
  return alpha;
}

Real trace_product(const Mat& a, const Mat& b) { return a.cwiseProduct(b).sum(); }

struct Snapshot {
  Vec y, nu;
  std::vector<Mat> X, Z;
  std::vector<Vec> x, z;
  Residuals residuals;
  double score = std::numeric_limits<double>::infinity();
  int iteration = 0;
};

}  // namespace

SolveResult solve(const ConicProgram& cp, const SolveOptions& opts) {
  cp.validate();
  if (opts.tolerance <= 0.0) throw Error("tolerance must be positive");
  const int N = cp.num_y;
  if (N < 1) throw Error("program has no decision variables");
  if (cp.blocks.empty()) throw Error("program has no cone blocks");

  // --- assemble cones in block order (with a map back to cp.blocks) ---
  std::vector<DenseCone> dense;
  std::vector<DiagCone> diag;
  struct Slot { bool is_diag; std::size_t idx; };
  std::vector<Slot> slots;
  for (const auto& b : cp.blocks) {
    if (b.kind == BlockKind::LIN) {
      DiagCone c;
      c.dim = b.dim;
      c.rows.resize(static_cast<std::size_t>(b.dim));
      c.constant = Vec::Zero(b.dim);
      for (const auto& e : b.entries) {
        if (e.y_index == kConstTerm)
          c.constant[e.row] += Real(e.coeff);
        else
          c.rows[static_cast<std::size_t>(e.row)].emplace_back(e.y_index, Real(e.coeff));
      }
      slots.push_back({true, diag.size()});
      diag.push_back(std::move(c));
    } else {
      DenseCone c;
      c.dim = b.dim;
      c.constant = Mat::Zero(b.dim, b.dim);
      std::map<int, Mat> grouped;
      for (const auto& e : b.entries) {
        Mat* target;
        if (e.y_index == kConstTerm) {
          target = &c.constant;
        } else {
          auto [it, fresh] = grouped.try_emplace(e.y_index, Mat::Zero(b.dim, b.dim));
          (void)fresh;
          target = &it->second;
        }
        (*target)(e.row, e.col) += Real(e.coeff);
        if (e.row != e.col) (*target)(e.col, e.row) += Real(e.coeff);
      }
      for (auto& [yi, a] : grouped) {
        c.ys.push_back(yi);
        c.coeff.push_back(std::move(a));
      }
      slots.push_back({false, dense.size()});
      dense.push_back(std::move(c));
    }
  }

  const int p = static_cast<int>(cp.equalities.size());
  Mat F = Mat::Zero(p, N);
  Vec h = Vec::Zero(p);
  for (int r = 0; r < p; ++r) {
    for (const auto& [yi, v] : cp.equalities[static_cast<std::size_t>(r)].coeffs)
      F(r, yi) += Real(v);
    h[r] = Real(cp.equalities[static_cast<std::size_t>(r)].rhs);
  }
  Vec c = Vec::Zero(N);
  for (int i = 0; i < N; ++i) c[i] = Real(cp.objective[static_cast<std::size_t>(i)]);

  int total_dim = 0;
  for (const auto& cn : dense) total_dim += cn.dim;
  for (const auto& cn : diag) total_dim += cn.dim;

  // --- starting point: minimum-norm y on the equalities, blocks pushed inside ---
  Vec y = Vec::Zero(N);
  if (p > 0) {
    const Mat G = F * F.transpose();
    y = F.transpose() * G.ldlt().solve(h);
  }
  for (auto& cn : dense) {
    const Mat base = dense_map(cn, y);
    const Real lmin =
        Eigen::SelfAdjointEigenSolver<Mat>(base, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    const Real eps = std::max(Real(1), Real(1.1) * (-lmin) + Real(1e-3));
    cn.X = base + eps * Mat::Identity(cn.dim, cn.dim);
    cn.Z = Mat::Identity(cn.dim, cn.dim);
  }
  for (auto& cn : diag) {
    const Vec base = diag_map(cn, y);
    const Real eps = std::max(Real(1), Real(1.1) * (-base.minCoeff()) + Real(1e-3));
    cn.x = base.array() + eps;
    cn.z = Vec::Ones(cn.dim);
  }
  Vec nu = Vec::Zero(p);

  // dual objective: h'nu - sum_b <Z_b, C_b>
  auto dual_objective = [&]() {
    Real v = h.dot(nu);
    for (const auto& cn : dense) v -= trace_product(cn.Z, cn.constant);
    for (const auto& cn : diag) v -= cn.z.dot(cn.constant);
    return v;
  };

  SolveResult res;
  Snapshot best;

  auto take_snapshot = [&](const Residuals& rr, int iter) {
    best.y = y;
    best.nu = nu;
    best.X.clear();
    best.Z.clear();
    best.x.clear();
    best.z.clear();
    for (const auto& cn : dense) {
      best.X.push_back(cn.X);
      best.Z.push_back(cn.Z);
    }
    for (const auto& cn : diag) {
      best.x.push_back(cn.x);
      best.z.push_back(cn.z);
    }
    best.residuals = rr;
    best.score = rr.max();
    best.iteration = iter;
  };

  auto restore_snapshot = [&]() {
    if (!std::isfinite(best.score)) return;
    y = best.y;
    nu = best.nu;
    for (std::size_t i = 0; i < dense.size(); ++i) {
      dense[i].X = best.X[i];
      dense[i].Z = best.Z[i];
    }
    for (std::size_t i = 0; i < diag.size(); ++i) {
      diag[i].x = best.x[i];
      diag[i].z = best.z[i];
    }
  };

  auto finalize = [&](SolveStatus status, int iters, const Residuals& rr) {
    res.status = status;
    res.iterations = iters;
    res.residuals = rr;
    res.primal_value = static_cast<double>(c.dot(y));
    res.dual_value = static_cast<double>(dual_objective());
    res.y = y.cast<double>();
    res.dual_blocks.clear();
    for (const auto& slot : slots) {
      if (slot.is_diag)
        res.dual_blocks.push_back(diag[slot.idx].z.cast<double>());
      else
        res.dual_blocks.push_back(dense[slot.idx].Z.cast<double>());
    }
    return res;
  };

  Residuals rr;
  int stalled = 0;
  for (int iter = 0; iter <= opts.max_iters; ++iter) {
    // --- residuals ---
    const Vec rp = h - F * y;
    Vec rd = c - F.transpose() * nu;
    Real comp = 0;
    Real max_rx = 0;
    Real infeas_cross = 0;
    for (auto& cn : dense) {
      cn.Rx = dense_map(cn, y) - cn.X;
      max_rx = std::max(max_rx, cn.Rx.cwiseAbs().maxCoeff());
      infeas_cross += trace_product(cn.Z, cn.Rx);
      comp += trace_product(cn.X, cn.Z);
      for (std::size_t i = 0; i < cn.ys.size(); ++i)
        rd[cn.ys[i]] -= trace_product(cn.coeff[i], cn.Z);
    }
    for (auto& cn : diag) {
      cn.rx = diag_map(cn, y) - cn.x;
      max_rx = std::max(max_rx, cn.rx.cwiseAbs().maxCoeff());
      infeas_cross += cn.z.dot(cn.rx);
      comp += cn.x.dot(cn.z);
      for (int r = 0; r < cn.dim; ++r)
        for (const auto& [yi, v] : cn.rows[static_cast<std::size_t>(r)]) rd[yi] -= v * cn.z[r];
    }
    const Real mu = comp / total_dim;
    const Real pobj = c.dot(y);
    const Real dobj = dual_objective();

    rr.primal = static_cast<double>(
        std::max(p > 0 ? rp.cwiseAbs().maxCoeff() : Real(0), max_rx) /
        (Real(1) + (p > 0 ? h.cwiseAbs().maxCoeff() : Real(0))));
    rr.dual = static_cast<double>(rd.cwiseAbs().maxCoeff() / (Real(1) + c.cwiseAbs().maxCoeff()));
    rr.gap = static_cast<double>(std::fabs(pobj - dobj) /
                                 (Real(1) + std::fabs(pobj) + std::fabs(dobj)));

    res.trace.push_back({static_cast<double>(pobj), static_cast<double>(dobj),
                         static_cast<double>(comp),
                         static_cast<double>(std::fabs(rd.dot(y)) + std::fabs(nu.dot(rp)) +
                                             std::fabs(infeas_cross))});

    if (!std::isfinite(static_cast<double>(pobj)) || !std::isfinite(static_cast<double>(dobj)) ||
        !std::isfinite(static_cast<double>(mu))) {
      restore_snapshot();
      return finalize(SolveStatus::NumericalFailure, iter, best.residuals);
    }
    if (rr.max() < best.score) take_snapshot(rr, iter);
    if (rr.max() <= opts.tolerance) return finalize(SolveStatus::Optimal, iter, rr);
    if (std::fabs(dobj) > Real(1e8) && rr.dual < 1e-6)
      return finalize(SolveStatus::InfeasibleDetected, iter, rr);
    // Numerical floor: no progress on the best residual for a stretch.
    if (iter == opts.max_iters || stalled >= 3 || iter - best.iteration > 30) {
      restore_snapshot();
      const SolveStatus status = best.score <= opts.tolerance ? SolveStatus::Optimal
                                                              : SolveStatus::MaxIterations;
      return finalize(status, iter, best.residuals);
    }

    // --- Schur complement M_ij = sum_b tr(A_i Z A_j X^-1) ---
    Mat M = Mat::Zero(N, N);
    for (auto& cn : dense) {
      cn.Xinv = cn.X.llt().solve(Mat::Identity(cn.dim, cn.dim));
      for (std::size_t i = 0; i < cn.ys.size(); ++i) {
        const Mat bi = cn.Xinv * cn.coeff[i] * cn.Z;
        for (std::size_t j = 0; j < cn.ys.size(); ++j)
          M(cn.ys[i], cn.ys[j]) += trace_product(cn.coeff[j], bi);
      }
    }
    for (auto& cn : diag) {
      for (int r = 0; r < cn.dim; ++r) {
        const Real w = cn.z[r] / cn.x[r];
        const auto& row = cn.rows[static_cast<std::size_t>(r)];
        for (const auto& [i, vi] : row)
          for (const auto& [j, vj] : row) M(i, j) += vi * vj * w;
      }
    }
    M = Real(0.5) * (M + M.transpose().eval());

    Eigen::LLT<Mat> mllt;
    Real reg = 0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      mllt.compute(M + reg * Mat::Identity(N, N));
      if (mllt.info() == Eigen::Success) break;
      reg = (reg == Real(0)) ? Real(1e-16) * (Real(1) + M.trace() / N) : reg * Real(100);
    }
    if (mllt.info() != Eigen::Success) {
      restore_snapshot();
      return finalize(SolveStatus::NumericalFailure, iter, best.residuals);
    }

    Mat W;
    Eigen::LDLT<Mat> gldlt;
    if (p > 0) {
      W = mllt.solve(F.transpose());
      gldlt.compute(F * W);
      if (gldlt.info() != Eigen::Success) {
        restore_snapshot();
        return finalize(SolveStatus::NumericalFailure, iter, best.residuals);
      }
    }

    // Solves the KKT system for the current complementarity targets Rc/rc.
    auto newton_direction = [&](Vec& dy, Vec& dnu) {
      Vec q = Vec::Zero(N);
      for (auto& cn : dense) {
        const Mat d = (cn.Rc - cn.Z * cn.Rx) * cn.Xinv;
        for (std::size_t i = 0; i < cn.ys.size(); ++i)
          q[cn.ys[i]] += trace_product(cn.coeff[i], d);
      }
      for (auto& cn : diag) {
        for (int r = 0; r < cn.dim; ++r) {
          const Real d = (cn.rc[r] - cn.z[r] * cn.rx[r]) / cn.x[r];
          for (const auto& [yi, v] : cn.rows[static_cast<std::size_t>(r)]) q[yi] += v * d;
        }
      }
      const Vec t = mllt.solve(q - rd);
      if (p > 0) {
        dnu = gldlt.solve(rp - F * t);
        dy = W * dnu + t;
      } else {
        dnu.resize(0);
        dy = t;
      }
      for (auto& cn : dense) {
        cn.dX = cn.Rx;
        for (std::size_t i = 0; i < cn.ys.size(); ++i) cn.dX += dy[cn.ys[i]] * cn.coeff[i];
        Mat dz = (cn.Rc - cn.Z * cn.dX) * cn.Xinv;
        cn.dZ = Real(0.5) * (dz + dz.transpose().eval());
      }
      for (auto& cn : diag) {
        cn.dx = cn.rx;
        for (int r = 0; r < cn.dim; ++r)
          for (const auto& [yi, v] : cn.rows[static_cast<std::size_t>(r)]) cn.dx[r] += v * dy[yi];
        cn.dz = (cn.rc.array() - cn.z.array() * cn.dx.array()) / cn.x.array();
      }
    };

    auto step_limits = [&](Real& ap, Real& ad) {
      ap = kInf;
      ad = kInf;
      for (auto& cn : dense) {
        ap = std::min(ap, max_step_dense(cn.X, cn.dX));
        ad = std::min(ad, max_step_dense(cn.Z, cn.dZ));
      }
      for (auto& cn : diag) {
        ap = std::min(ap, max_step_diag(cn.x, cn.dx));
        ad = std::min(ad, max_step_diag(cn.z, cn.dz));
      }
    };

    // predictor: pure Newton step toward complementarity zero
    for (auto& cn : dense) cn.Rc = -cn.Z * cn.X;
    for (auto& cn : diag) cn.rc = -(cn.z.array() * cn.x.array());
    Vec dy, dnu;
    newton_direction(dy, dnu);

    Real ap_aff, ad_aff;
    step_limits(ap_aff, ad_aff);
    ap_aff = std::min(Real(1), ap_aff);
    ad_aff = std::min(Real(1), ad_aff);

    Real comp_aff = 0;
    for (auto& cn : dense) {
      cn.dXaff = cn.dX;
      cn.dZaff = cn.dZ;
      comp_aff += trace_product(cn.X + ap_aff * cn.dX, cn.Z + ad_aff * cn.dZ);
    }
    for (auto& cn : diag) {
      cn.dxaff = cn.dx;
      cn.dzaff = cn.dz;
      comp_aff += (cn.x + ap_aff * cn.dx).dot(cn.z + ad_aff * cn.dz);
    }
    const Real mu_aff = std::max(comp_aff, Real(0)) / total_dim;
    Real sigma = mu > Real(0) ? std::pow(mu_aff / mu, Real(3)) : Real(0);
    sigma = std::clamp(sigma, Real(1e-10), Real(1));

    // corrector: recentered target with the second-order Mehrotra term
    for (auto& cn : dense)
      cn.Rc = sigma * mu * Mat::Identity(cn.dim, cn.dim) - cn.Z * cn.X - cn.dZaff * cn.dXaff;
    for (auto& cn : diag)
      cn.rc = sigma * mu - (cn.z.array() * cn.x.array()) - (cn.dzaff.array() * cn.dxaff.array());
    newton_direction(dy, dnu);

    Real ap, ad;
    step_limits(ap, ad);
    ap = std::min(Real(1), kStepFraction * ap);
    ad = std::min(Real(1), kStepFraction * ad);
    if (ap < Real(1e-10) && ad < Real(1e-10))
      ++stalled;
    else
      stalled = 0;

    y += ap * dy;
    if (p > 0) nu += ad * dnu;
    for (auto& cn : dense) {
      cn.X += ap * cn.dX;
      cn.Z += ad * cn.dZ;
    }
    for (auto& cn : diag) {
      cn.x += ap * cn.dx;
      cn.z += ad * cn.dz;
    }
  }

  restore_snapshot();
  return finalize(SolveStatus::MaxIterations, opts.max_iters, best.residuals);
}

MomentSequence<double> solution_moments(const ConicProgram& cp, const SolveResult& res) {
  if (cp.y_labels.empty()) throw Error("program carries no moment labels");
  int max_degree = 0;
  for (const auto& a : cp.y_labels) max_degree = std::max(max_degree, a.degree());
  MomentSequence<double> y(cp.num_vars, max_degree);
  for (std::size_t i = 0; i < cp.y_labels.size(); ++i)
    y.at(cp.y_labels[i]) = res.y[static_cast<Eigen::Index>(i)];
  return y;
}

std::optional<VectorXd> extract_minimizer(const SymMatrix<double>& m, double tol) {
  const int k = m.dim();
  if (k < 1 || m.row_labels.empty()) return std::nullopt;
  const int n = m.row_labels.front().size();
  if (k < n + 1) return std::nullopt;

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m.entries);
  const VectorXd lam = es.eigenvalues();  // ascending
  const double lmax = lam[k - 1];
  if (lmax <= 0.0) return std::nullopt;
  const double second = k >= 2 ? std::max(lam[k - 2], 0.0) : 0.0;
  if (second / lmax >= tol) return std::nullopt;

  const VectorXd v = es.eigenvectors().col(k - 1) * std::sqrt(lmax);
  if (m.row_labels.front().degree() != 0) return std::nullopt;
  const double v0 = v[0];
  if (std::abs(v0) < 1e-9) return std::nullopt;

  VectorXd x = VectorXd::Zero(n);
  for (int row = 0; row < k; ++row) {
    const MultiIndex& a = m.row_labels[static_cast<std::size_t>(row)];
    if (a.degree() != 1) continue;
    for (int var = 0; var < n; ++var)
      if (a[var] == 1) x[var] = v[row] / v0;
  }
  return x;
}

double kkt_multiplier_from_dual(const ConicProgram& cp, const SolveResult& res,
                                const VectorXd& x, int constraint) {
  for (std::size_t b = 0; b < cp.blocks.size(); ++b) {
    const auto& blk = cp.blocks[b];
    if (blk.source != constraint || blk.kind != BlockKind::PSD) continue;
    if (static_cast<int>(blk.basis.size()) != blk.dim)
      throw Error("dual block carries no monomial basis");
    if (res.dual_blocks.size() <= b) throw Error("solve result carries no dual blocks");
    const MatrixXd& Z = res.dual_blocks[b];
    VectorXd mono(blk.dim);
    for (int row = 0; row < blk.dim; ++row) {
      double v = 1.0;
      const MultiIndex& a = blk.basis[static_cast<std::size_t>(row)];
      for (int var = 0; var < a.size(); ++var)
        for (int e = 0; e < a[var]; ++e) v *= x[var];
      mono[row] = v;
    }
    return mono.dot(Z * mono);
  }
  throw Error("no PSD dual block for constraint " + std::to_string(constraint));
}

}  // namespace hlab
