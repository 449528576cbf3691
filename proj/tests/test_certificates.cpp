#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hlab/certificates.hpp"
#include "hlab/counterexample.hpp"
#include "hlab/moments.hpp"

using namespace hlab;

namespace {

const ReferenceData& ref() { return ReferenceData::instance(); }

QSqrt2 random_nonzero_rational(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(1, 7);
  std::uniform_int_distribution<int> den(1, 5);
  std::uniform_int_distribution<int> flip(0, 1);
  Rational q(num(rng), den(rng));
  return QSqrt2(flip(rng) ? q : -q);
}

}  // namespace

TEST_CASE("both reference certificates verify exactly") {
  CHECK(verify_identity(ref().problem, ref().lasserre_certificate).is_zero());
  CHECK(verify_identity(ref().problem, ref().sdsos_certificate).is_zero());
}

TEST_CASE("perturbing lambda lands in the residual") {
  Certificate tweaked = ref().lasserre_certificate;
  tweaked.lambda += QSqrt2(1);
  const auto residual = verify_identity(ref().problem, tweaked);
  // (f - (lambda+1)) - sigma = residual of the exact identity minus 1
  CHECK(residual == Polynomial<QSqrt2>::constant(2, QSqrt2(-1)));
}

TEST_CASE("any single-coefficient perturbation breaks the identity") {
  std::mt19937 rng(53);
  for (const Certificate& base : {ref().lasserre_certificate, ref().sdsos_certificate}) {
    // lambda
    {
      Certificate c = base;
      c.lambda += random_nonzero_rational(rng);
      CHECK(!verify_identity(ref().problem, c).is_zero());
    }
    // every weight and every coefficient of every square
    for (std::size_t s = 0; s < base.sigmas.size(); ++s) {
      for (std::size_t k = 0; k < base.sigmas[s].squares.size(); ++k) {
        {
          Certificate c = base;
          c.sigmas[s].squares[k].first += QSqrt2(Rational(1, 3));
          CHECK(!verify_identity(ref().problem, c).is_zero());
        }
        for (const auto& [alpha, coeff] : base.sigmas[s].squares[k].second.terms()) {
          Certificate c = base;
          c.sigmas[s].squares[k].second.add_term(alpha, random_nonzero_rational(rng));
          CHECK(!verify_identity(ref().problem, c).is_zero());
        }
      }
    }
  }
}

TEST_CASE("multiplier classification") {
  const auto& las = ref().lasserre_certificate;
  const auto& sds = ref().sdsos_certificate;

  // sigma_0 of the full-hierarchy certificate has a 3-monomial square
  const auto las0 = classify_multiplier(las.sigmas[0]);
  CHECK(!las0.sdsos);

  // the SDSOS certificate's sigma_0: every square has at most 2 monomials
  const auto sds0 = classify_multiplier(sds.sigmas[0]);
  CHECK(sds0.sdsos);

  // a constant square is SDSOS and DSOS
  const auto sds1 = classify_multiplier(sds.sigmas[1]);
  CHECK(sds1.sdsos);
  CHECK(sds1.dsos);
  CHECK(to_string(sds1) == "SOS SDSOS DSOS");

  SquareDecomposition bad;
  bad.squares = {{QSqrt2(-1), Polynomial<QSqrt2>::constant(2, QSqrt2(1))}};
  CHECK_THROWS_AS(classify_multiplier(bad), InvalidDecomposition);

  // (x1+x2)^2 alone: Gram [[1,1],[1,1]] is diagonally dominant
  SquareDecomposition pair;
  pair.squares = {{QSqrt2(1), Polynomial<QSqrt2>::variable(2, 0) + Polynomial<QSqrt2>::variable(2, 1)}};
  const auto cls = classify_multiplier(pair);
  CHECK(cls.sdsos);
  CHECK(cls.dsos);

  // (2x1+x2)^2: Gram [[4,2],[2,1]] row 2 fails dominance
  SquareDecomposition lop;
  lop.squares = {{QSqrt2(1), QSqrt2(2) * Polynomial<QSqrt2>::variable(2, 0) +
                                 Polynomial<QSqrt2>::variable(2, 1)}};
  const auto lop_cls = classify_multiplier(lop);
  CHECK(lop_cls.sdsos);
  CHECK(!lop_cls.dsos);
}

TEST_CASE("exact PSD tests") {
  CHECK(psd_2x2(QSqrt2(1), QSqrt2(0), QSqrt2(0)));
  CHECK(!psd_2x2(QSqrt2(0), QSqrt2(1), QSqrt2(0)));  // zero diagonal, nonzero cross
  CHECK(psd_2x2(QSqrt2(Rational(1, 2)), QSqrt2(Rational(-1, 2)), QSqrt2(Rational(1, 2))));

  QMatrix a(2, 2);
  a(0, 0) = QSqrt2(0);
  a(0, 1) = QSqrt2(0);
  a(1, 0) = QSqrt2(0);
  a(1, 1) = QSqrt2(-1);
  CHECK(!psd_exact(a));  // leading minors alone would accept this one

  QMatrix b(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b(i, j) = QSqrt2(i == j ? 2 : -1);
  CHECK(psd_exact(b));
  b(2, 2) = QSqrt2(Rational(1, 2));
  CHECK(!psd_exact(b));
}

TEST_CASE("moment feasibility of the closed-form sequence") {
  const auto& g = ref().problem.constraints[0];
  for (int d = 1; d <= 4; ++d) {
    const auto y = counterexample_moments(2 * d + 2);
    CHECK(check_moment_feasibility(y, d, g));
  }

  // normalization violated
  auto y2 = counterexample_moments(4);
  y2.at(MultiIndex{0, 0}) = QSqrt2(2);
  CHECK(!check_moment_feasibility(y2, 1, g));

  // flipping y_(1,1) to +1/2 breaks the localizing relation at order 1
  auto y3 = counterexample_moments(4);
  y3.at(MultiIndex{1, 1}) = QSqrt2(Rational(1, 2));
  CHECK(!check_moment_feasibility(y3, 1, g));

  CHECK_THROWS_AS(check_moment_feasibility(counterexample_moments(2), 1, g), IncompleteSequence);
}

TEST_CASE("kkt residual") {
  const auto& p = ref().problem;
  const QSqrt2 inv_sqrt2(Rational(0), Rational(1, 2));

  // exact primal-dual solution: every component vanishes
  const auto at_solution = kkt_residual({inv_sqrt2, inv_sqrt2}, ref().multiplier, p);
  REQUIRE(at_solution.size() == 5);
  for (const auto& v : at_solution) CHECK(v.is_zero());

  // origin with zero multiplier: stationarity is grad f = (-4, -4)
  const auto at_origin = kkt_residual({QSqrt2(0), QSqrt2(0)}, QSqrt2(0), p);
  CHECK(at_origin[0] == QSqrt2(-4));
  CHECK(at_origin[1] == QSqrt2(-4));
  CHECK(at_origin[2].is_zero());
  CHECK(at_origin[3].is_zero());
  CHECK(at_origin[4].is_zero());

  // boundary point (1,0): g = 0, complementarity 0, stationarity (-2,-2)
  const auto at_edge = kkt_residual({QSqrt2(1), QSqrt2(0)}, QSqrt2(0), p);
  CHECK(at_edge[0] == QSqrt2(-2));
  CHECK(at_edge[1] == QSqrt2(-2));
  CHECK(at_edge[4].is_zero());

  PolyProblem<QSqrt2> multi = p;
  multi.constraints.push_back(p.constraints[0]);
  CHECK_THROWS_AS(kkt_residual({QSqrt2(0), QSqrt2(0)}, QSqrt2(0), multi), UnsupportedProblem);
}

TEST_CASE("constant Hessian PSD checks") {
  const auto& p = ref().problem;

  // f = (-2+x1+x2)^2 has Hessian [[2,2],[2,2]], PSD
  CHECK(check_hessian_psd_constant(p.objective));

  // -g = x1^2+x2^2-1 has Hessian 2I, PSD
  CHECK(check_hessian_psd_constant(-p.constraints[0]));

  // indefinite diagonal
  const auto x1 = Polynomial<QSqrt2>::variable(2, 0);
  const auto x2 = Polynomial<QSqrt2>::variable(2, 1);
  CHECK(!check_hessian_psd_constant(x1 * x1 - x2 * x2));

  CHECK_THROWS_AS(check_hessian_psd_constant(x1 * x1 * x1), UnsupportedDegree);
}

TEST_CASE("computed Hessians match hand differentiation") {
  const auto& p = ref().problem;
  // d2f/dxi dxj = 2 for every pair; -d2g/dxi dxj = 2 on the diagonal
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(partial(partial(p.objective, i), j) ==
            Polynomial<QSqrt2>::constant(2, QSqrt2(2)));
      CHECK(partial(partial(-p.constraints[0], i), j) ==
            Polynomial<QSqrt2>::constant(2, QSqrt2(i == j ? 2 : 0)));
    }
}

TEST_CASE("an SDSOS-classified certificate is a dual-feasible point") {
  // zero residual + every multiplier SDSOS implies the solved SDSOS bound at
  // sufficient order cannot fall more than solver noise below lambda
  const auto& ref = ReferenceData::instance();
  const auto& cert = ref.sdsos_certificate;
  REQUIRE(verify_identity(ref.problem, cert).is_zero());
  for (const auto& sigma : cert.sigmas) CHECK(classify_multiplier(sigma).sdsos);

  SolveOptions opts;
  opts.tolerance = 1e-9;
  const auto res = solve(build_sdsos(to_double(ref.problem), 1), opts);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.dual_value >= to_double(cert.lambda) - 1e-6);
}

TEST_CASE("nonexistence report for the bundled problem") {
  NonexistenceOptions opts;
  opts.reference_value = ref().global_value;
  opts.exact_sequence = counterexample_sequence;

  const auto sdsos = certify_nonexistence_report(ref().problem, Hierarchy::Sdsos, {1, 2, 3}, opts);
  REQUIRE(sdsos.rows.size() == 3);
  const double sdsos_val = to_double(ref().sdsos_value);
  for (const auto& row : sdsos.rows) {
    CHECK(row.bound == doctest::Approx(sdsos_val).epsilon(1e-6));
    CHECK(row.sequence_feasible);
    REQUIRE(row.gap_to_reference.has_value());
    CHECK(*row.gap_to_reference == doctest::Approx(2.0).epsilon(1e-6));
  }
  REQUIRE(sdsos.exact_cap.has_value());
  CHECK(*sdsos.exact_cap == ref().sdsos_value);

  const auto lasserre =
      certify_nonexistence_report(ref().problem, Hierarchy::Lasserre, {1}, opts);
  CHECK(lasserre.rows[0].bound == doctest::Approx(to_double(ref().global_value)).epsilon(1e-6));
  CHECK(*lasserre.rows[0].gap_to_reference == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(!lasserre.exact_cap.has_value());  // the sequence does not cap the full hierarchy

  NonexistenceOptions ropts = opts;
  ropts.r = 1;
  const auto rsdsos = certify_nonexistence_report(ref().problem, Hierarchy::Sdsos, {2}, ropts);
  CHECK(rsdsos.rows[0].bound <= 1e-6);
  REQUIRE(rsdsos.exact_cap.has_value());
  CHECK(rsdsos.exact_cap->is_zero());

  CHECK_THROWS_AS(certify_nonexistence_report(ref().problem, Hierarchy::Sdsos, {}, opts), Error);
}
