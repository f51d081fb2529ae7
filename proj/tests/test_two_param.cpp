#include <doctest.h>

#include "singpencil/errors.hpp"
#include "singpencil/two_param.hpp"
#include "test_util.hpp"

using namespace singpencil;
using testutil::diag;

namespace {

CMatrix scalar(double v) { return CMatrix::Constant(1, 1, v); }

// Roots of disc(A + l B) = 0 for 2x2 A, B, expanded as a quadratic in l.
std::vector<cplx> discriminant_roots_2x2(const CMatrix& A, const CMatrix& B) {
  const cplx a = A.trace(), b = B.trace();
  const cplx c = A(0, 0) * B(1, 1) + A(1, 1) * B(0, 0) - A(0, 1) * B(1, 0) - A(1, 0) * B(0, 1);
  const cplx q2 = b * b - 4.0 * B.determinant();
  const cplx q1 = 2.0 * a * b - 4.0 * c;
  const cplx q0 = a * a - 4.0 * A.determinant();
  const cplx root = std::sqrt(q1 * q1 - 4.0 * q2 * q0);
  return {(-q1 + root) / (2.0 * q2), (-q1 - root) / (2.0 * q2)};
}

TwoParamProblem random_2ep(int n, Rng& rng) {
  TwoParamProblem p;
  p.A1 = complex_gaussian(n, n, rng);
  p.B1 = complex_gaussian(n, n, rng);
  p.C1 = complex_gaussian(n, n, rng);
  p.A2 = complex_gaussian(n, n, rng);
  p.B2 = complex_gaussian(n, n, rng);
  p.C2 = complex_gaussian(n, n, rng);
  return p;
}

}  // namespace

TEST_CASE("operator_determinants: scalar case is Cramer's rule") {
  TwoParamProblem p{scalar(1), scalar(2), scalar(3), scalar(4), scalar(5), scalar(7)};
  const auto d = operator_determinants(p);
  // 2*7 - 3*5, 3*4 - 1*7, 1*5 - 2*4
  CHECK(d.D0(0, 0) == cplx(-1.0));
  CHECK(d.D1(0, 0) == cplx(5.0));
  CHECK(d.D2(0, 0) == cplx(-3.0));
  const cplx lambda = d.D1(0, 0) / d.D0(0, 0), mu = d.D2(0, 0) / d.D0(0, 0);
  CHECK(std::abs(1.0 + 2.0 * lambda + 3.0 * mu) < 1e-14);
  CHECK(std::abs(4.0 + 5.0 * lambda + 7.0 * mu) < 1e-14);
}

TEST_CASE("operator_determinants: shapes and validation") {
  Rng rng(1);
  TwoParamProblem p;
  p.A1 = p.B1 = p.C1 = complex_gaussian(2, 2, rng);
  p.A2 = p.B2 = p.C2 = complex_gaussian(3, 3, rng);
  const auto d = operator_determinants(p);
  CHECK(d.D0.rows() == 6);
  CHECK(d.D1.cols() == 6);
  p.C2 = complex_gaussian(3, 2, rng);
  CHECK_THROWS_AS(operator_determinants(p), ArgumentError);
}

TEST_CASE("operator_determinants: commuting relation on eigenvectors") {
  // For an eigenvalue (l, m) with z = x1 (x) x2: D1 z = l D0 z, D2 z = m D0 z.
  const TwoParamProblem p{diag({-1, -2}), CMatrix::Identity(2, 2), CMatrix::Zero(2, 2),
                          diag({-3, -4}), CMatrix::Zero(2, 2), CMatrix::Identity(2, 2)};
  const auto d = operator_determinants(p);
  CVector e1 = CVector::Zero(2), e2 = CVector::Zero(2);
  e1(0) = 1.0;
  e2(1) = 1.0;
  const CVector z = kron(e1, e2);  // (l, m) = (1, 4)
  CHECK((d.D1 * z - 1.0 * d.D0 * z).norm() < 1e-14);
  CHECK((d.D2 * z - 4.0 * d.D0 * z).norm() < 1e-14);
}

TEST_CASE("pair_mu_candidates") {
  // Both distances are exactly 0.5; the tie goes to the lower index.
  const std::vector<cplx> a{1.0, 5.0}, b{5.5, 0.5, 3.0};
  const auto m = pair_mu_candidates(a, b);
  REQUIRE(m.size() == 2);
  CHECK(m[0].mu1 == cplx(1.0));
  CHECK(m[0].mu2 == cplx(0.5));
  CHECK(m[1].mu1 == cplx(5.0));
  CHECK(m[1].mu2 == cplx(5.5));
  CHECK(m[0].discrepancy == 0.5);
  CHECK(pair_mu_candidates({}, b).empty());
  const std::vector<cplx> same{2.0, 2.0};
  CHECK(pair_mu_candidates(same, same).size() == 2);
}

TEST_CASE("solve_2ep: decoupled problem") {
  // (diag(1,2) - l I) x1 = 0, (diag(3,4) - m I) x2 = 0.
  const TwoParamProblem p{diag({-1, -2}), CMatrix::Identity(2, 2), CMatrix::Zero(2, 2),
                          diag({-3, -4}), CMatrix::Zero(2, 2), CMatrix::Identity(2, 2)};
  Rng rng(3);
  const auto r = solve_2ep(p, TwoParamOptions{}, rng);
  CHECK(r.route_used == TwoParamRoute::Atkinson);
  REQUIRE(r.pairs.size() == 4);
  std::vector<cplx> got, want{cplx(1, 3), cplx(1, 4), cplx(2, 3), cplx(2, 4)};
  for (const auto& e : r.pairs) {
    // Encode (l, m) as l + i m for the multiset comparison; both are real.
    got.emplace_back(e.lambda.real(), e.mu.real());
    CHECK(std::abs(e.lambda.imag()) < 1e-12);
    CHECK(std::abs(e.mu.imag()) < 1e-12);
    CHECK(e.residual1 < 1e-12);
    CHECK(e.residual2 < 1e-12);
  }
  CHECK(testutil::multiset_error(got, want) < 1e-12);

  TwoParamOptions forced;
  forced.route = TwoParamRoute::Singular;
  // mu candidates from C1 = 0 are empty, so the singular route finds nothing.
  CHECK(solve_2ep(p, forced, rng).pairs.empty());
}

TEST_CASE("solve_2ep: singular bivariate cubic system") {
  const TwoParamProblem p = testutil::bivariate_cubic_2ep();
  Rng rng(1);
  const auto d = operator_determinants(p);
  CHECK(rank_with_tol(d.D0) < 25);
  const auto r = solve_2ep(p, TwoParamOptions{}, rng);
  CHECK(r.route_used == TwoParamRoute::Singular);
  CHECK(r.pairs.size() == 9);
  for (const auto& e : r.pairs) {
    const double scale = std::max(1.0, std::pow(std::max(std::abs(e.lambda), std::abs(e.mu)), 3));
    CHECK(std::abs(testutil::cubic_p1(e.lambda, e.mu)) / scale <= 1e-6);
    CHECK(std::abs(testutil::cubic_p2(e.lambda, e.mu)) / scale <= 1e-6);
    CHECK(e.mu_discrepancy < TwoParamOptions{}.delta);
  }

  TwoParamOptions unique;
  unique.unique_lambda = true;
  Rng rng2(1);
  CHECK(solve_2ep(p, unique, rng2).pairs.size() == 9);

  TwoParamOptions atk;
  atk.route = TwoParamRoute::Atkinson;
  CHECK_THROWS_AS(solve_2ep(p, atk, rng2), ArgumentError);
}

TEST_CASE("solve_2ep: singular route agrees with the Atkinson route on regular problems") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const TwoParamProblem p = random_2ep(2 + static_cast<int>(seed % 2), rng);
    TwoParamOptions a, s;
    a.route = TwoParamRoute::Atkinson;
    s.route = TwoParamRoute::Singular;
    const auto ra = solve_2ep(p, a, rng);
    const auto rs = solve_2ep(p, s, rng);
    std::vector<cplx> la, ls, ma, ms;
    for (const auto& e : ra.pairs) {
      la.push_back(e.lambda);
      ma.push_back(e.mu);
    }
    for (const auto& e : rs.pairs) {
      ls.push_back(e.lambda);
      ms.push_back(e.mu);
    }
    CHECK(testutil::multiset_error(ls, la) < 1e-6);
    CHECK(testutil::multiset_error(ms, ma) < 1e-6);
  }
}

TEST_CASE("solve_2ep: option validation") {
  Rng rng(1);
  TwoParamOptions o;
  o.delta = 0.0;
  CHECK_THROWS_AS(solve_2ep(testutil::bivariate_cubic_2ep(), o, rng), ArgumentError);
}

TEST_CASE("double_eig: linearization shape") {
  Rng rng(1);
  const auto [D1, D0] = double_eig_linearization(complex_gaussian(3, 3, rng), complex_gaussian(3, 3, rng));
  CHECK(D1.rows() == 27);
  CHECK(D0.cols() == 27);
  CHECK_THROWS_AS(double_eig_linearization(CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)),
                  ArgumentError);
}

TEST_CASE("double_eig: 2x2 matches the discriminant roots") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const CMatrix A = complex_gaussian(2, 2, rng), B = complex_gaussian(2, 2, rng);
    const auto r = double_eig(A, B, SolveOptions{}, rng);
    CHECK_FALSE(r.degenerate);
    CHECK(testutil::multiset_error(r.values, discriminant_roots_2x2(A, B)) < 1e-8);
    for (double g : r.min_gaps) CHECK(g <= 1e-6);
  }
}

TEST_CASE("double_eig: nilpotent plus diagonal has a double point at zero") {
  // A + l B = [[l, 1], [0, 2l]]; disc = l^2.
  const CMatrix A = testutil::real_matrix(2, 2, {0, 1, 0, 0});
  Rng rng(5);
  const auto r = double_eig(A, diag({1, 2}), SolveOptions{}, rng);
  CHECK(r.values.size() == 2);
  for (const cplx& v : r.values) CHECK(std::abs(v) < 1e-6);
}

TEST_CASE("double_eig: no double points") {
  Rng rng(2);
  // diag(l, 1 + l) never has a double eigenvalue.
  const auto r = double_eig(diag({0, 1}), CMatrix::Identity(2, 2), SolveOptions{}, rng);
  CHECK(r.values.empty());
  CHECK(r.degenerate);

  const auto s = double_eig(scalar(2), scalar(3), SolveOptions{}, rng);
  CHECK(s.values.empty());
  CHECK_FALSE(s.degenerate);
}

TEST_CASE("double_eig: invariant under unitary similarity") {
  Rng rng(8);
  const CMatrix A = complex_gaussian(3, 3, rng), B = complex_gaussian(3, 3, rng);
  const CMatrix Q = random_orthonormal(3, 3, rng);
  const auto r1 = double_eig(A, B, SolveOptions{}, rng);
  const auto r2 = double_eig(Q * A * Q.adjoint(), Q * B * Q.adjoint(), SolveOptions{}, rng);
  CHECK(r1.values.size() == 6);
  CHECK(testutil::multiset_error(r2.values, r1.values) < 1e-6);
}

TEST_CASE("refine_double_eigenvalue") {
  Rng rng(4);
  const CMatrix A = complex_gaussian(2, 2, rng), B = complex_gaussian(2, 2, rng);
  const auto roots = discriminant_roots_2x2(A, B);
  const auto polished = refine_double_eigenvalue(A, B, roots[0] + cplx(1e-8, -1e-8));
  REQUIRE(polished.has_value());
  CHECK(std::abs(*polished - roots[0]) < 1e-12 * std::max(1.0, std::abs(roots[0])));
  CHECK_FALSE(refine_double_eigenvalue(scalar(1), scalar(1), 0.0).has_value());
}
