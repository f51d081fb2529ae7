#include "singpencil/two_param.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "singpencil/errors.hpp"

namespace singpencil {

namespace {

void require_square_triple(const CMatrix& a, const CMatrix& b, const CMatrix& c, int idx) {
  const auto n = a.rows();
  for (const CMatrix* m : {&a, &b, &c}) {
    if (m->rows() != n || m->cols() != n) {
      throw ArgumentError("two-parameter problem: A" + std::to_string(idx) + ", B" +
                          std::to_string(idx) + ", C" + std::to_string(idx) +
                          " must be square of equal size");
    }
  }
  require_finite(a, "A");
  require_finite(b, "B");
  require_finite(c, "C");
}

double sigma_min(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const Eigen::VectorXd sv = Eigen::BDCSVD<CMatrix>(m).singularValues();
  return sv(sv.size() - 1);
}

// Finite eigenvalues mu of M + mu C, i.e. of the pencil M - mu (-C).
std::vector<cplx> mu_candidates(const CMatrix& M, const CMatrix& C, const SolveOptions& opts,
                                Rng& rng) {
  if (norm1(C) == 0.0) return {};
  if (norm1(M) == 0.0) return {cplx{}};
  return solve(Pencil(M, -C), opts, rng).finite_true;
}

Eigenpair2EP with_residuals(const TwoParamProblem& p, cplx lambda, cplx mu, double discrepancy) {
  Eigenpair2EP e{lambda, mu, discrepancy, 0.0, 0.0};
  e.residual1 = sigma_min(p.A1 + lambda * p.B1 + mu * p.C1);
  e.residual2 = sigma_min(p.A2 + lambda * p.B2 + mu * p.C2);
  return e;
}

TwoParamResult solve_singular(const TwoParamProblem& p, const DeltaTriple& d,
                              const TwoParamOptions& opts, Rng& rng) {
  TwoParamResult out;
  out.route_used = TwoParamRoute::Singular;
  out.lambdas = solve(Pencil(d.D1, d.D0), opts.solve, rng).finite_true;

  for (std::size_t j = 0; j < out.lambdas.size(); ++j) {
    const cplx lambda = out.lambdas[j];
    Rng stream = rng.split(j);
    Rng rng1 = stream.split(1);
    Rng rng2 = stream.split(2);
    const auto mus1 = mu_candidates(p.A1 + lambda * p.B1, p.C1, opts.solve, rng1);
    const auto mus2 = mu_candidates(p.A2 + lambda * p.B2, p.C2, opts.solve, rng2);
    const auto pairs = pair_mu_candidates(mus1, mus2);
    if (opts.unique_lambda) {
      if (!pairs.empty()) {
        const auto& m = pairs.front();
        out.pairs.push_back(with_residuals(p, lambda, 0.5 * (m.mu1 + m.mu2), m.discrepancy));
      }
      continue;
    }
    for (const auto& m : pairs) {
      if (!(m.discrepancy < opts.delta)) break;
      out.pairs.push_back(with_residuals(p, lambda, 0.5 * (m.mu1 + m.mu2), m.discrepancy));
    }
  }
  return out;
}

TwoParamResult solve_atkinson(const TwoParamProblem& p, const DeltaTriple& d, Rng& rng) {
  TwoParamResult out;
  out.route_used = TwoParamRoute::Atkinson;
  // A generic combination separates eigenvalues that share a lambda or a mu
  // component, so its eigenvectors are common eigenvectors of both pencils.
  const cplx c = rng.complex_normal();
  const auto eig = generalized_eig(d.D1 + c * d.D2, d.D0);
  for (const auto& pair : eig.pairs) {
    const CVector d0z = d.D0 * pair.x;
    const double den = d0z.squaredNorm();
    const cplx lambda = d0z.dot(d.D1 * pair.x) / den;
    const cplx mu = d0z.dot(d.D2 * pair.x) / den;
    // How far z is from being an exact eigenvector of D2 - mu D0.
    const double discrepancy = (d.D2 * pair.x - mu * d0z).norm() / std::sqrt(den);
    out.lambdas.push_back(lambda);
    out.pairs.push_back(with_residuals(p, lambda, mu, discrepancy));
  }
  return out;
}

}  // namespace

void TwoParamProblem::validate() const {
  require_square_triple(A1, B1, C1, 1);
  require_square_triple(A2, B2, C2, 2);
}

DeltaTriple operator_determinants(const TwoParamProblem& p) {
  p.validate();
  return {kron(p.B1, p.C2) - kron(p.C1, p.B2), kron(p.C1, p.A2) - kron(p.A1, p.C2),
          kron(p.A1, p.B2) - kron(p.B1, p.A2)};
}

std::vector<MuPair> pair_mu_candidates(std::span<const cplx> mus1, std::span<const cplx> mus2) {
  const auto matched = greedy_nearest_pairs(
      static_cast<int>(mus1.size()), static_cast<int>(mus2.size()),
      [&](int i, int j) { return std::abs(mus1[i] - mus2[j]); });
  std::vector<MuPair> out;
  out.reserve(matched.size());
  for (const auto& m : matched) out.push_back({mus1[m.first], mus2[m.second], m.distance});
  return out;
}

TwoParamResult solve_2ep(const TwoParamProblem& p, const TwoParamOptions& opts, Rng& rng) {
  opts.solve.validate();
  if (!(opts.delta > 0)) throw ArgumentError("solve_2ep: delta must be positive");
  const DeltaTriple d = operator_determinants(p);

  TwoParamRoute route = opts.route;
  if (route == TwoParamRoute::Auto) {
    const int n = static_cast<int>(d.D0.rows());
    route = rank_with_tol(d.D0) == n ? TwoParamRoute::Atkinson : TwoParamRoute::Singular;
  }
  if (route == TwoParamRoute::Atkinson) {
    if (rank_with_tol(d.D0) != d.D0.rows()) {
      throw ArgumentError("solve_2ep: Atkinson route needs a nonsingular D0");
    }
    return solve_atkinson(p, d, rng);
  }
  return solve_singular(p, d, opts, rng);
}

std::pair<CMatrix, CMatrix> double_eig_linearization(const CMatrix& A, const CMatrix& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw ArgumentError("double_eig: A and B must be square of the same size");
  }
  require_finite(A, "double_eig A");
  require_finite(B, "double_eig B");
  const Eigen::Index n = A.rows();
  const CMatrix I = CMatrix::Identity(n, n);
  const CMatrix Z = CMatrix::Zero(n, n);

  CMatrix P(3 * n, 3 * n), Q(3 * n, 3 * n), R(3 * n, 3 * n);
  P << A * A, A * B + B * A, -2.0 * A,  //
      Z, I, Z,                           //
      Z, Z, I;
  Q << Z, B * B, -B,  //
      -I, Z, Z,       //
      Z, Z, Z;
  R << Z, -B, I,  //
      Z, Z, Z,    //
      -I, Z, Z;

  // With W(lambda, mu) = P + lambda Q + mu R, W [y; lambda y; mu y] = 0 iff
  // (A + lambda B - mu I)^2 y = 0. D1 - lambda D0 = (A + lambda B) (x) R +
  // I (x) (P + lambda Q) then vanishes on x (x) w for the coupled pair.
  return {kron(A, R) + kron(I, P), -(kron(B, R) + kron(I, Q))};
}

double min_eigenvalue_gap(const CMatrix& M) {
  if (M.rows() < 2) return std::numeric_limits<double>::infinity();
  const Eigen::VectorXcd ev = Eigen::ComplexEigenSolver<CMatrix>(M, false).eigenvalues();
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    for (Eigen::Index j = i + 1; j < ev.size(); ++j) gap = std::min(gap, std::abs(ev(i) - ev(j)));
  }
  return gap;
}

std::optional<cplx> refine_double_eigenvalue(const CMatrix& A, const CMatrix& B, cplx lambda0,
                                             int max_iter) {
  const Eigen::Index n = A.rows();
  if (n < 2) return std::nullopt;
  const CMatrix I = CMatrix::Identity(n, n);

  // Start from the closest pair of eigenvalues of A + lambda0 B.
  Eigen::ComplexEigenSolver<CMatrix> es(A + lambda0 * B);
  const Eigen::VectorXcd ev = es.eigenvalues();
  Eigen::Index bi = 0, bj = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(ev(i) - ev(j)) < std::abs(ev(bi) - ev(bj))) {
        bi = i;
        bj = j;
      }
    }
  }
  cplx lambda = lambda0;
  cplx mu = 0.5 * (ev(bi) + ev(bj));
  CVector x = es.eigenvectors().col(bi).normalized();
  const CVector c = x;
  // Minimum-norm w with (M) w = x, orthogonal to c.
  const CMatrix M0 = A + lambda * B - mu * I;
  CVector w = Eigen::CompleteOrthogonalDecomposition<CMatrix>(M0).solve(x);
  w -= c * c.dot(w);

  auto residual = [&](cplx l, cplx m, const CVector& xx, const CVector& ww) {
    const CMatrix M = A + l * B - m * I;
    CVector f(2 * n + 2);
    f.head(n) = M * xx;
    f.segment(n, n) = M * ww - xx;
    f(2 * n) = c.dot(xx) - 1.0;
    f(2 * n + 1) = c.dot(ww);
    return f;
  };

  // Newton on (x, w, lambda, mu) for M x = 0, M w = x, c^H x = 1, c^H w = 0.
  CVector f = residual(lambda, mu, x, w);
  for (int it = 0; it < max_iter; ++it) {
    const CMatrix M = A + lambda * B - mu * I;
    CMatrix J = CMatrix::Zero(2 * n + 2, 2 * n + 2);
    J.block(0, 0, n, n) = M;
    J.block(0, 2 * n, n, 1) = B * x;
    J.block(0, 2 * n + 1, n, 1) = -x;
    J.block(n, 0, n, n) = -I;
    J.block(n, n, n, n) = M;
    J.block(n, 2 * n, n, 1) = B * w;
    J.block(n, 2 * n + 1, n, 1) = -w;
    J.block(2 * n, 0, 1, n) = c.adjoint();
    J.block(2 * n + 1, n, 1, n) = c.adjoint();
    const CVector step = J.partialPivLu().solve(-f);
    if (!step.allFinite()) return std::nullopt;
    x += step.head(n);
    w += step.segment(n, n);
    lambda += step(2 * n);
    mu += step(2 * n + 1);
    const CVector f_next = residual(lambda, mu, x, w);
    const bool stalled = f_next.norm() >= 0.5 * f.norm();
    f = f_next;
    if (stalled) break;
  }
  // A polish that wandered off means the start was not near a double point.
  if (!std::isfinite(std::abs(lambda)) ||
      std::abs(lambda - lambda0) > 1e-6 * std::max(1.0, std::abs(lambda0))) {
    return std::nullopt;
  }
  return lambda;
}

DoubleEigResult double_eig(const CMatrix& A, const CMatrix& B, const SolveOptions& opts, Rng& rng,
                           double gap_tol, bool refine) {
  const auto [D1, D0] = double_eig_linearization(A, B);
  DoubleEigResult out;
  out.solve = solve(Pencil(D1, D0), opts, rng);
  out.raw_values = out.solve.finite_true;
  out.values = out.raw_values;
  if (refine) {
    for (cplx& v : out.values) {
      if (auto polished = refine_double_eigenvalue(A, B, v)) v = *polished;
    }
  }
  bool all_verified = true;
  for (const cplx& lambda : out.values) {
    const double gap = min_eigenvalue_gap(A + lambda * B);
    out.min_gaps.push_back(gap);
    all_verified = all_verified && gap <= gap_tol;
  }
  const auto n = static_cast<std::size_t>(A.rows());
  out.degenerate = !all_verified || out.values.size() != n * (n - (n > 0 ? 1 : 0));
  return out;
}

}  // namespace singpencil
