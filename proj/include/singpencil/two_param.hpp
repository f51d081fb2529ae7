#pragma once

#include <optional>
#include <span>
#include <vector>

#include "singpencil/matrix_core.hpp"
#include "singpencil/solver.hpp"

namespace singpencil {

/// (A1 + lambda B1 + mu C1) x1 = 0,  (A2 + lambda B2 + mu C2) x2 = 0.
struct TwoParamProblem {
  CMatrix A1, B1, C1;
  CMatrix A2, B2, C2;

  int n1() const noexcept { return static_cast<int>(A1.rows()); }
  int n2() const noexcept { return static_cast<int>(A2.rows()); }
  void validate() const;
};

/// Operator determinants; each is n1 n2 x n1 n2.
///   D0 = B1 (x) C2 - C1 (x) B2
///   D1 = C1 (x) A2 - A1 (x) C2
///   D2 = A1 (x) B2 - B1 (x) A2
struct DeltaTriple {
  CMatrix D0, D1, D2;
};

DeltaTriple operator_determinants(const TwoParamProblem& p);

struct Eigenpair2EP {
  cplx lambda;
  cplx mu;
  double mu_discrepancy = 0.0;
  /// sigma_min(A_i + lambda B_i + mu C_i), i.e. ||(...) x_i|| for the
  /// minimal right singular vector x_i.
  double residual1 = 0.0;
  double residual2 = 0.0;
};

struct MuPair {
  cplx mu1;
  cplx mu2;
  double discrepancy;
};

/// Greedy global-nearest pairing of two candidate lists, ascending by
/// |mu1 - mu2|, ties to the lower index.
std::vector<MuPair> pair_mu_candidates(std::span<const cplx> mus1, std::span<const cplx> mus2);

enum class TwoParamRoute {
  Auto,      ///< Atkinson when D0 is numerically nonsingular, else Singular
  Singular,  ///< rank-completing perturbation on D1 - lambda D0, then mu matching
  Atkinson,  ///< common eigenvectors of (D1 + c D2, D0); requires nonsingular D0
};

struct TwoParamOptions {
  double delta = std::sqrt(kEps);
  /// Accept the closest mu pair for every lambda regardless of delta.
  bool unique_lambda = false;
  TwoParamRoute route = TwoParamRoute::Auto;
  SolveOptions solve;
};

struct TwoParamResult {
  std::vector<Eigenpair2EP> pairs;
  TwoParamRoute route_used = TwoParamRoute::Singular;
  /// Lambda components from D1 - lambda D0 (Singular route only).
  std::vector<cplx> lambdas;
};

TwoParamResult solve_2ep(const TwoParamProblem& p, const TwoParamOptions& opts, Rng& rng);

/// (D1, D0) of size 3n^2 whose finite regular eigenvalues are the lambda
/// values where A + lambda B has a double eigenvalue.
std::pair<CMatrix, CMatrix> double_eig_linearization(const CMatrix& A, const CMatrix& B);

struct DoubleEigResult {
  std::vector<cplx> values;
  /// FiniteTrue eigenvalues of the linearization before Newton polishing.
  std::vector<cplx> raw_values;
  /// Minimal distance between eigenvalues of A + lambda B, per value.
  std::vector<double> min_gaps;
  SolveResult solve;
  /// Fewer or more than n(n-1) values, or a value whose gap exceeds gap_tol.
  bool degenerate = false;
};

/// Smallest |mu_i - mu_j| over the eigenvalues of M (infinite for 1x1).
double min_eigenvalue_gap(const CMatrix& M);

/// Newton polish of an approximate double-eigenvalue point lambda0 on
///   (A + lambda B - mu I) x = 0,  (A + lambda B - mu I) w = x.
/// Returns nullopt if the iteration moves lambda by more than 1e-6
/// (relative), i.e. lambda0 was not close to a nonderogatory double point.
std::optional<cplx> refine_double_eigenvalue(const CMatrix& A, const CMatrix& B, cplx lambda0,
                                             int max_iter = 8);

/// Values lambda where A + lambda B has a double eigenvalue: finite true
/// eigenvalues of the linearization, optionally Newton-polished, each
/// verified by the eigenvalue gap of A + lambda B.
DoubleEigResult double_eig(const CMatrix& A, const CMatrix& B, const SolveOptions& opts, Rng& rng,
                           double gap_tol = 1e-6, bool refine = true);

}  // namespace singpencil
