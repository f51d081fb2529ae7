#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "singpencil/rng.hpp"

namespace singpencil {

using cplx = std::complex<double>;
/// Dense complex matrix, column-major throughout the library.
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Throws ArgumentError if any entry is NaN or Inf.
void require_finite(const CMatrix& m, const char* what);

/// Maximum absolute column sum.
double norm1(const CMatrix& m);

/// Eigenvalue lambda = alpha / beta of a pencil, stored projectively.
struct HomogeneousEigenvalue {
  cplx alpha{1.0, 0.0};
  cplx beta{1.0, 0.0};

  /// Rescales so that |alpha|^2 + |beta|^2 = 1. Throws on (0, 0).
  static HomogeneousEigenvalue normalized(cplx alpha, cplx beta);
  static HomogeneousEigenvalue from_value(cplx lambda);
  static HomogeneousEigenvalue infinity();

  bool is_infinite() const noexcept { return std::abs(beta) <= kEps * std::abs(alpha); }
  /// alpha / beta, or a complex infinity when is_infinite().
  cplx value() const noexcept;
  /// Multiplies lambda by a positive real factor, keeping the normalization.
  HomogeneousEigenvalue scaled(double factor) const;
};

struct EigPair {
  HomogeneousEigenvalue lambda;
  CVector x;  ///< right eigenvector, unit 2-norm: (beta A - alpha B) x = 0
  CVector y;  ///< left eigenvector, unit 2-norm: y^H (beta A - alpha B) = 0
};

struct EigDecomposition {
  std::vector<EigPair> pairs;

  std::size_t size() const noexcept { return pairs.size(); }
};

/// All eigenvalues with left and right eigenvectors of the square pencil
/// A - lambda B (LAPACK zggev). Eigenvectors are rescaled to unit 2-norm.
/// Throws ArgumentError on shape mismatch and NumericalFailure when the QZ
/// iteration does not converge.
EigDecomposition generalized_eig(const CMatrix& A, const CMatrix& B);

/// Residual ||(beta A - alpha B) x|| of a right eigenpair.
double right_residual(const CMatrix& A, const CMatrix& B, const EigPair& p);
/// Residual ||y^H (beta A - alpha B)|| of a left eigenpair.
double left_residual(const CMatrix& A, const CMatrix& B, const EigPair& p);

/// Number of singular values strictly above tol. With no tol the default
/// max(rows, cols) * eps * sigma_max is used.
int rank_with_tol(const CMatrix& m, std::optional<double> tol = std::nullopt);
double default_rank_tol(const CMatrix& m);

/// n x k matrix with orthonormal columns: the Q factor of a complex Gaussian
/// matrix with the phases of diag(R) absorbed, so the result is Haar
/// distributed.
CMatrix random_orthonormal(int n, int k, Rng& rng);

CMatrix complex_gaussian(int rows, int cols, Rng& rng);

CMatrix kron(const CMatrix& a, const CMatrix& b);

struct MatchedPair {
  int first;
  int second;
  double distance;
};

/// Greedy global-nearest one-to-one matching: repeatedly takes the closest
/// unmatched (i, j) pair. Ties are broken by lower i, then lower j. The
/// result has min(m1, m2) entries in ascending distance order.
template <class Dist>
std::vector<MatchedPair> greedy_nearest_pairs(int m1, int m2, Dist&& dist);

/// Distance on the Riemann sphere, well defined for infinite eigenvalues.
double chordal_distance(const HomogeneousEigenvalue& a, const HomogeneousEigenvalue& b);

template <class Dist>
std::vector<MatchedPair> greedy_nearest_pairs(int m1, int m2, Dist&& dist) {
  std::vector<MatchedPair> all;
  all.reserve(static_cast<std::size_t>(m1) * static_cast<std::size_t>(m2));
  for (int i = 0; i < m1; ++i) {
    for (int j = 0; j < m2; ++j) all.push_back({i, j, dist(i, j)});
  }
  std::sort(all.begin(), all.end(), [](const MatchedPair& a, const MatchedPair& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });
  std::vector<char> used1(static_cast<std::size_t>(m1), 0), used2(static_cast<std::size_t>(m2), 0);
  std::vector<MatchedPair> out;
  for (const auto& c : all) {
    if (used1[c.first] || used2[c.second]) continue;
    used1[c.first] = used2[c.second] = 1;
    out.push_back(c);
    if (static_cast<int>(out.size()) == std::min(m1, m2)) break;
  }
  return out;
}

}  // namespace singpencil
