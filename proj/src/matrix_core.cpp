#include "singpencil/matrix_core.hpp"

#include <algorithm>
#include <cmath>

#include <lapacke.h>

#include "singpencil/errors.hpp"

namespace singpencil {

void require_finite(const CMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw ArgumentError(std::string(what) + ": matrix has non-finite entries");
  }
}

double norm1(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

HomogeneousEigenvalue HomogeneousEigenvalue::normalized(cplx alpha, cplx beta) {
  const double scale = std::hypot(std::abs(alpha), std::abs(beta));
  if (scale == 0.0) {
    throw ArgumentError("homogeneous eigenvalue (0, 0) is undefined");
  }
  return {alpha / scale, beta / scale};
}

HomogeneousEigenvalue HomogeneousEigenvalue::from_value(cplx lambda) {
  return normalized(lambda, 1.0);
}

HomogeneousEigenvalue HomogeneousEigenvalue::infinity() { return {1.0, 0.0}; }

cplx HomogeneousEigenvalue::value() const noexcept {
  if (is_infinite()) {
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
  return alpha / beta;
}

HomogeneousEigenvalue HomogeneousEigenvalue::scaled(double factor) const {
  // alpha * f / beta, split between the two parts to avoid overflow.
  const double root = std::sqrt(factor);
  return normalized(alpha * root, beta / root);
}

EigDecomposition generalized_eig(const CMatrix& A, const CMatrix& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw ArgumentError("generalized_eig: A and B must be square of the same size");
  }
  require_finite(A, "generalized_eig A");
  require_finite(B, "generalized_eig B");

  const lapack_int n = static_cast<lapack_int>(A.rows());
  EigDecomposition out;
  if (n == 0) return out;

  // zggev overwrites its inputs.
  CMatrix a = A;
  CMatrix b = B;
  Eigen::VectorXcd alpha(n), beta(n);
  CMatrix vl(n, n), vr(n, n);

  const lapack_int info = LAPACKE_zggev(
      LAPACK_COL_MAJOR, 'V', 'V', n, reinterpret_cast<lapack_complex_double*>(a.data()), n,
      reinterpret_cast<lapack_complex_double*>(b.data()), n,
      reinterpret_cast<lapack_complex_double*>(alpha.data()),
      reinterpret_cast<lapack_complex_double*>(beta.data()),
      reinterpret_cast<lapack_complex_double*>(vl.data()), n,
      reinterpret_cast<lapack_complex_double*>(vr.data()), n);
  if (info < 0) {
    throw ArgumentError("zggev: illegal argument " + std::to_string(-info));
  }
  if (info > 0) {
    std::string what = info <= n ? "QZ iteration did not converge; eigenvalues " +
                                       std::to_string(info) + ".." + std::to_string(n) +
                                       " may be inaccurate"
                                 : "error in eigenvector back-transformation";
    throw NumericalFailure("zggev", info, what);
  }

  out.pairs.reserve(static_cast<std::size_t>(n));
  for (lapack_int i = 0; i < n; ++i) {
    EigPair p;
    if (alpha(i) == cplx{} && beta(i) == cplx{}) {
      // Only possible for exactly singular pencils; report as infinite so the
      // record stays well formed. Classification relies on s, not on beta.
      p.lambda = HomogeneousEigenvalue::infinity();
    } else {
      p.lambda = HomogeneousEigenvalue::normalized(alpha(i), beta(i));
    }
    p.x = vr.col(i);
    p.y = vl.col(i);
    const double nx = p.x.norm();
    const double ny = p.y.norm();
    if (nx > 0) p.x /= nx;
    if (ny > 0) p.y /= ny;
    out.pairs.push_back(std::move(p));
  }
  return out;
}

double right_residual(const CMatrix& A, const CMatrix& B, const EigPair& p) {
  return (p.lambda.beta * (A * p.x) - p.lambda.alpha * (B * p.x)).norm();
}

double left_residual(const CMatrix& A, const CMatrix& B, const EigPair& p) {
  const CVector ya = A.adjoint() * p.y;
  const CVector yb = B.adjoint() * p.y;
  return (std::conj(p.lambda.beta) * ya - std::conj(p.lambda.alpha) * yb).norm();
}

double default_rank_tol(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const Eigen::VectorXd sv = Eigen::BDCSVD<CMatrix>(m).singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  return static_cast<double>(std::max(m.rows(), m.cols())) * kEps * smax;
}

int rank_with_tol(const CMatrix& m, std::optional<double> tol) {
  if (m.size() == 0) return 0;
  require_finite(m, "rank_with_tol");
  const Eigen::VectorXd sv = Eigen::BDCSVD<CMatrix>(m).singularValues();
  const double smax = sv(0);
  const double t =
      tol.value_or(static_cast<double>(std::max(m.rows(), m.cols())) * kEps * smax);
  if (t < 0) throw ArgumentError("rank_with_tol: tolerance must be nonnegative");
  return static_cast<int>((sv.array() > t).count());
}

CMatrix complex_gaussian(int rows, int cols, Rng& rng) {
  CMatrix g(rows, cols);
  // Fill column by column so the draw order is fixed.
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  }
  return g;
}

CMatrix random_orthonormal(int n, int k, Rng& rng) {
  if (n < 0 || k < 0) throw ArgumentError("random_orthonormal: negative size");
  if (k > n) {
    throw ArgumentError("random_orthonormal: k=" + std::to_string(k) + " exceeds n=" +
                        std::to_string(n));
  }
  if (k == 0) return CMatrix(n, 0);
  const CMatrix g = complex_gaussian(n, k, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, k);
  const CMatrix& r = qr.matrixQR();
  for (int j = 0; j < k; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double chordal_distance(const HomogeneousEigenvalue& a, const HomogeneousEigenvalue& b) {
  // |a.alpha b.beta - b.alpha a.beta| for unit-normalized homogeneous pairs.
  return std::abs(a.alpha * b.beta - b.alpha * a.beta);
}

}  // namespace singpencil
