#pragma once

#include <optional>
#include <vector>

#include "singpencil/matrix_core.hpp"

namespace singpencil {

/// The pencil A - lambda B. When `scaled` is set, A and B have unit 1-norm
/// and scale_alpha / scale_beta hold the original norms, so an eigenvalue of
/// the scaled pencil maps back to the original by the factor alpha / beta.
struct Pencil {
  CMatrix A;
  CMatrix B;
  double scale_alpha = 1.0;
  double scale_beta = 1.0;
  bool scaled = false;

  Pencil() = default;
  /// Validates equal shapes and finite entries.
  Pencil(CMatrix a, CMatrix b);

  Eigen::Index rows() const noexcept { return A.rows(); }
  Eigen::Index cols() const noexcept { return A.cols(); }
  bool is_square() const noexcept { return A.rows() == A.cols(); }

  /// Factor that maps eigenvalues of this pencil back to the unscaled one.
  double backscale_factor() const noexcept { return scale_alpha / scale_beta; }
};

struct NormalRankReport {
  int nrank = 0;
  int k = 0;  ///< max(rows, cols) - nrank
  std::vector<cplx> zeta_samples;
  double tol_used = 0.0;  ///< largest tolerance applied across probes
};

/// Divides A by ||A||_1 and B by ||B||_1. Throws ArgumentError if either is
/// zero. A pencil that is already scaled is returned unchanged.
Pencil scale(const Pencil& p);

/// Pads a rectangular pencil with zero rows or columns to max(n, m) square.
Pencil squarify(const Pencil& p);

/// nrank = max over `probes` random points zeta on the unit circle of
/// rank(A - zeta B). Unscaled input is normalized internally; a zero A or B
/// is left as is rather than rejected.
NormalRankReport normal_rank(const Pencil& p, Rng& rng, std::optional<double> tol = std::nullopt,
                             int probes = 2);

}  // namespace singpencil
