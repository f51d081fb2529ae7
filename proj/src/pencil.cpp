#include "singpencil/pencil.hpp"

#include <algorithm>

#include "singpencil/errors.hpp"

namespace singpencil {

Pencil::Pencil(CMatrix a, CMatrix b) : A(std::move(a)), B(std::move(b)) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw ArgumentError("pencil: A is " + std::to_string(A.rows()) + "x" +
                        std::to_string(A.cols()) + " but B is " + std::to_string(B.rows()) + "x" +
                        std::to_string(B.cols()));
  }
  require_finite(A, "pencil A");
  require_finite(B, "pencil B");
}

Pencil scale(const Pencil& p) {
  if (p.scaled) return p;
  const double na = norm1(p.A);
  const double nb = norm1(p.B);
  if (na == 0.0) throw ArgumentError("scale: A is zero, pencil is degenerate");
  if (nb == 0.0) throw ArgumentError("scale: B is zero, pencil is degenerate");
  Pencil out;
  out.A = p.A / na;
  out.B = p.B / nb;
  out.scale_alpha = na;
  out.scale_beta = nb;
  out.scaled = true;
  return out;
}

Pencil squarify(const Pencil& p) {
  if (p.is_square()) return p;
  const Eigen::Index n = std::max(p.rows(), p.cols());
  Pencil out = p;
  out.A = CMatrix::Zero(n, n);
  out.B = CMatrix::Zero(n, n);
  out.A.topLeftCorner(p.rows(), p.cols()) = p.A;
  out.B.topLeftCorner(p.rows(), p.cols()) = p.B;
  return out;
}

NormalRankReport normal_rank(const Pencil& p, Rng& rng, std::optional<double> tol, int probes) {
  if (probes < 1) throw ArgumentError("normal_rank: need at least one probe");
  CMatrix a = p.A;
  CMatrix b = p.B;
  if (!p.scaled) {
    const double na = norm1(a);
    const double nb = norm1(b);
    if (na > 0) a /= na;
    if (nb > 0) b /= nb;
  }

  NormalRankReport report;
  for (int i = 0; i < probes; ++i) {
    const cplx zeta = rng.unit_circle();
    const CMatrix m = a - zeta * b;
    const double t = tol.value_or(default_rank_tol(m));
    report.zeta_samples.push_back(zeta);
    report.tol_used = std::max(report.tol_used, t);
    report.nrank = std::max(report.nrank, rank_with_tol(m, t));
  }
  report.k = static_cast<int>(std::max(p.rows(), p.cols())) - report.nrank;
  return report;
}

}  // namespace singpencil
