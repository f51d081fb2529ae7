#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "singpencil/matrix_core.hpp"
#include "singpencil/pencil.hpp"

namespace singpencil {

/// Rank-completing perturbation tau * U (D_A - lambda D_B) V^H.
struct PerturbationSpec {
  CMatrix U;  ///< n x k, orthonormal columns
  CMatrix V;  ///< n x k, orthonormal columns
  CVector dA;
  CVector dB;
  cplx tau{1e-2, 0.0};

  int n() const noexcept { return static_cast<int>(U.rows()); }
  int k() const noexcept { return static_cast<int>(U.cols()); }
  /// gamma_i = dA[i] / dB[i] (infinite when dB[i] = 0).
  std::vector<HomogeneousEigenvalue> prescribed() const;
  /// Throws ArgumentError unless the invariants hold.
  void validate() const;
};

enum class EigenClass { FiniteTrue, InfiniteTrue, Prescribed, RandomRight, RandomLeft, Unclassified };

std::string_view to_string(EigenClass c) noexcept;
std::optional<EigenClass> eigen_class_from_string(std::string_view s) noexcept;
inline bool is_true_class(EigenClass c) noexcept {
  return c == EigenClass::FiniteTrue || c == EigenClass::InfiniteTrue;
}

struct EigenRecord {
  HomogeneousEigenvalue lambda;
  CVector x;
  CVector y;
  double s_abs = 0.0;    ///< |y^H B~ x|
  double vx_norm = 0.0;  ///< ||V^H x||
  double uy_norm = 0.0;  ///< ||U^H y||
  double zeta = 0.0;     ///< max(vx_norm, uy_norm)
  EigenClass cls = EigenClass::Unclassified;
};

enum class GammaMode { Uniform12, Explicit };

struct SolveOptions {
  double tau = 1e-2;
  double delta1 = std::sqrt(kEps);
  double delta2 = 1e2 * kEps;
  std::uint64_t seed = 0;
  GammaMode gamma_mode = GammaMode::Uniform12;
  /// Used when gamma_mode is Explicit; both must have k entries.
  std::vector<cplx> explicit_dA;
  std::vector<cplx> explicit_dB;
  bool retry_on_collision = true;
  int max_retries = 3;
  std::optional<double> rank_tol;  ///< default: auto
  int rank_probes = 2;

  void validate() const;
};

/// Separation diagnostics between the true and the other eigenvalues.
/// Entries are NaN when the corresponding group is empty.
struct GapReport {
  double max_zeta_true = std::numeric_limits<double>::quiet_NaN();
  double min_zeta_nontrue = std::numeric_limits<double>::quiet_NaN();
  double max_s_infinite = std::numeric_limits<double>::quiet_NaN();
  double min_s_finite = std::numeric_limits<double>::quiet_NaN();
  /// Indices of records within a factor 10 of a threshold.
  std::vector<int> ambiguous;

  /// min_zeta_nontrue / max_zeta_true (infinite if no true rows have zeta > 0).
  double zeta_separation() const noexcept;
};

struct SolveResult {
  std::vector<EigenRecord> records;      ///< back-scaled eigenvalues, one per row
  std::vector<cplx> finite_true;         ///< back-scaled FiniteTrue values
  NormalRankReport nrank_report;
  PerturbationSpec spec_used;            ///< empty U, V when k = 0
  GapReport gap_report;
  double backscale = 1.0;                ///< alpha / beta of the scaling step
  int retries = 0;
  bool collision_warning = false;

  std::size_t count(EigenClass c) const noexcept;
};

/// Random U, V with orthonormal columns and diagonal D_A, D_B.
PerturbationSpec make_perturbation(int n, int k, const SolveOptions& opts, Rng& rng);

/// (A + tau U D_A V^H, B + tau U D_B V^H).
Pencil perturb(const Pencil& p, const PerturbationSpec& spec);

/// Sets zeta and the class of every record from its diagnostics.
void classify(std::vector<EigenRecord>& records, double delta1, double delta2);
EigenClass classify_one(double s_abs, double vx_norm, double uy_norm, double delta1,
                        double delta2) noexcept;

GapReport make_gap_report(const std::vector<EigenRecord>& records, double delta1, double delta2);

/// Finite eigenvalues of a (possibly singular, possibly rectangular) pencil
/// by one rank-completing perturbation, with the full classified spectrum of
/// the perturbed pencil.
SolveResult solve(const Pencil& p, const SolveOptions& opts, Rng& rng);
/// Convenience overload seeding a fresh Rng from opts.seed.
SolveResult solve(const Pencil& p, const SolveOptions& opts = {});

struct IntersectionMatch {
  cplx value;          ///< back-scaled, from the first perturbation
  double distance;     ///< relative distance to the partner in the second set
};

struct IntersectionResult {
  std::vector<IntersectionMatch> finite;  ///< sorted by ascending distance
  int infinite_matches = 0;
  double tol = 0.0;
  int k = 0;
};

/// Baseline: eigenvalues common to two independent rank-completing
/// perturbations, matched one-to-one within `tol` relative distance
/// (|a - b| <= tol * max(1, |a|)). Cannot tell true infinite eigenvalues
/// from fake ones; kept for comparison.
IntersectionResult solve_by_intersection(const Pencil& p, const SolveOptions& opts, Rng& rng,
                                         double tol = std::sqrt(kEps));

}  // namespace singpencil
