#include "singpencil/solver.hpp"

#include <algorithm>
#include <array>

#include "singpencil/errors.hpp"

namespace singpencil {

namespace {

constexpr std::array<std::pair<EigenClass, std::string_view>, 6> kClassNames{{
    {EigenClass::FiniteTrue, "FiniteTrue"},
    {EigenClass::InfiniteTrue, "InfiniteTrue"},
    {EigenClass::Prescribed, "Prescribed"},
    {EigenClass::RandomRight, "RandomRight"},
    {EigenClass::RandomLeft, "RandomLeft"},
    {EigenClass::Unclassified, "Unclassified"},
}};

bool near_threshold(double value, double threshold) {
  return value >= threshold / 10.0 && value <= threshold * 10.0;
}

// Eigen-decomposes (A~, B~) and fills the diagnostics against U, V. With an
// empty U, V the orthogonality norms are zero.
std::vector<EigenRecord> diagnose(const Pencil& perturbed, const CMatrix& U, const CMatrix& V) {
  EigDecomposition eig = generalized_eig(perturbed.A, perturbed.B);
  std::vector<EigenRecord> records;
  records.reserve(eig.size());
  for (auto& pair : eig.pairs) {
    EigenRecord r;
    r.lambda = pair.lambda;
    r.s_abs = std::abs(pair.y.dot(perturbed.B * pair.x));
    if (U.cols() > 0) {
      r.vx_norm = (V.adjoint() * pair.x).norm();
      r.uy_norm = (U.adjoint() * pair.y).norm();
    }
    r.x = std::move(pair.x);
    r.y = std::move(pair.y);
    records.push_back(std::move(r));
  }
  return records;
}

// A prescribed value that lands on (or next to) a true eigenvalue shows up
// either as a FiniteTrue record within `radius` or as a cluster of two or
// more records around gamma whose eigenvectors mix.
bool has_collision(const std::vector<EigenRecord>& records, const PerturbationSpec& spec,
                   double radius) {
  for (const auto& g : spec.prescribed()) {
    if (g.is_infinite()) continue;
    int near = 0;
    for (const auto& r : records) {
      if (r.lambda.is_infinite() || std::abs(g.value() - r.lambda.value()) >= radius) continue;
      if (r.cls == EigenClass::FiniteTrue) return true;
      ++near;
    }
    if (near >= 2) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(EigenClass c) noexcept {
  for (const auto& [cls, name] : kClassNames) {
    if (cls == c) return name;
  }
  return "Unclassified";
}

std::optional<EigenClass> eigen_class_from_string(std::string_view s) noexcept {
  for (const auto& [cls, name] : kClassNames) {
    if (name == s) return cls;
  }
  return std::nullopt;
}

std::vector<HomogeneousEigenvalue> PerturbationSpec::prescribed() const {
  std::vector<HomogeneousEigenvalue> out;
  out.reserve(static_cast<std::size_t>(dA.size()));
  for (Eigen::Index i = 0; i < dA.size(); ++i) {
    out.push_back(HomogeneousEigenvalue::normalized(dA(i), dB(i)));
  }
  return out;
}

void PerturbationSpec::validate() const {
  const int nn = n();
  const int kk = k();
  if (V.rows() != nn || V.cols() != kk || dA.size() != kk || dB.size() != kk) {
    throw ArgumentError("perturbation: inconsistent U, V, dA, dB shapes");
  }
  if (tau == cplx{}) throw ArgumentError("perturbation: tau must be nonzero");
  const double tol = 10.0 * std::max(nn, 1) * kEps;
  const CMatrix eye = CMatrix::Identity(kk, kk);
  if ((U.adjoint() * U - eye).norm() > tol || (V.adjoint() * V - eye).norm() > tol) {
    throw ArgumentError("perturbation: U and V must have orthonormal columns");
  }
  for (Eigen::Index i = 0; i < kk; ++i) {
    if (dA(i) == cplx{} && dB(i) == cplx{}) {
      throw ArgumentError("perturbation: (D_A, D_B) is singular at index " + std::to_string(i));
    }
  }
}

void SolveOptions::validate() const {
  if (!(delta1 > 0) || !(delta2 > 0)) throw ArgumentError("delta1 and delta2 must be positive");
  if (tau == 0.0 || !std::isfinite(tau)) throw ArgumentError("tau must be finite and nonzero");
  if (max_retries < 0) throw ArgumentError("max_retries must be nonnegative");
  if (rank_probes < 1) throw ArgumentError("rank_probes must be at least 1");
  if (rank_tol && *rank_tol < 0) throw ArgumentError("rank tolerance must be nonnegative");
}

double GapReport::zeta_separation() const noexcept {
  if (std::isnan(max_zeta_true) || std::isnan(min_zeta_nontrue)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (max_zeta_true == 0.0) return std::numeric_limits<double>::infinity();
  return min_zeta_nontrue / max_zeta_true;
}

std::size_t SolveResult::count(EigenClass c) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(), [c](const EigenRecord& r) { return r.cls == c; }));
}

PerturbationSpec make_perturbation(int n, int k, const SolveOptions& opts, Rng& rng) {
  if (k <= 0) {
    throw ArgumentError("make_perturbation: k must be positive (k=0 means the pencil is regular)");
  }
  if (k > n) throw ArgumentError("make_perturbation: k exceeds n");
  PerturbationSpec spec;
  spec.U = random_orthonormal(n, k, rng);
  spec.V = random_orthonormal(n, k, rng);
  spec.dA.resize(k);
  spec.dB.resize(k);
  spec.tau = opts.tau;
  if (opts.gamma_mode == GammaMode::Explicit) {
    if (static_cast<int>(opts.explicit_dA.size()) != k ||
        static_cast<int>(opts.explicit_dB.size()) != k) {
      throw ArgumentError("make_perturbation: explicit D_A, D_B need " + std::to_string(k) +
                          " entries each");
    }
    for (int i = 0; i < k; ++i) {
      spec.dA(i) = opts.explicit_dA[static_cast<std::size_t>(i)];
      spec.dB(i) = opts.explicit_dB[static_cast<std::size_t>(i)];
    }
  } else {
    for (int i = 0; i < k; ++i) spec.dA(i) = rng.uniform(1.0, 2.0);
    for (int i = 0; i < k; ++i) spec.dB(i) = rng.uniform(1.0, 2.0);
  }
  spec.validate();
  return spec;
}

Pencil perturb(const Pencil& p, const PerturbationSpec& spec) {
  if (!p.is_square() || p.rows() != spec.n()) {
    throw ArgumentError("perturb: pencil must be square of size " + std::to_string(spec.n()));
  }
  if (spec.tau == cplx{}) throw ArgumentError("perturb: tau must be nonzero");
  const CMatrix vh = spec.V.adjoint();
  Pencil out = p;
  out.A += spec.tau * (spec.U * spec.dA.asDiagonal() * vh);
  out.B += spec.tau * (spec.U * spec.dB.asDiagonal() * vh);
  return out;
}

EigenClass classify_one(double s_abs, double vx_norm, double uy_norm, double delta1,
                        double delta2) noexcept {
  if (std::isnan(s_abs) || std::isnan(vx_norm) || std::isnan(uy_norm)) {
    return EigenClass::Unclassified;
  }
  const bool right_orth = vx_norm < delta1;
  const bool left_orth = uy_norm < delta1;
  if (right_orth && left_orth) {
    return s_abs > delta2 ? EigenClass::FiniteTrue : EigenClass::InfiniteTrue;
  }
  if (right_orth) return EigenClass::RandomRight;
  if (left_orth) return EigenClass::RandomLeft;
  return EigenClass::Prescribed;
}

void classify(std::vector<EigenRecord>& records, double delta1, double delta2) {
  for (auto& r : records) {
    r.zeta = std::max(r.vx_norm, r.uy_norm);
    r.cls = classify_one(r.s_abs, r.vx_norm, r.uy_norm, delta1, delta2);
  }
}

GapReport make_gap_report(const std::vector<EigenRecord>& records, double delta1, double delta2) {
  GapReport g;
  auto upd_max = [](double& slot, double v) { slot = std::isnan(slot) ? v : std::max(slot, v); };
  auto upd_min = [](double& slot, double v) { slot = std::isnan(slot) ? v : std::min(slot, v); };
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    bool ambiguous = near_threshold(r.vx_norm, delta1) || near_threshold(r.uy_norm, delta1);
    if (is_true_class(r.cls)) {
      upd_max(g.max_zeta_true, r.zeta);
      ambiguous = ambiguous || near_threshold(r.s_abs, delta2);
    } else {
      upd_min(g.min_zeta_nontrue, r.zeta);
    }
    if (r.cls == EigenClass::InfiniteTrue) upd_max(g.max_s_infinite, r.s_abs);
    if (r.cls == EigenClass::FiniteTrue) upd_min(g.min_s_finite, r.s_abs);
    if (ambiguous) g.ambiguous.push_back(static_cast<int>(i));
  }
  return g;
}

SolveResult solve(const Pencil& input, const SolveOptions& opts, Rng& rng) {
  opts.validate();
  const Pencil p = scale(squarify(input));
  const int n = static_cast<int>(p.rows());

  SolveResult result;
  result.backscale = p.backscale_factor();
  result.nrank_report = normal_rank(p, rng, opts.rank_tol, opts.rank_probes);
  const int k = result.nrank_report.k;

  if (k == 0) {
    result.records = diagnose(p, CMatrix(n, 0), CMatrix(n, 0));
    classify(result.records, opts.delta1, opts.delta2);
  } else {
    for (int attempt = 0;; ++attempt) {
      PerturbationSpec spec = make_perturbation(n, k, opts, rng);
      auto records = diagnose(perturb(p, spec), spec.U, spec.V);
      classify(records, opts.delta1, opts.delta2);
      const bool collision = opts.retry_on_collision && has_collision(records, spec, 10.0 * opts.delta1);
      result.records = std::move(records);
      result.spec_used = std::move(spec);
      result.retries = attempt;
      if (!collision) break;
      if (attempt >= opts.max_retries) {
        result.collision_warning = true;
        break;
      }
    }
  }

  result.gap_report = make_gap_report(result.records, opts.delta1, opts.delta2);
  for (auto& r : result.records) {
    r.lambda = r.lambda.scaled(result.backscale);
    if (r.cls == EigenClass::FiniteTrue) result.finite_true.push_back(r.lambda.value());
  }
  return result;
}

SolveResult solve(const Pencil& p, const SolveOptions& opts) {
  Rng rng(opts.seed);
  return solve(p, opts, rng);
}

IntersectionResult solve_by_intersection(const Pencil& input, const SolveOptions& opts, Rng& rng,
                                         double tol) {
  opts.validate();
  const Pencil p = scale(squarify(input));
  const int n = static_cast<int>(p.rows());
  const auto report = normal_rank(p, rng, opts.rank_tol, opts.rank_probes);

  IntersectionResult out;
  out.tol = tol;
  out.k = report.k;

  auto spectrum = [&](std::uint64_t stream) {
    EigDecomposition eig;
    if (report.k == 0) {
      eig = generalized_eig(p.A, p.B);
    } else {
      Rng sub = rng.split(stream);
      const Pencil perturbed = perturb(p, make_perturbation(n, report.k, opts, sub));
      eig = generalized_eig(perturbed.A, perturbed.B);
    }
    std::vector<HomogeneousEigenvalue> values;
    for (const auto& pair : eig.pairs) values.push_back(pair.lambda.scaled(p.backscale_factor()));
    return values;
  };

  const auto e1 = spectrum(1);
  const auto e2 = spectrum(2);
  std::vector<cplx> f1, f2;
  int inf1 = 0, inf2 = 0;
  for (const auto& v : e1) v.is_infinite() ? void(++inf1) : f1.push_back(v.value());
  for (const auto& v : e2) v.is_infinite() ? void(++inf2) : f2.push_back(v.value());
  out.infinite_matches = std::min(inf1, inf2);

  const auto pairs = greedy_nearest_pairs(
      static_cast<int>(f1.size()), static_cast<int>(f2.size()), [&](int i, int j) {
        return std::abs(f1[i] - f2[j]) / std::max(1.0, std::abs(f1[i]));
      });
  for (const auto& m : pairs) {
    if (m.distance <= tol) out.finite.push_back({f1[m.first], m.distance});
  }
  return out;
}

}  // namespace singpencil
