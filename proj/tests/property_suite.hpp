#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "singpencil/kcf_gen.hpp"
#include "singpencil/solver.hpp"
#include "test_util.hpp"

namespace proptest {

using namespace singpencil;

// Square KCF spec with simple finite eigenvalues, 1x1 infinite blocks and at
// least one pair of singular blocks. Dimension <= 40.
inline KcfSpec random_spec(std::uint64_t seed) {
  Rng rng(seed);
  KcfSpec s;
  const int pairs = 1 + static_cast<int>(rng.uniform(0, 4));
  int dim = 0;
  for (int i = 0; i < pairs; ++i) {
    const int m = static_cast<int>(rng.uniform(0, 4));
    const int n = static_cast<int>(rng.uniform(0, 4));
    s.blocks.push_back(KcfBlock::right_singular(m));
    s.blocks.push_back(KcfBlock::left_singular(n));
    dim += m + n + 1;
  }
  const int finite = static_cast<int>(rng.uniform(0, std::min(12, 40 - dim)));
  for (int i = 0; i < finite; ++i) {
    s.blocks.push_back(KcfBlock::jordan(1, cplx(rng.uniform(-3, 3), rng.uniform(-3, 3))));
  }
  dim += finite;
  const int infinite = static_cast<int>(rng.uniform(0, std::min(4, 40 - dim)));
  for (int i = 0; i < infinite; ++i) s.blocks.push_back(KcfBlock::nilpotent(1));
  if (rng.uniform() < 0.5) {
    s.transform.kind = KcfTransform::Kind::Unitary;
  } else {
    s.transform.kind = KcfTransform::Kind::General;
    s.transform.cond = std::pow(10.0, rng.uniform(0, 3));
  }
  return s;
}

struct Outcome {
  int specs = 0;
  int count_mismatches = 0;
  double oracle_error = 0;
  double gamma_error = 0;
  double tau_error = 0;
  double worst_s_ratio_low = 1;   // min over matched pairs of ratio / (tau1 / tau2)
  double worst_s_ratio_high = 1;  // max over matched pairs
  std::vector<std::string> notes;

  bool counts_ok() const { return count_mismatches == 0; }
  bool oracle_ok() const { return oracle_error <= 1e-8; }
  bool gamma_ok() const { return gamma_error <= 1e-8; }
  bool tau_ok() const { return tau_error <= 1e-8; }
  bool s_ok() const { return worst_s_ratio_low >= 0.5 && worst_s_ratio_high <= 2.0; }
  bool ok() const { return counts_ok() && oracle_ok() && gamma_ok() && tau_ok() && s_ok(); }
};

inline std::vector<cplx> prescribed_values(const SolveResult& r) {
  std::vector<cplx> out;
  for (const auto& rec : r.records) {
    if (rec.cls == EigenClass::Prescribed) out.push_back(rec.lambda.value());
  }
  return out;
}

inline void check_spec(const KcfSpec& spec, std::uint64_t seed, Outcome& out) {
  Rng rng(seed);
  GroundTruth truth;
  const Pencil p = build(spec, rng, &truth);
  // The solver must not replay the generator's stream: with equal seeds U and
  // V would be columns of the transforms P and Q.
  SolveOptions opts;
  opts.seed = Rng(seed).split(1).seed();

  const SolveResult base = solve(p, opts);
  auto note = [&](const std::string& what) {
    std::ostringstream os;
    os << "seed " << seed << ": " << what;
    out.notes.push_back(os.str());
  };

  const bool counts = base.count(EigenClass::FiniteTrue) == truth.finite.size() &&
                      base.count(EigenClass::InfiniteTrue) == static_cast<std::size_t>(truth.infinite) &&
                      base.count(EigenClass::Prescribed) == static_cast<std::size_t>(truth.k) &&
                      base.count(EigenClass::RandomRight) == static_cast<std::size_t>(truth.M) &&
                      base.count(EigenClass::RandomLeft) == static_cast<std::size_t>(truth.N);
  if (!counts) {
    ++out.count_mismatches;
    std::ostringstream os;
    os << "counts FT/IT/P/RR/RL " << base.count(EigenClass::FiniteTrue) << '/'
       << base.count(EigenClass::InfiniteTrue) << '/' << base.count(EigenClass::Prescribed) << '/'
       << base.count(EigenClass::RandomRight) << '/' << base.count(EigenClass::RandomLeft)
       << " want " << truth.finite.size() << '/' << truth.infinite << '/' << truth.k << '/'
       << truth.M << '/' << truth.N;
    note(os.str());
  }

  const double oerr = testutil::multiset_error(base.finite_true, truth.finite);
  out.oracle_error = std::max(out.oracle_error, oerr);
  if (oerr > 1e-8) note("oracle error " + std::to_string(oerr));

  std::vector<cplx> gammas;
  for (const auto& g : base.spec_used.prescribed()) gammas.push_back(g.scaled(base.backscale).value());
  const double gerr = testutil::multiset_error(prescribed_values(base), gammas);
  out.gamma_error = std::max(out.gamma_error, gerr);
  if (gerr > 1e-8) note("gamma error " + std::to_string(gerr));

  std::vector<SolveResult> sweep;
  for (double tau : {1e-3, 1e-2, 1e-1}) {
    SolveOptions o = opts;
    o.tau = tau;
    sweep.push_back(solve(p, o));
  }
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    for (std::size_t j = i + 1; j < sweep.size(); ++j) {
      const double e = testutil::multiset_error(sweep[i].finite_true, sweep[j].finite_true);
      out.tau_error = std::max(out.tau_error, e);
      if (e > 1e-8) note("tau invariance error " + std::to_string(e));
    }
  }

  // |s| for the non-true eigenvalues at tau = 1e-2 versus tau = 1e-3, matched
  // by chordal distance.
  const SolveResult& big = sweep[1];
  const SolveResult& small = sweep[0];
  std::vector<const EigenRecord*> a, b;
  for (const auto& r : big.records) {
    if (!is_true_class(r.cls)) a.push_back(&r);
  }
  for (const auto& r : small.records) {
    if (!is_true_class(r.cls)) b.push_back(&r);
  }
  const auto matches =
      greedy_nearest_pairs(static_cast<int>(a.size()), static_cast<int>(b.size()), [&](int i, int j) {
        return chordal_distance(a[i]->lambda, b[j]->lambda);
      });
  for (const auto& m : matches) {
    const double ratio = a[m.first]->s_abs / b[m.second]->s_abs / 10.0;
    out.worst_s_ratio_low = std::min(out.worst_s_ratio_low, ratio);
    out.worst_s_ratio_high = std::max(out.worst_s_ratio_high, ratio);
    if (!(ratio >= 0.5 && ratio <= 2.0)) note("s ratio " + std::to_string(ratio * 10.0));
  }
  ++out.specs;
}

inline Outcome run(int count, std::uint64_t first_seed = 1000) {
  Outcome out;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(i);
    check_spec(random_spec(seed), seed, out);
  }
  return out;
}

}  // namespace proptest
