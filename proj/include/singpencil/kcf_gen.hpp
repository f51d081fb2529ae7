#pragma once

#include <string>
#include <vector>

#include "singpencil/matrix_core.hpp"
#include "singpencil/pencil.hpp"

namespace singpencil {

/// One block of a Kronecker canonical form.
///   Jordan(r, l0):   J_r(l0) - lambda I,   r x r
///   Nilpotent(s):    I - lambda N_s,       s x s (infinite eigenvalue)
///   RightSingular(m): L_m = [0 I_m] - lambda [I_m 0],  m x (m+1)
///   LeftSingular(n):  L_n^T,                           (n+1) x n
struct KcfBlock {
  enum class Kind { Jordan, Nilpotent, RightSingular, LeftSingular };

  Kind kind = Kind::Jordan;
  int size = 1;
  cplx eigenvalue{};  ///< Jordan only

  static KcfBlock jordan(int r, cplx l0) { return {Kind::Jordan, r, l0}; }
  static KcfBlock nilpotent(int s) { return {Kind::Nilpotent, s, {}}; }
  static KcfBlock right_singular(int m) { return {Kind::RightSingular, m, {}}; }
  static KcfBlock left_singular(int n) { return {Kind::LeftSingular, n, {}}; }

  int rows() const noexcept;
  int cols() const noexcept;
};

struct KcfTransform {
  enum class Kind { None, Unitary, General };

  Kind kind = Kind::Unitary;
  /// General only: 2-norm condition number of each of P and Q.
  double cond = 10.0;
};

struct KcfSpec {
  std::vector<KcfBlock> blocks;
  KcfTransform transform;
  /// When set, the number of L and L^T blocks must agree.
  bool require_square = true;
};

struct GroundTruth {
  std::vector<cplx> finite;  ///< with multiplicity
  int infinite = 0;
  int rows = 0;
  int cols = 0;
  int nrank = 0;
  int r = 0;  ///< size of the regular part
  int k = 0;  ///< max(rows, cols) - nrank
  int M = 0;  ///< sum of right minimal indices
  int N = 0;  ///< sum of left minimal indices
};

/// Closed-form readout of the block data.
GroundTruth oracle_eigenvalues(const KcfSpec& spec);

/// Block-diagonal canonical pencil in order regular, L, L^T.
Pencil canonical_pencil(const KcfSpec& spec);

/// P (A - lambda B) Q with P, Q drawn per spec.transform.
Pencil build(const KcfSpec& spec, Rng& rng, GroundTruth* truth = nullptr);

/// Square matrix with 2-norm condition number `cond`: U diag(s) W^H with
/// s logspaced from 1 down to 1/cond and U, W Haar unitary.
CMatrix conditioned_matrix(int n, double cond, Rng& rng);

/// JSON round trip for the CLI `gen` subcommand.
std::string to_json(const KcfSpec& spec);
KcfSpec kcf_spec_from_json(const std::string& text, const std::string& source = "kcf spec");
std::string to_json(const GroundTruth& truth);

}  // namespace singpencil
