#include "singpencil/kcf_gen.hpp"

#include <cmath>

#include <json.hpp>

#include "singpencil/errors.hpp"

namespace singpencil {

using nlohmann::json;

int KcfBlock::rows() const noexcept {
  return kind == Kind::LeftSingular ? size + 1 : size;
}

int KcfBlock::cols() const noexcept {
  return kind == Kind::RightSingular ? size + 1 : size;
}

namespace {

void check_spec(const KcfSpec& spec) {
  if (spec.blocks.empty()) throw ArgumentError("kcf: spec has no blocks");
  int right = 0, left = 0;
  for (const auto& b : spec.blocks) {
    const bool singular =
        b.kind == KcfBlock::Kind::RightSingular || b.kind == KcfBlock::Kind::LeftSingular;
    if (singular ? b.size < 0 : b.size < 1) {
      throw ArgumentError("kcf: invalid block size " + std::to_string(b.size));
    }
    right += b.kind == KcfBlock::Kind::RightSingular;
    left += b.kind == KcfBlock::Kind::LeftSingular;
  }
  if (spec.require_square && right != left) {
    throw ArgumentError("kcf: square pencil needs as many L blocks as L^T blocks (" +
                        std::to_string(right) + " vs " + std::to_string(left) + ")");
  }
  if (spec.transform.kind == KcfTransform::Kind::General && !(spec.transform.cond >= 1.0)) {
    throw ArgumentError("kcf: condition bound must be >= 1");
  }
}

int block_rank(const KcfBlock& b) {
  return b.size;  // J_r, N_s: r, s;  L_m: m;  L_n^T: n
}

}  // namespace

GroundTruth oracle_eigenvalues(const KcfSpec& spec) {
  check_spec(spec);
  GroundTruth t;
  for (const auto& b : spec.blocks) {
    t.rows += b.rows();
    t.cols += b.cols();
    t.nrank += block_rank(b);
    switch (b.kind) {
      case KcfBlock::Kind::Jordan:
        t.finite.insert(t.finite.end(), static_cast<std::size_t>(b.size), b.eigenvalue);
        t.r += b.size;
        break;
      case KcfBlock::Kind::Nilpotent:
        t.infinite += b.size;
        t.r += b.size;
        break;
      case KcfBlock::Kind::RightSingular:
        t.M += b.size;
        break;
      case KcfBlock::Kind::LeftSingular:
        t.N += b.size;
        break;
    }
  }
  t.k = std::max(t.rows, t.cols) - t.nrank;
  return t;
}

Pencil canonical_pencil(const KcfSpec& spec) {
  const GroundTruth t = oracle_eigenvalues(spec);
  CMatrix A = CMatrix::Zero(t.rows, t.cols);
  CMatrix B = CMatrix::Zero(t.rows, t.cols);

  // Regular blocks first, then L, then L^T.
  std::vector<const KcfBlock*> ordered;
  for (auto kind : {KcfBlock::Kind::Jordan, KcfBlock::Kind::Nilpotent,
                    KcfBlock::Kind::RightSingular, KcfBlock::Kind::LeftSingular}) {
    for (const auto& b : spec.blocks) {
      if (b.kind == kind) ordered.push_back(&b);
    }
  }

  int r0 = 0, c0 = 0;
  for (const KcfBlock* b : ordered) {
    const int s = b->size;
    switch (b->kind) {
      case KcfBlock::Kind::Jordan:
        for (int i = 0; i < s; ++i) {
          A(r0 + i, c0 + i) = b->eigenvalue;
          B(r0 + i, c0 + i) = 1.0;
          if (i + 1 < s) A(r0 + i, c0 + i + 1) = 1.0;
        }
        break;
      case KcfBlock::Kind::Nilpotent:
        for (int i = 0; i < s; ++i) {
          A(r0 + i, c0 + i) = 1.0;
          if (i + 1 < s) B(r0 + i, c0 + i + 1) = 1.0;
        }
        break;
      case KcfBlock::Kind::RightSingular:
        for (int i = 0; i < s; ++i) {
          A(r0 + i, c0 + i + 1) = 1.0;
          B(r0 + i, c0 + i) = 1.0;
        }
        break;
      case KcfBlock::Kind::LeftSingular:
        for (int i = 0; i < s; ++i) {
          A(r0 + i + 1, c0 + i) = 1.0;
          B(r0 + i, c0 + i) = 1.0;
        }
        break;
    }
    r0 += b->rows();
    c0 += b->cols();
  }
  return Pencil(std::move(A), std::move(B));
}

CMatrix conditioned_matrix(int n, double cond, Rng& rng) {
  if (n == 0) return CMatrix(0, 0);
  const CMatrix u = random_orthonormal(n, n, rng);
  const CMatrix w = random_orthonormal(n, n, rng);
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    s(i) = std::pow(cond, -t);
  }
  return u * s.cast<cplx>().asDiagonal() * w.adjoint();
}

Pencil build(const KcfSpec& spec, Rng& rng, GroundTruth* truth) {
  Pencil canon = canonical_pencil(spec);
  if (truth) *truth = oracle_eigenvalues(spec);
  const int rows = static_cast<int>(canon.rows());
  const int cols = static_cast<int>(canon.cols());
  CMatrix P, Q;
  switch (spec.transform.kind) {
    case KcfTransform::Kind::None:
      return canon;
    case KcfTransform::Kind::Unitary:
      P = random_orthonormal(rows, rows, rng);
      Q = random_orthonormal(cols, cols, rng);
      break;
    case KcfTransform::Kind::General:
      P = conditioned_matrix(rows, spec.transform.cond, rng);
      Q = conditioned_matrix(cols, spec.transform.cond, rng);
      break;
  }
  return Pencil(P * canon.A * Q, P * canon.B * Q);
}

// JSON --------------------------------------------------------------------

namespace {

const char* kind_name(KcfBlock::Kind k) {
  switch (k) {
    case KcfBlock::Kind::Jordan: return "jordan";
    case KcfBlock::Kind::Nilpotent: return "nilpotent";
    case KcfBlock::Kind::RightSingular: return "right_singular";
    case KcfBlock::Kind::LeftSingular: return "left_singular";
  }
  return "jordan";
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ArgumentError("kcf json: complex value must be a number or [re, im]");
}

}  // namespace

std::string to_json(const KcfSpec& spec) {
  json j;
  j["blocks"] = json::array();
  for (const auto& b : spec.blocks) {
    json jb{{"type", kind_name(b.kind)}, {"size", b.size}};
    if (b.kind == KcfBlock::Kind::Jordan) jb["eigenvalue"] = complex_json(b.eigenvalue);
    j["blocks"].push_back(jb);
  }
  switch (spec.transform.kind) {
    case KcfTransform::Kind::None: j["transform"] = {{"kind", "none"}}; break;
    case KcfTransform::Kind::Unitary: j["transform"] = {{"kind", "unitary"}}; break;
    case KcfTransform::Kind::General:
      j["transform"] = {{"kind", "general"}, {"cond", spec.transform.cond}};
      break;
  }
  j["square"] = spec.require_square;
  return j.dump(2);
}

KcfSpec kcf_spec_from_json(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = text_position(text, e.byte);
    throw ParseError(source, line, col, "invalid JSON");
  }
  KcfSpec spec;
  try {
    for (const auto& jb : j.at("blocks")) {
      const auto type = jb.at("type").get<std::string>();
      const int size = jb.at("size").get<int>();
      if (type == "jordan") {
        spec.blocks.push_back(KcfBlock::jordan(size, complex_from_json(jb.at("eigenvalue"))));
      } else if (type == "nilpotent") {
        spec.blocks.push_back(KcfBlock::nilpotent(size));
      } else if (type == "right_singular" || type == "L") {
        spec.blocks.push_back(KcfBlock::right_singular(size));
      } else if (type == "left_singular" || type == "LT") {
        spec.blocks.push_back(KcfBlock::left_singular(size));
      } else {
        throw ArgumentError("kcf json: unknown block type '" + type + "'");
      }
    }
    if (j.contains("transform")) {
      const auto& jt = j.at("transform");
      const auto kind = jt.is_string() ? jt.get<std::string>() : jt.at("kind").get<std::string>();
      if (kind == "none") {
        spec.transform.kind = KcfTransform::Kind::None;
      } else if (kind == "unitary") {
        spec.transform.kind = KcfTransform::Kind::Unitary;
      } else if (kind == "general") {
        spec.transform.kind = KcfTransform::Kind::General;
        if (jt.is_object() && jt.contains("cond")) spec.transform.cond = jt.at("cond").get<double>();
      } else {
        throw ArgumentError("kcf json: unknown transform '" + kind + "'");
      }
    }
    if (j.contains("square")) spec.require_square = j.at("square").get<bool>();
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("kcf json: ") + e.what());
  }
  check_spec(spec);
  return spec;
}

std::string to_json(const GroundTruth& t) {
  json j;
  j["finite"] = json::array();
  for (const auto& z : t.finite) j["finite"].push_back(complex_json(z));
  j["infinite"] = t.infinite;
  j["rows"] = t.rows;
  j["cols"] = t.cols;
  j["nrank"] = t.nrank;
  j["r"] = t.r;
  j["k"] = t.k;
  j["M"] = t.M;
  j["N"] = t.N;
  return j.dump(2);
}

}  // namespace singpencil
