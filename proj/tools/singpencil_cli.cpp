#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "singpencil/errors.hpp"
#include "singpencil/kcf_gen.hpp"
#include "singpencil/mmio.hpp"
#include "singpencil/solver.hpp"
#include "singpencil/two_param.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace singpencil;

namespace {

enum class Format { Table, Csv, Json };

struct Config {
  std::string file_a, file_b, spec_path, manifest_path;
  std::string out_prefix = "pencil";
  double tau = 1e-2;
  double delta1 = std::sqrt(kEps);
  double delta2 = 1e2 * kEps;
  double delta = std::sqrt(kEps);
  std::uint64_t seed = 0;
  std::optional<double> tol;
  Format format = Format::Table;
  int retries = 3;
  bool unique_lambda = false;
};

std::string num(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string cnum(cplx z, int digits) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return "inf";
  if (z.imag() == 0.0) return num(z.real(), digits);
  std::string im = num(std::abs(z.imag()), digits);
  return num(z.real(), digits) + (z.imag() < 0 ? "-" : "+") + im + "i";
}

json json_num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json json_cplx(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return "inf";
  return json::array({z.real(), z.imag()});
}

// Fixed-width table with right-aligned columns.
void print_table(std::ostream& os, const std::vector<std::string>& head,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> w(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) w[c] = head[c].size();
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) w[c] = std::max(w[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      os << (c ? "  " : "") << std::string(w[c] - cells[c].size(), ' ') << cells[c];
    }
    os << '\n';
  };
  line(head);
  for (const auto& r : rows) line(r);
}

void print_csv(std::ostream& os, const std::vector<std::string>& head,
               const std::vector<std::vector<std::string>>& rows) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) os << (c ? "," : "") << cells[c];
    os << '\n';
  };
  line(head);
  for (const auto& r : rows) line(r);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_file(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = text_position(text, e.byte);
    throw ParseError(path, line, col, "invalid JSON");
  }
}

SolveOptions solve_options(const Config& c) {
  SolveOptions o;
  o.tau = c.tau;
  o.delta1 = c.delta1;
  o.delta2 = c.delta2;
  o.seed = c.seed;
  o.rank_tol = c.tol;
  o.max_retries = c.retries;
  o.validate();
  return o;
}

Pencil read_pencil(const Config& c) { return Pencil(mm::read_file(c.file_a), mm::read_file(c.file_b)); }

// solve -----------------------------------------------------------------

int cmd_solve(const Config& c) {
  const Pencil p = read_pencil(c);
  const SolveOptions opts = solve_options(c);
  const SolveResult r = solve(p, opts);
  const auto& rep = r.nrank_report;

  if (c.format == Format::Json) {
    json j;
    j["n"] = std::max(p.rows(), p.cols());
    j["nrank"] = rep.nrank;
    j["k"] = rep.k;
    j["tau"] = opts.tau;
    j["delta1"] = opts.delta1;
    j["delta2"] = opts.delta2;
    j["seed"] = opts.seed;
    j["retries"] = r.retries;
    j["collision_warning"] = r.collision_warning;
    j["records"] = json::array();
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      const auto& e = r.records[i];
      j["records"].push_back({{"k", i + 1},
                              {"lambda", json_cplx(e.lambda.value())},
                              {"s_abs", e.s_abs},
                              {"vx_norm", e.vx_norm},
                              {"uy_norm", e.uy_norm},
                              {"class", to_string(e.cls)}});
    }
    j["finite_true"] = json::array();
    for (const cplx& z : r.finite_true) j["finite_true"].push_back(json_cplx(z));
    const auto& g = r.gap_report;
    j["gap_report"] = {{"max_zeta_true", json_num(g.max_zeta_true)},
                       {"min_zeta_nontrue", json_num(g.min_zeta_nontrue)},
                       {"max_s_infinite", json_num(g.max_s_infinite)},
                       {"min_s_finite", json_num(g.min_s_finite)},
                       {"ambiguous", g.ambiguous}};
    std::cout << j.dump(2) << '\n';
    return 0;
  }

  const bool table = c.format == Format::Table;
  const int digits = table ? 6 : 17;
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& e = r.records[i];
    if (table) {
      rows.push_back({std::to_string(i + 1), cnum(e.lambda.value(), digits), num(e.s_abs, digits),
                      num(e.vx_norm, digits), num(e.uy_norm, digits), std::string(to_string(e.cls))});
    } else {
      const cplx z = e.lambda.value();
      const bool inf = e.lambda.is_infinite();
      rows.push_back({std::to_string(i + 1), inf ? "inf" : num(z.real(), digits),
                      inf ? "0" : num(z.imag(), digits), num(e.s_abs, digits), num(e.vx_norm, digits),
                      num(e.uy_norm, digits), std::string(to_string(e.cls))});
    }
  }
  if (table) {
    std::cout << "nrank=" << rep.nrank << " k=" << rep.k << " tau=" << num(opts.tau, 6)
              << " delta1=" << num(opts.delta1, 6) << " delta2=" << num(opts.delta2, 6)
              << " seed=" << opts.seed << " retries=" << r.retries << '\n';
    print_table(std::cout, {"k", "lambda", "|s|", "||V^H x||", "||U^H y||", "class"}, rows);
  } else {
    print_csv(std::cout, {"k", "lambda_re", "lambda_im", "s_abs", "vx_norm", "uy_norm", "class"}, rows);
  }
  if (r.collision_warning) {
    std::cerr << "warning: a prescribed eigenvalue stayed close to a true one after "
              << r.retries << " retries\n";
  }
  return 0;
}

// nrank -----------------------------------------------------------------

int cmd_nrank(const Config& c) {
  const Pencil p = read_pencil(c);
  Rng rng(c.seed);
  const auto r = normal_rank(p, rng, c.tol);
  switch (c.format) {
    case Format::Table:
      std::cout << "nrank=" << r.nrank << " k=" << r.k << '\n';
      break;
    case Format::Csv:
      std::cout << "nrank,k,tol\n" << r.nrank << ',' << r.k << ',' << num(r.tol_used, 17) << '\n';
      break;
    case Format::Json:
      std::cout << json{{"nrank", r.nrank}, {"k", r.k}, {"tol", r.tol_used}}.dump(2) << '\n';
      break;
  }
  return 0;
}

// gen -------------------------------------------------------------------

int cmd_gen(const Config& c) {
  const KcfSpec spec = kcf_spec_from_json(read_text(c.spec_path), c.spec_path);
  Rng rng(c.seed);
  GroundTruth truth;
  const Pencil p = build(spec, rng, &truth);
  const std::string a = c.out_prefix + ".A.mtx", b = c.out_prefix + ".B.mtx",
                    t = c.out_prefix + ".truth.json";
  mm::write_file(a, p.A);
  mm::write_file(b, p.B);
  std::ofstream(t) << to_json(truth) << '\n';
  switch (c.format) {
    case Format::Table:
      std::cout << "wrote " << a << ' ' << b << ' ' << t << " (" << truth.rows << 'x' << truth.cols
                << ", nrank=" << truth.nrank << ")\n";
      break;
    case Format::Csv:
      std::cout << "A,B,truth\n" << a << ',' << b << ',' << t << '\n';
      break;
    case Format::Json:
      std::cout << json{{"A", a}, {"B", b}, {"truth", t}}.dump(2) << '\n';
      break;
  }
  return 0;
}

// twoparam --------------------------------------------------------------

TwoParamProblem read_manifest(const std::string& path) {
  const json j = parse_json_file(path);
  const fs::path dir = fs::path(path).parent_path();
  auto load = [&](const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_string()) {
      throw ArgumentError(path + ": manifest needs a string entry \"" + key + "\"");
    }
    const fs::path f = j.at(key).get<std::string>();
    return mm::read_file((f.is_absolute() ? f : dir / f).string());
  };
  TwoParamProblem p{load("A1"), load("B1"), load("C1"), load("A2"), load("B2"), load("C2")};
  p.validate();
  return p;
}

int cmd_twoparam(const Config& c) {
  const TwoParamProblem p = read_manifest(c.manifest_path);
  TwoParamOptions o;
  o.delta = c.delta;
  o.unique_lambda = c.unique_lambda;
  o.solve = solve_options(c);
  Rng rng(c.seed);
  const auto r = solve_2ep(p, o, rng);

  const std::vector<std::string> head{"lambda_re", "lambda_im", "mu_re",    "mu_im",
                                      "discrepancy", "residual1", "residual2"};
  if (c.format == Format::Json) {
    json j = json::array();
    for (const auto& e : r.pairs) {
      j.push_back({{"lambda", json_cplx(e.lambda)},
                   {"mu", json_cplx(e.mu)},
                   {"discrepancy", e.mu_discrepancy},
                   {"residual1", e.residual1},
                   {"residual2", e.residual2}});
    }
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  const int digits = c.format == Format::Table ? 6 : 17;
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : r.pairs) {
    rows.push_back({num(e.lambda.real(), digits), num(e.lambda.imag(), digits), num(e.mu.real(), digits),
                    num(e.mu.imag(), digits), num(e.mu_discrepancy, digits), num(e.residual1, digits),
                    num(e.residual2, digits)});
  }
  if (c.format == Format::Table) {
    std::cout << "pairs=" << r.pairs.size()
              << " route=" << (r.route_used == TwoParamRoute::Atkinson ? "atkinson" : "singular") << '\n';
    print_table(std::cout, head, rows);
  } else {
    print_csv(std::cout, head, rows);
  }
  return 0;
}

// doubleeig -------------------------------------------------------------

int cmd_doubleeig(const Config& c) {
  const CMatrix A = mm::read_file(c.file_a), B = mm::read_file(c.file_b);
  const SolveOptions opts = solve_options(c);
  Rng rng(c.seed);
  const auto r = double_eig(A, B, opts, rng);
  const auto& g = r.solve.gap_report;

  if (c.format == Format::Json) {
    json j;
    j["count"] = r.values.size();
    j["degenerate"] = r.degenerate;
    j["values"] = json::array();
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      j["values"].push_back({{"lambda", json_cplx(r.values[i])}, {"min_gap", json_num(r.min_gaps[i])}});
    }
    j["max_zeta_true"] = json_num(g.max_zeta_true);
    j["min_zeta_nontrue"] = json_num(g.min_zeta_nontrue);
    std::cout << j.dump(2) << '\n';
  } else {
    const bool table = c.format == Format::Table;
    const int digits = table ? 6 : 17;
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      if (table) {
        rows.push_back({std::to_string(i + 1), cnum(r.values[i], digits), num(r.min_gaps[i], digits)});
      } else {
        rows.push_back({std::to_string(i + 1), num(r.values[i].real(), digits),
                        num(r.values[i].imag(), digits), num(r.min_gaps[i], digits)});
      }
    }
    if (table) {
      std::cout << "count=" << r.values.size() << " expected=" << A.rows() * (A.rows() - 1)
                << " max_zeta_true=" << num(g.max_zeta_true, 3)
                << " min_zeta_nontrue=" << num(g.min_zeta_nontrue, 3) << '\n';
      print_table(std::cout, {"k", "lambda", "min_gap"}, rows);
    } else {
      print_csv(std::cout, {"k", "lambda_re", "lambda_im", "min_gap"}, rows);
    }
  }
  if (r.degenerate) {
    std::cerr << "warning: expected " << A.rows() * (A.rows() - 1)
              << " double points with small eigenvalue gaps; check min_gap\n";
  }
  return 0;
}

// intersect -------------------------------------------------------------

int cmd_intersect(const Config& c) {
  const Pencil p = read_pencil(c);
  const SolveOptions opts = solve_options(c);
  Rng rng(c.seed);
  const auto r = solve_by_intersection(p, opts, rng);
  if (c.format == Format::Json) {
    json j;
    j["k"] = r.k;
    j["tol"] = r.tol;
    j["infinite_matches"] = r.infinite_matches;
    j["finite"] = json::array();
    for (const auto& m : r.finite) j["finite"].push_back({{"lambda", json_cplx(m.value)}, {"distance", m.distance}});
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  const bool table = c.format == Format::Table;
  const int digits = table ? 6 : 17;
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < r.finite.size(); ++i) {
    const auto& m = r.finite[i];
    if (table) {
      rows.push_back({std::to_string(i + 1), cnum(m.value, digits), num(m.distance, digits)});
    } else {
      rows.push_back({std::to_string(i + 1), num(m.value.real(), digits), num(m.value.imag(), digits),
                      num(m.distance, digits)});
    }
  }
  if (table) {
    std::cout << "k=" << r.k << " matches=" << r.finite.size() << " infinite_matches=" << r.infinite_matches
              << '\n';
    print_table(std::cout, {"k", "lambda", "distance"}, rows);
  } else {
    print_csv(std::cout, {"k", "lambda_re", "lambda_im", "distance"}, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  if (const char* env = std::getenv("SINGPENCIL_SEED")) {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      std::cerr << "error: SINGPENCIL_SEED must be a nonnegative integer, got '" << env << "'\n";
      return 2;
    }
  }

  CLI::App app{"Eigenvalues of singular matrix pencils by rank-completing perturbations"};
  app.require_subcommand(1);
  const std::map<std::string, Format> formats{
      {"table", Format::Table}, {"csv", Format::Csv}, {"json", Format::Json}};

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed (default 0 or $SINGPENCIL_SEED)");
    sub->add_option("--format", cfg.format, "Output format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  };
  auto solver_flags = [&](CLI::App* sub) {
    common(sub);
    sub->add_option("--tau", cfg.tau, "Perturbation size")->check(CLI::PositiveNumber);
    sub->add_option("--delta1", cfg.delta1, "Orthogonality threshold")->check(CLI::PositiveNumber);
    sub->add_option("--delta2", cfg.delta2, "|s| threshold for infinite eigenvalues")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", cfg.tol, "Rank tolerance (default max(m,n) eps sigma_max)")->check(CLI::PositiveNumber);
    sub->add_option("--retries", cfg.retries, "Maximum re-randomizations after a collision")
        ->check(CLI::NonNegativeNumber);
  };
  auto pencil_files = [&](CLI::App* sub) {
    sub->add_option("A", cfg.file_a, "Matrix Market file for A")->required();
    sub->add_option("B", cfg.file_b, "Matrix Market file for B")->required();
  };

  auto* solve_cmd = app.add_subcommand("solve", "Classified spectrum of a perturbed singular pencil");
  pencil_files(solve_cmd);
  solver_flags(solve_cmd);

  auto* nrank_cmd = app.add_subcommand("nrank", "Normal rank of A - lambda B");
  pencil_files(nrank_cmd);
  common(nrank_cmd);
  nrank_cmd->add_option("--tol", cfg.tol, "Rank tolerance")->check(CLI::PositiveNumber);

  auto* gen_cmd = app.add_subcommand("gen", "Build a pencil from a KCF spec (JSON)");
  gen_cmd->add_option("spec", cfg.spec_path, "KCF spec file")->required();
  gen_cmd->add_option("--out", cfg.out_prefix, "Output prefix for <prefix>.A.mtx, .B.mtx, .truth.json");
  common(gen_cmd);

  auto* tp_cmd = app.add_subcommand("twoparam", "Two-parameter eigenvalue problem from a JSON manifest");
  tp_cmd->add_option("manifest", cfg.manifest_path, "JSON with A1 B1 C1 A2 B2 C2 .mtx paths")->required();
  solver_flags(tp_cmd);
  tp_cmd->add_option("--delta", cfg.delta, "Maximal mu discrepancy")->check(CLI::PositiveNumber);
  tp_cmd->add_flag("--unique-lambda", cfg.unique_lambda, "Keep only the closest mu pair per lambda");

  auto* de_cmd = app.add_subcommand("doubleeig", "Values lambda where A + lambda B has a double eigenvalue");
  pencil_files(de_cmd);
  solver_flags(de_cmd);

  auto* is_cmd = app.add_subcommand("intersect", "Intersection of two perturbed spectra (baseline)");
  pencil_files(is_cmd);
  solver_flags(is_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*solve_cmd) return cmd_solve(cfg);
    if (*nrank_cmd) return cmd_nrank(cfg);
    if (*gen_cmd) return cmd_gen(cfg);
    if (*tp_cmd) return cmd_twoparam(cfg);
    if (*de_cmd) return cmd_doubleeig(cfg);
    if (*is_cmd) return cmd_intersect(cfg);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
