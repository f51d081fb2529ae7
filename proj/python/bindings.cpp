#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "singpencil/errors.hpp"
#include "singpencil/kcf_gen.hpp"
#include "singpencil/mmio.hpp"
#include "singpencil/solver.hpp"
#include "singpencil/two_param.hpp"

namespace py = pybind11;
using namespace singpencil;

namespace {

SolveOptions make_options(double tau, double delta1, double delta2, std::uint64_t seed,
                          std::optional<double> tol, int retries) {
  SolveOptions o;
  o.tau = tau;
  o.delta1 = delta1;
  o.delta2 = delta2;
  o.seed = seed;
  o.rank_tol = tol;
  o.max_retries = retries;
  return o;
}

py::dict record_dict(const EigenRecord& r) {
  py::dict d;
  d["lambda"] = r.lambda.value();
  d["alpha"] = r.lambda.alpha;
  d["beta"] = r.lambda.beta;
  d["s_abs"] = r.s_abs;
  d["vx_norm"] = r.vx_norm;
  d["uy_norm"] = r.uy_norm;
  d["zeta"] = r.zeta;
  d["cls"] = std::string(to_string(r.cls));
  return d;
}

}  // namespace

PYBIND11_MODULE(_singpencil, m) {
  m.doc() = "Eigenvalues of singular matrix pencils by rank-completing perturbations";

  static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  static py::exception<NumericalFailure> numerical_failure(m, "NumericalFailure", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      py::set_error(parse_error, e.what());
    } catch (const NumericalFailure& e) {
      py::set_error(numerical_failure, e.what());
    } catch (const ArgumentError& e) {
      py::set_error(PyExc_ValueError, e.what());
    }
  });

  const double d1 = std::sqrt(kEps), d2 = 1e2 * kEps;

  m.def(
      "solve",
      [](const CMatrix& A, const CMatrix& B, double tau, double delta1, double delta2, std::uint64_t seed,
         std::optional<double> tol, int retries) {
        const auto r = solve(Pencil(A, B), make_options(tau, delta1, delta2, seed, tol, retries));
        py::dict out;
        py::list records;
        for (const auto& e : r.records) records.append(record_dict(e));
        out["records"] = records;
        out["finite_true"] = r.finite_true;
        out["nrank"] = r.nrank_report.nrank;
        out["k"] = r.nrank_report.k;
        out["backscale"] = r.backscale;
        out["retries"] = r.retries;
        out["collision_warning"] = r.collision_warning;
        out["max_zeta_true"] = r.gap_report.max_zeta_true;
        out["min_zeta_nontrue"] = r.gap_report.min_zeta_nontrue;
        return out;
      },
      py::arg("A"), py::arg("B"), py::arg("tau") = 1e-2, py::arg("delta1") = d1, py::arg("delta2") = d2,
      py::arg("seed") = 0, py::arg("tol") = py::none(), py::arg("retries") = 3,
      "Classified spectrum of the rank-completed pencil; finite_true holds the finite eigenvalues.");

  m.def(
      "normal_rank",
      [](const CMatrix& A, const CMatrix& B, std::uint64_t seed, std::optional<double> tol) {
        Rng rng(seed);
        const auto r = normal_rank(Pencil(A, B), rng, tol);
        return py::make_tuple(r.nrank, r.k);
      },
      py::arg("A"), py::arg("B"), py::arg("seed") = 0, py::arg("tol") = py::none(),
      "(nrank, k) of A - lambda B.");

  m.def(
      "generate",
      [](const std::string& spec_json, std::uint64_t seed) {
        const KcfSpec spec = kcf_spec_from_json(spec_json);
        Rng rng(seed);
        GroundTruth t;
        const Pencil p = build(spec, rng, &t);
        py::dict truth;
        truth["finite"] = t.finite;
        truth["infinite"] = t.infinite;
        truth["nrank"] = t.nrank;
        truth["r"] = t.r;
        truth["k"] = t.k;
        truth["M"] = t.M;
        truth["N"] = t.N;
        return py::make_tuple(p.A, p.B, truth);
      },
      py::arg("spec_json"), py::arg("seed") = 0, "Pencil with a prescribed KCF: (A, B, truth).");

  m.def(
      "solve_2ep",
      [](const CMatrix& A1, const CMatrix& B1, const CMatrix& C1, const CMatrix& A2, const CMatrix& B2,
         const CMatrix& C2, double delta, bool unique_lambda, std::uint64_t seed) {
        TwoParamOptions o;
        o.delta = delta;
        o.unique_lambda = unique_lambda;
        Rng rng(seed);
        const auto r = solve_2ep({A1, B1, C1, A2, B2, C2}, o, rng);
        py::list out;
        for (const auto& e : r.pairs) {
          out.append(py::make_tuple(e.lambda, e.mu, e.mu_discrepancy, e.residual1, e.residual2));
        }
        return out;
      },
      py::arg("A1"), py::arg("B1"), py::arg("C1"), py::arg("A2"), py::arg("B2"), py::arg("C2"),
      py::arg("delta") = d1, py::arg("unique_lambda") = false, py::arg("seed") = 0,
      "Eigenvalues (lambda, mu, discrepancy, residual1, residual2) of "
      "(A_i + lambda B_i + mu C_i) x_i = 0.");

  m.def(
      "double_eig",
      [](const CMatrix& A, const CMatrix& B, std::uint64_t seed) {
        Rng rng(seed);
        SolveOptions o;
        o.seed = seed;
        const auto r = double_eig(A, B, o, rng);
        return py::make_tuple(r.values, r.min_gaps, r.degenerate);
      },
      py::arg("A"), py::arg("B"), py::arg("seed") = 0,
      "(values, min_gaps, degenerate): lambda where A + lambda B has a double eigenvalue.");

  m.def(
      "intersect",
      [](const CMatrix& A, const CMatrix& B, std::uint64_t seed) {
        SolveOptions o;
        Rng rng(seed);
        const auto r = solve_by_intersection(Pencil(A, B), o, rng);
        std::vector<cplx> values;
        for (const auto& f : r.finite) values.push_back(f.value);
        return values;
      },
      py::arg("A"), py::arg("B"), py::arg("seed") = 0);

  m.def("read_mtx", &mm::read_file, py::arg("path"));
  m.def("write_mtx", &mm::write_file, py::arg("path"), py::arg("matrix"));
}
