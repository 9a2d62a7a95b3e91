#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uts/cli.hpp"
#include "uts/error.hpp"
#include "uts/mergelyan.hpp"
#include "uts/serialize.hpp"
#include "uts/universal.hpp"
#include "uts/verify.hpp"

namespace py = pybind11;
using namespace uts;

namespace {

json parse(const std::string& text, const char* what) { return parse_json_text(text, what); }

std::string dump(const json& j) { return j.dump(); }

DomainProduct domains(const json& j, const std::string& where) {
  DomainProduct out;
  for (std::size_t i = 0; i < read_array(j, where).size(); ++i)
    out.factors.push_back(domain_from_json(j[i], json_path(where, i)));
  return out;
}

PredicateContext context_from(const json& j, std::size_t r, std::size_t d) {
  PredicateContext ctx;
  if (const json* g = find_field(j, "G")) ctx.g = domains(*g, "$.G");
  if (ctx.g.dim() != r) throw SchemaError("$.G: expected " + std::to_string(r) + " domains");
  ctx.omega = domains(require_field(j, "Omega", "$"), "$.Omega");
  if (ctx.omega.dim() != d) throw SchemaError("$.Omega: expected " + std::to_string(d) + " domains");
  ctx.enumeration =
      find_field(j, "enumeration") ? enumeration_from_json(j["enumeration"], d, "$.enumeration") : Enumeration::graded_lex(d);
  if (const json* g = find_field(j, "grids")) ctx.grids = grid_spec_from_json(*g, "$.grids");
  return ctx;
}

std::string predicate(const std::string& kind, const std::string& candidate, const std::string& spec_text,
                      const std::string& context_text) {
  const Poly f = poly_from_json(parse(candidate, "candidate"));
  const PredicateSpec spec = predicate_spec_from_json(parse(spec_text, "spec"));
  const PredicateContext ctx = context_from(parse(context_text, "context"), f.r(), f.d());
  const PredicateResult res =
      kind == "E" ? check_E(f, spec, FjCatalog(f.r(), f.d()), ctx) : check_F(f, spec, ctx);
  return dump(to_json(res));
}

std::string construct(const std::string& scenario_text, std::optional<std::size_t> density) {
  ScenarioOverrides ov;
  ov.density = density;
  const Scenario sc = load_scenario(parse(scenario_text, "scenario"), ov);
  validate_scenario_geometry(sc);
  const ConstructionResult res = run_construction(plan_stages(sc.schedule, sc.settings));
  return dump(json{{"stream", to_json(res.stream)}, {"certificate", to_json(res.certificate)},
                   {"stage_seconds", res.stage_seconds}});
}

py::tuple verify(const std::string& stream_text, const std::string& certificate_text) {
  const CoefficientStream stream = stream_from_json(parse(stream_text, "stream"));
  json body = parse(certificate_text, "certificate");
  if (const json* b = find_field(body, "body")) body = *b;
  const VerificationReport rep = verify_certificate(stream, certificate_from_json(body));
  return py::make_tuple(rep.ok, rep.problems);
}

std::string fit_two_piece(const std::string& g_text, const std::string& f_text, const std::string& inner_text,
                          const std::string& outer_text, int degree, std::vector<int> sweep, double tolerance) {
  const Poly g = poly_from_json(parse(g_text, "g"));
  const Poly f = poly_from_json(parse(f_text, "f"));
  ApproxTask task = glue_target(g, f, product_from_json(parse(inner_text, "inner")),
                                product_from_json(parse(outer_text, "outer")));
  task.degree_budget = uniform_budget(g.r(), g.d(), degree, degree);
  task.degree_sweep = std::move(sweep);
  task.tolerance = tolerance;
  const FitReport rep = fit(task);
  json out = to_json(rep);
  out["fitted"] = to_json(rep.fitted());
  return dump(out);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compiled core of the universal Taylor series laboratory (JSON in, JSON out).";

  static py::exception<Error> base(m, "UtsError");
  static py::exception<SchemaError> schema(m, "SchemaError", base.ptr());
  static py::exception<DomainError> domain(m, "DomainError", base.ptr());
  static py::exception<DimensionError> dimension(m, "DimensionError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const SchemaError& e) {
      py::set_error(schema, e.what());
    } catch (const DomainError& e) {
      py::set_error(domain, e.what());
    } catch (const DimensionError& e) {
      py::set_error(dimension, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  m.def("unrank", [](const std::string& tag, std::size_t dim, std::uint64_t k) {
    const MultiIndex idx = Enumeration::from_tag(tag, dim).unrank(k);
    return std::vector<int>(idx.entries().begin(), idx.entries().end());
  });
  m.def("rank", [](const std::string& tag, std::vector<int> index) {
    const std::size_t dim = index.size();
    return Enumeration::from_tag(tag, dim).rank(MultiIndex(std::move(index)));
  });
  m.def("capture_index", [](const std::string& tag, std::vector<int> degrees) {
    const std::size_t dim = degrees.size();
    return uts::capture_index(Enumeration::from_tag(tag, dim), MultiIndex(std::move(degrees)));
  });
  m.def("evaluate", [](const std::string& poly, std::vector<cplx> w, std::vector<cplx> z) {
    return poly_from_json(parse(poly, "poly")).eval(w, z);
  });
  m.def("shift_center", [](const std::string& poly, std::vector<cplx> zeta) {
    return dump(to_json(uts::shift_center(poly_from_json(parse(poly, "poly")), zeta)));
  });
  m.def("taylor_coefficient", [](const std::string& poly, std::vector<cplx> w, std::vector<cplx> zeta,
                                 std::vector<int> m_idx) {
    return gamma(poly_from_json(parse(poly, "poly")), w, zeta, MultiIndex(std::move(m_idx)));
  });
  m.def("partial_sum", [](const std::string& poly, std::vector<cplx> zeta, std::uint64_t n, const std::string& tag) {
    const Poly p = poly_from_json(parse(poly, "poly"));
    return dump(to_json(uts::partial_sum(p, zeta, n, Enumeration::from_tag(tag, p.d())).to_absolute()));
  });
  m.def("catalog_polynomial", [](std::size_t r, std::size_t d, std::uint64_t j) {
    return dump(to_json(FjCatalog(r, d).at(j)));
  });
  m.def("check_predicate", &predicate, py::arg("kind"), py::arg("candidate"), py::arg("spec"), py::arg("context"));
  m.def("fit_two_piece", &fit_two_piece, py::arg("g"), py::arg("f"), py::arg("inner"), py::arg("outer"),
        py::arg("degree"), py::arg("sweep"), py::arg("tolerance"));
  m.def("construct", &construct, py::arg("scenario"), py::arg("density") = py::none());
  m.def("verify", &verify, py::arg("stream"), py::arg("certificate"));
  m.def("builtin_scenarios", [] {
    std::vector<std::pair<std::string, std::string>> out(uts::builtin_scenarios().begin(),
                                                         uts::builtin_scenarios().end());
    return out;
  });
  m.def("sha256_hex", &sha256_hex);
}
