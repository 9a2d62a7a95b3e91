#include "uts/serialize.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "uts/error.hpp"

namespace uts {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

}  // namespace

const json& require_field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, "missing field '" + key + "'");
  return *it;
}

const json* find_field(const json& j, const std::string& key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string json_path(const std::string& where, const std::string& key) { return where + "." + key; }
std::string json_path(const std::string& where, std::size_t idx) { return where + "[" + std::to_string(idx) + "]"; }

std::int64_t read_int(const json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (std::floor(x) == x && std::abs(x) < 9e15) return static_cast<std::int64_t>(x);
  }
  fail(where, "expected an integer");
}

std::uint64_t read_uint(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  const std::int64_t v = read_int(j, where);
  if (v < 0) fail(where, "expected a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

std::string read_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

bool read_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) fail(where, "expected true or false");
  return j.get<bool>();
}

const json& read_array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

namespace {

std::int64_t int_field(const json& j, const std::string& key, const std::string& where) {
  return read_int(require_field(j, key, where), json_path(where, key));
}
std::uint64_t uint_field(const json& j, const std::string& key, const std::string& where) {
  return read_uint(require_field(j, key, where), json_path(where, key));
}
double num_field(const json& j, const std::string& key, const std::string& where) {
  return number_from_json(require_field(j, key, where), json_path(where, key));
}
std::string str_field(const json& j, const std::string& key, const std::string& where) {
  return read_string(require_field(j, key, where), json_path(where, key));
}

json complex_list(const std::vector<cplx>& v) {
  json out = json::array();
  for (cplx z : v) out.push_back(to_json(z));
  return out;
}

std::vector<cplx> complex_list_from(const json& j, const std::string& where) {
  std::vector<cplx> out;
  for (std::size_t i = 0; i < read_array(j, where).size(); ++i) out.push_back(complex_from_json(j[i], json_path(where, i)));
  return out;
}

json by_op_json(const std::vector<std::pair<DiffOp, double>>& v) {
  json out = json::array();
  for (const auto& [op, val] : v) out.push_back({{"op", to_json(op)}, {"value", number_to_json(val)}});
  return out;
}

std::vector<std::pair<DiffOp, double>> by_op_from(const json& j, const std::string& where) {
  std::vector<std::pair<DiffOp, double>> out;
  for (std::size_t i = 0; i < read_array(j, where).size(); ++i) {
    const std::string w = json_path(where, i);
    out.emplace_back(diffop_from_json(require_field(j[i], "op", w), json_path(w, "op")), num_field(j[i], "value", w));
  }
  return out;
}

json sweep_json(const std::vector<SweepEntry>& v) {
  json out = json::array();
  for (const auto& e : v)
    out.push_back({{"degree_cap", e.degree_cap},
                   {"achieved_error", number_to_json(e.achieved_error)},
                   {"condition_estimate", number_to_json(e.condition_estimate)}});
  return out;
}

std::vector<SweepEntry> sweep_from(const json& j, const std::string& where) {
  std::vector<SweepEntry> out;
  for (std::size_t i = 0; i < read_array(j, where).size(); ++i) {
    const std::string w = json_path(where, i);
    out.push_back({static_cast<int>(int_field(j[i], "degree_cap", w)), num_field(j[i], "achieved_error", w),
                   num_field(j[i], "condition_estimate", w)});
  }
  return out;
}

double positive(double x, const std::string& where, const std::string& what) {
  if (!(x > 0.0) || !std::isfinite(x)) fail(where, what + " must be a positive finite number");
  return x;
}

}  // namespace

json to_json(const GridSpec& g) {
  return {{"points_per_curve", g.points_per_curve},
          {"center_boundary_samples", g.center_boundary_samples},
          {"max_points", g.max_points}};
}

GridSpec grid_spec_from_json(const json& j, const std::string& where) {
  GridSpec g;
  if (!j.is_object()) fail(where, "expected an object");
  if (auto* v = find_field(j, "points_per_curve")) g.points_per_curve = read_uint(*v, json_path(where, "points_per_curve"));
  if (auto* v = find_field(j, "center_boundary_samples"))
    g.center_boundary_samples = read_uint(*v, json_path(where, "center_boundary_samples"));
  if (auto* v = find_field(j, "max_points")) g.max_points = read_uint(*v, json_path(where, "max_points"));
  if (g.points_per_curve == 0) fail(json_path(where, "points_per_curve"), "must be positive");
  if (g.max_points == 0) fail(json_path(where, "max_points"), "must be positive");
  return g;
}


json to_json(cplx z) { return json::array({number_to_json(z.real()), number_to_json(z.imag())}); }

cplx complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) fail(where, "expected a complex number [re, im]");
  return {number_from_json(j[0], json_path(where, 0)), number_from_json(j[1], json_path(where, 1))};
}

json number_to_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

double number_from_json(const json& j, const std::string& where) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

json to_json(const MultiIndex& m) { return json(std::vector<int>(m.entries().begin(), m.entries().end())); }

MultiIndex multiindex_from_json(const json& j, const std::string& where) {
  std::vector<int> v;
  for (std::size_t i = 0; i < read_array(j, where).size(); ++i) {
    const std::int64_t e = read_int(j[i], json_path(where, i));
    if (e < 0 || e > std::numeric_limits<int>::max()) fail(json_path(where, i), "exponent out of range");
    v.push_back(static_cast<int>(e));
  }
  return MultiIndex(std::move(v));
}

json to_json(const DiffOp& op) { return to_json(op.exponents); }
DiffOp diffop_from_json(const json& j, const std::string& where) { return DiffOp{multiindex_from_json(j, where)}; }

json to_json(const Poly& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.terms())
    terms.push_back({{"w_exp", to_json(e.slice(0, p.r()))},
                     {"z_exp", to_json(e.slice(p.r(), p.d()))},
                     {"re", number_to_json(c.real())},
                     {"im", number_to_json(c.imag())}});
  return {{"r", p.r()}, {"d", p.d()}, {"terms", terms}};
}

Poly poly_from_json(const json& j, const std::string& where, std::optional<std::size_t> r,
                    std::optional<std::size_t> d) {
  const json* terms = nullptr;
  std::string terms_where = where;
  if (j.is_array()) {
    if (!r || !d) fail(where, "a bare term list needs known r and d");
    terms = &j;
  } else {
    const std::size_t jr = uint_field(j, "r", where);
    const std::size_t jd = uint_field(j, "d", where);
    if (r && *r != jr) fail(json_path(where, "r"), "expected r = " + std::to_string(*r));
    if (d && *d != jd) fail(json_path(where, "d"), "expected d = " + std::to_string(*d));
    r = jr;
    d = jd;
    terms = &require_field(j, "terms", where);
    terms_where = json_path(where, "terms");
  }
  Poly p(*r, *d);
  for (std::size_t i = 0; i < read_array(*terms, terms_where).size(); ++i) {
    const json& t = (*terms)[i];
    const std::string w = json_path(terms_where, i);
    const MultiIndex we = t.contains("w_exp") ? multiindex_from_json(t["w_exp"], json_path(w, "w_exp")) : MultiIndex(0);
    const MultiIndex ze = multiindex_from_json(require_field(t, "z_exp", w), json_path(w, "z_exp"));
    if (we.size() != *r) fail(json_path(w, "w_exp"), "expected " + std::to_string(*r) + " entries");
    if (ze.size() != *d) fail(json_path(w, "z_exp"), "expected " + std::to_string(*d) + " entries");
    const double re = t.contains("re") ? num_field(t, "re", w) : 0.0;
    const double im = t.contains("im") ? num_field(t, "im", w) : 0.0;
    if (!std::isfinite(re) || !std::isfinite(im)) fail(w, "coefficient must be finite");
    p.add_term(we.concat(ze), {re, im});
  }
  return p;
}

json enumeration_to_json(const Enumeration& e) {
  if (e.scheme() != Scheme::ExplicitTable) return e.tag();
  json table = json::array();
  for (const auto& m : e.table()) table.push_back(to_json(m));
  return {{"tag", e.tag()}, {"table", table}, {"extend_graded", e.extends_graded()}};
}

Enumeration enumeration_from_json(const json& j, std::size_t dim, const std::string& where) {
  try {
    if (j.is_string()) return Enumeration::from_tag(j.get<std::string>(), dim);
    const std::string tag = str_field(j, "tag", where);
    if (tag != "explicit-table") return Enumeration::from_tag(tag, dim);
    const json& t = require_field(j, "table", where);
    std::vector<MultiIndex> table;
    for (std::size_t i = 0; i < read_array(t, json_path(where, "table")).size(); ++i) {
      table.push_back(multiindex_from_json(t[i], json_path(json_path(where, "table"), i)));
      if (table.back().size() != dim) fail(json_path(json_path(where, "table"), i), "expected " + std::to_string(dim) + " entries");
    }
    const bool extend = j.contains("extend_graded") && read_bool(j["extend_graded"], json_path(where, "extend_graded"));
    return Enumeration::explicit_table(std::move(table), extend);
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

json to_json(const PlanarCompact& k) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return {{"type", "disk"}, {"center", to_json(s.center)}, {"radius", s.radius}};
        } else if constexpr (std::is_same_v<T, Rect>) {
          return {{"type", "rect"}, {"lo", to_json(s.lo)}, {"hi", to_json(s.hi)}};
        } else if constexpr (std::is_same_v<T, Segment>) {
          return {{"type", "segment"}, {"a", to_json(s.a)}, {"b", to_json(s.b)}};
        } else if constexpr (std::is_same_v<T, Arc>) {
          return {{"type", "arc"}, {"center", to_json(s.center)}, {"radius", s.radius},
                  {"theta0", s.theta0}, {"theta1", s.theta1}};
        } else if constexpr (std::is_same_v<T, SlitAnnulus>) {
          return {{"type", "slit-annulus"}, {"center", to_json(s.center)}, {"inner", s.inner},
                  {"outer", s.outer}, {"half_angle", s.half_angle}, {"direction", s.direction}};
        } else if constexpr (std::is_same_v<T, Clipped>) {
          const json base = std::visit(
              [](const auto& b) -> json {
                if constexpr (std::is_same_v<std::decay_t<decltype(b)>, Disk>)
                  return to_json(PlanarCompact::disk(b.center, b.radius));
                else
                  return to_json(PlanarCompact::rect(b.lo, b.hi));
              },
              s.base);
          return {{"type", "clipped"}, {"base", base}, {"radius", s.radius}};
        } else {
          json parts = json::array();
          for (const auto& p : s.parts) parts.push_back(to_json(p));
          return {{"type", "union"}, {"parts", parts}};
        }
      },
      k.shape());
}

PlanarCompact planar_from_json(const json& j, const std::string& where) {
  const std::string type = str_field(j, "type", where);
  try {
    if (type == "disk")
      return PlanarCompact::disk(complex_from_json(require_field(j, "center", where), json_path(where, "center")),
                                 positive(num_field(j, "radius", where), json_path(where, "radius"), "radius"));
    if (type == "rect") {
      const cplx lo = complex_from_json(require_field(j, "lo", where), json_path(where, "lo"));
      const cplx hi = complex_from_json(require_field(j, "hi", where), json_path(where, "hi"));
      if (!(lo.real() <= hi.real() && lo.imag() <= hi.imag())) fail(where, "rect needs lo <= hi in both parts");
      return PlanarCompact::rect(lo, hi);
    }
    if (type == "segment")
      return PlanarCompact::segment(complex_from_json(require_field(j, "a", where), json_path(where, "a")),
                                    complex_from_json(require_field(j, "b", where), json_path(where, "b")));
    if (type == "arc")
      return PlanarCompact::arc(complex_from_json(require_field(j, "center", where), json_path(where, "center")),
                                positive(num_field(j, "radius", where), json_path(where, "radius"), "radius"),
                                num_field(j, "theta0", where), num_field(j, "theta1", where));
    if (type == "slit-annulus")
      return PlanarCompact::slit_annulus(complex_from_json(require_field(j, "center", where), json_path(where, "center")),
                                         num_field(j, "inner", where), num_field(j, "outer", where),
                                         num_field(j, "half_angle", where), num_field(j, "direction", where));
    if (type == "clipped") {
      const PlanarCompact base = planar_from_json(require_field(j, "base", where), json_path(where, "base"));
      const double radius = positive(num_field(j, "radius", where), json_path(where, "radius"), "radius");
      if (const auto* d = std::get_if<Disk>(&base.shape())) return PlanarCompact::clipped(*d, radius);
      if (const auto* r = std::get_if<Rect>(&base.shape())) return PlanarCompact::clipped(*r, radius);
      fail(json_path(where, "base"), "clipped base must be a disk or a rect");
    }
    if (type == "union") {
      const json& parts = require_field(j, "parts", where);
      std::vector<PlanarCompact> out;
      for (std::size_t i = 0; i < read_array(parts, json_path(where, "parts")).size(); ++i)
        out.push_back(planar_from_json(parts[i], json_path(json_path(where, "parts"), i)));
      return PlanarCompact::make_union(std::move(out));
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
  fail(json_path(where, "type"), "unknown compact type '" + type + "'");
}

json to_json(const ProductCompact& k) {
  json factors = json::array();
  for (const auto& f : k.factors) factors.push_back(to_json(f));
  return {{"type", "product"}, {"factors", factors}};
}

ProductCompact product_from_json(const json& j, const std::string& where) {
  const json* list = &j;
  std::string lw = where;
  if (j.is_object()) {
    if (str_field(j, "type", where) != "product") {
      return ProductCompact{{planar_from_json(j, where)}};
    }
    list = &require_field(j, "factors", where);
    lw = json_path(where, "factors");
  }
  ProductCompact out;
  for (std::size_t i = 0; i < read_array(*list, lw).size(); ++i) out.factors.push_back(planar_from_json((*list)[i], json_path(lw, i)));
  return out;
}

json to_json(const Domain& dom) {
  return std::visit(
      [](const auto& s) -> json {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, OpenDisk>)
          return {{"type", "open-disk"}, {"center", to_json(s.center)}, {"radius", s.radius}};
        else
          return {{"type", "open-rect"}, {"lo", to_json(s.lo)}, {"hi", to_json(s.hi)}};
      },
      dom);
}

Domain domain_from_json(const json& j, const std::string& where) {
  const std::string type = str_field(j, "type", where);
  if (type == "open-disk" || type == "disk")
    return OpenDisk{complex_from_json(require_field(j, "center", where), json_path(where, "center")),
                    positive(num_field(j, "radius", where), json_path(where, "radius"), "radius")};
  if (type == "open-rect" || type == "rect") {
    const cplx lo = complex_from_json(require_field(j, "lo", where), json_path(where, "lo"));
    const cplx hi = complex_from_json(require_field(j, "hi", where), json_path(where, "hi"));
    if (!(lo.real() < hi.real() && lo.imag() < hi.imag())) fail(where, "open rect needs lo < hi in both parts");
    return OpenRect{lo, hi};
  }
  fail(json_path(where, "type"), "unknown domain type '" + type + "' (expected open-disk or open-rect)");
}

json to_json(const CoefficientStream& s) {
  json blocks = json::array();
  for (const auto& b : s.blocks()) {
    json coefs = json::array();
    for (const auto& [k, p] : b.coefficients) coefs.push_back({{"k", k}, {"poly", to_json(p)}});
    blocks.push_back({{"stage", b.stage},
                      {"first_index", b.first_index},
                      {"last_index", b.last_index},
                      {"coefficients", coefs}});
  }
  return {{"enumeration", enumeration_to_json(s.enumeration())},
          {"center", complex_list(s.center())},
          {"r", s.r()},
          {"d", s.d()},
          {"blocks", blocks}};
}

CoefficientStream stream_from_json(const json& j, const std::string& where) {
  const std::size_t r = uint_field(j, "r", where);
  const std::vector<cplx> center = complex_list_from(require_field(j, "center", where), json_path(where, "center"));
  if (j.contains("d") && uint_field(j, "d", where) != center.size())
    fail(json_path(where, "d"), "d disagrees with the center length");
  if (center.empty()) fail(json_path(where, "center"), "center needs at least one coordinate");
  const std::size_t d = center.size();
  CoefficientStream stream(enumeration_from_json(require_field(j, "enumeration", where), d, json_path(where, "enumeration")),
                           center, r);
  const json& blocks = require_field(j, "blocks", where);
  for (std::size_t i = 0; i < read_array(blocks, json_path(where, "blocks")).size(); ++i) {
    const std::string w = json_path(json_path(where, "blocks"), i);
    const json& b = blocks[i];
    StreamBlock block;
    block.stage = static_cast<int>(int_field(b, "stage", w));
    block.first_index = uint_field(b, "first_index", w);
    block.last_index = uint_field(b, "last_index", w);
    const json& coefs = require_field(b, "coefficients", w);
    for (std::size_t c = 0; c < read_array(coefs, json_path(w, "coefficients")).size(); ++c) {
      const std::string cw = json_path(json_path(w, "coefficients"), c);
      const std::uint64_t k = uint_field(coefs[c], "k", cw);
      Poly p = poly_from_json(require_field(coefs[c], "poly", cw), json_path(cw, "poly"), r, 0);
      if (!block.coefficients.emplace(k, std::move(p)).second) fail(cw, "duplicate coefficient index");
    }
    try {
      stream.append_block(std::move(block));
    } catch (const Error& e) {
      fail(w, e.what());
    }
  }
  return stream;
}

json to_json(const FitReport& rep) {
  return {{"basis", rep.basis},
          {"success", rep.success},
          {"degree_cap", rep.degree_cap},
          {"rows", rep.rows},
          {"columns", rep.columns},
          {"numerical_rank", rep.numerical_rank},
          {"condition_estimate", number_to_json(rep.condition_estimate)},
          {"achieved_errors", by_op_json(rep.achieved_errors)},
          {"fitting_errors", by_op_json(rep.fitting_errors)},
          {"residual_history", sweep_json(rep.residual_history)},
          {"basis_center", complex_list(rep.basis_center)},
          {"fitted_centered", to_json(rep.fitted_centered)}};
}

json to_json(const PredicateResult& res) {
  return {{"pass", res.pass},
          {"achieved", number_to_json(res.achieved)},
          {"threshold", number_to_json(res.threshold)},
          {"by_op", by_op_json(res.by_op)},
          {"grid_points", res.grid_points},
          {"center_count", res.center_count},
          {"grid_density", number_to_json(res.grid_density)},
          {"description", res.description}};
}

json to_json(const PredicateSpec& spec) {
  json out = {{"tau", spec.tau}, {"p", spec.p}, {"m", spec.m}, {"j", spec.j},  {"s", spec.s},
              {"n", spec.n},     {"variant", to_string(spec.variant)},           {"l", spec.l}};
  out["fixed_center"] = spec.fixed_center ? complex_list(*spec.fixed_center) : json(nullptr);
  return out;
}

PredicateSpec predicate_spec_from_json(const json& j, const std::string& where) {
  PredicateSpec spec;
  auto small = [&](const char* key, int& target) {
    if (auto* v = find_field(j, key)) {
      const std::int64_t x = read_int(*v, json_path(where, key));
      if (x < 1 || x > 1'000'000) fail(json_path(where, key), "must be an integer in [1, 1000000]");
      target = static_cast<int>(x);
    }
  };
  if (!j.is_object()) fail(where, "expected an object");
  small("tau", spec.tau);
  small("p", spec.p);
  small("m", spec.m);
  small("j", spec.j);
  small("s", spec.s);
  small("l", spec.l);
  spec.n = uint_field(j, "n", where);
  if (auto* v = find_field(j, "variant")) {
    try {
      spec.variant = variant_from_string(read_string(*v, json_path(where, "variant")));
    } catch (const SchemaError& e) {
      fail(json_path(where, "variant"), e.what());
    }
  }
  if (auto* v = find_field(j, "fixed_center")) spec.fixed_center = complex_list_from(*v, json_path(where, "fixed_center"));
  return spec;
}

json to_json(const StageRecord& rec) {
  return {{"stage", rec.stage},
          {"label", rec.label},
          {"variant", to_string(rec.variant)},
          {"derivative_order", rec.derivative_order},
          {"tolerance", number_to_json(rec.tolerance)},
          {"outer", to_json(rec.outer)},
          {"inner", to_json(rec.inner)},
          {"w_block", to_json(rec.w_block)},
          {"target", to_json(rec.target)},
          {"lambda", rec.lambda},
          {"block_first", rec.block_first},
          {"block_last", rec.block_last},
          {"i0", rec.i0},
          {"premultiplier_exponent", rec.premultiplier_exponent},
          {"e_side_error", number_to_json(rec.e_side_error)},
          {"f_side_error", number_to_json(rec.f_side_error)},
          {"e_side_by_op", by_op_json(rec.e_side_by_op)},
          {"f_side_by_op", by_op_json(rec.f_side_by_op)},
          {"inner_change", number_to_json(rec.inner_change)},
          {"e_grid_points", rec.e_grid_points},
          {"f_grid_points", rec.f_grid_points},
          {"center_count", rec.center_count},
          {"grid_density", number_to_json(rec.grid_density)},
          {"max_total_degree", rec.max_total_degree},
          {"fit_degree_cap", rec.fit_degree_cap},
          {"fit_condition", number_to_json(rec.fit_condition)},
          {"fit_error", number_to_json(rec.fit_error)},
          {"fit_basis", rec.fit_basis},
          {"residual_history", sweep_json(rec.residual_history)},
          {"passed", rec.passed},
          {"failure", rec.failure}};
}

StageRecord stage_record_from_json(const json& j, std::size_t r, std::size_t d, const std::string& where) {
  StageRecord rec;
  rec.stage = static_cast<int>(int_field(j, "stage", where));
  if (auto* v = find_field(j, "label")) rec.label = read_string(*v, json_path(where, "label"));
  try {
    rec.variant = variant_from_string(str_field(j, "variant", where));
  } catch (const SchemaError& e) {
    fail(json_path(where, "variant"), e.what());
  }
  rec.derivative_order = static_cast<int>(int_field(j, "derivative_order", where));
  rec.tolerance = num_field(j, "tolerance", where);
  rec.outer = product_from_json(require_field(j, "outer", where), json_path(where, "outer"));
  rec.inner = product_from_json(require_field(j, "inner", where), json_path(where, "inner"));
  rec.w_block = product_from_json(require_field(j, "w_block", where), json_path(where, "w_block"));
  if (rec.outer.dim() != d || rec.inner.dim() != d) fail(where, "outer and inner need d factors");
  if (rec.w_block.dim() != r) fail(json_path(where, "w_block"), "needs r factors");
  rec.target = poly_from_json(require_field(j, "target", where), json_path(where, "target"), r, d);
  rec.lambda = uint_field(j, "lambda", where);
  rec.block_first = uint_field(j, "block_first", where);
  rec.block_last = uint_field(j, "block_last", where);
  rec.i0 = uint_field(j, "i0", where);
  rec.premultiplier_exponent = static_cast<int>(int_field(j, "premultiplier_exponent", where));
  rec.e_side_error = num_field(j, "e_side_error", where);
  rec.f_side_error = num_field(j, "f_side_error", where);
  rec.e_side_by_op = by_op_from(require_field(j, "e_side_by_op", where), json_path(where, "e_side_by_op"));
  rec.f_side_by_op = by_op_from(require_field(j, "f_side_by_op", where), json_path(where, "f_side_by_op"));
  if (auto* v = find_field(j, "inner_change")) rec.inner_change = number_from_json(*v, json_path(where, "inner_change"));
  if (auto* v = find_field(j, "e_grid_points")) rec.e_grid_points = read_uint(*v, json_path(where, "e_grid_points"));
  if (auto* v = find_field(j, "f_grid_points")) rec.f_grid_points = read_uint(*v, json_path(where, "f_grid_points"));
  if (auto* v = find_field(j, "center_count")) rec.center_count = read_uint(*v, json_path(where, "center_count"));
  if (auto* v = find_field(j, "grid_density")) rec.grid_density = number_from_json(*v, json_path(where, "grid_density"));
  if (auto* v = find_field(j, "max_total_degree"))
    rec.max_total_degree = static_cast<int>(read_int(*v, json_path(where, "max_total_degree")));
  if (auto* v = find_field(j, "fit_degree_cap"))
    rec.fit_degree_cap = static_cast<int>(read_int(*v, json_path(where, "fit_degree_cap")));
  if (auto* v = find_field(j, "fit_condition")) rec.fit_condition = number_from_json(*v, json_path(where, "fit_condition"));
  if (auto* v = find_field(j, "fit_error")) rec.fit_error = number_from_json(*v, json_path(where, "fit_error"));
  if (auto* v = find_field(j, "fit_basis")) rec.fit_basis = read_string(*v, json_path(where, "fit_basis"));
  if (auto* v = find_field(j, "residual_history")) rec.residual_history = sweep_from(*v, json_path(where, "residual_history"));
  rec.passed = read_bool(require_field(j, "passed", where), json_path(where, "passed"));
  if (auto* v = find_field(j, "failure")) rec.failure = read_string(*v, json_path(where, "failure"));
  return rec;
}

json to_json(const Certificate& cert) {
  json stages = json::array();
  for (const auto& s : cert.stages) stages.push_back(to_json(s));
  return {{"enumeration", cert.enumeration_tag},
          {"mu", cert.mu_tag},
          {"r", cert.r},
          {"d", cert.d},
          {"center", complex_list(cert.center)},
          {"center_mode", cert.center_mode},
          {"grids", to_json(cert.grids)},
          {"outer_family", cert.outer_family},
          {"stages", stages},
          {"passed", cert.passed}};
}

Certificate certificate_from_json(const json& body, const std::string& where) {
  Certificate cert;
  cert.enumeration_tag = str_field(body, "enumeration", where);
  cert.mu_tag = str_field(body, "mu", where);
  try {
    IndexSet::from_tag(cert.mu_tag);
  } catch (const Error& e) {
    fail(json_path(where, "mu"), e.what());
  }
  cert.r = uint_field(body, "r", where);
  cert.d = uint_field(body, "d", where);
  cert.center = complex_list_from(require_field(body, "center", where), json_path(where, "center"));
  if (cert.center.size() != cert.d) fail(json_path(where, "center"), "expected d coordinates");
  cert.center_mode = str_field(body, "center_mode", where);
  if (cert.center_mode != "fixed" && cert.center_mode != "varying")
    fail(json_path(where, "center_mode"), "expected 'fixed' or 'varying'");
  cert.grids = grid_spec_from_json(require_field(body, "grids", where), json_path(where, "grids"));
  if (auto* v = find_field(body, "outer_family")) cert.outer_family = read_string(*v, json_path(where, "outer_family"));
  const json& stages = require_field(body, "stages", where);
  for (std::size_t i = 0; i < read_array(stages, json_path(where, "stages")).size(); ++i)
    cert.stages.push_back(stage_record_from_json(stages[i], cert.r, cert.d, json_path(json_path(where, "stages"), i)));
  cert.passed = read_bool(require_field(body, "passed", where), json_path(where, "passed"));
  return cert;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

std::string body_digest(const json& body) { return sha256_hex(body.dump()); }

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SchemaError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot write file");
  out << text;
  if (!out) throw Error(path + ": write failed");
}

}  // namespace uts
