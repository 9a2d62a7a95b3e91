#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "uts/error.hpp"
#include "uts/serialize.hpp"

using namespace uts;

TEST_CASE("polynomials and multi-indices round trip") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const Poly p = oracle::random_poly(rng, t % 3, 1 + t % 2, 5, 6);
    CHECK(poly_from_json(parse_json_text(to_json(p).dump(), "p")) == p);
  }
  CHECK(multiindex_from_json(to_json(MultiIndex{3, 0, 2})) == MultiIndex{3, 0, 2});
  CHECK_THROWS_AS(multiindex_from_json(json::parse("[1, -2]")), SchemaError);
  const json bare = json::parse(R"([{"z_exp": [2], "re": 1.5, "im": 0}])");
  CHECK(poly_from_json(bare, "$", 0, 1) == Poly::monomial(0, 1, MultiIndex{2}, 1.5));
}

TEST_CASE("non-finite numbers become null") {
  CHECK(number_to_json(std::numeric_limits<double>::infinity()).is_null());
  CHECK(std::isinf(number_from_json(json(nullptr))));
  CHECK(number_from_json(number_to_json(0.25)) == 0.25);
  CHECK(complex_from_json(json::parse("[1, 2]")) == cplx(1, 2));
  CHECK(complex_from_json(json(3.0)) == cplx(3, 0));
}

TEST_CASE("compacts, domains and enumerations round trip") {
  const std::vector<PlanarCompact> shapes = {
      PlanarCompact::disk(cplx(1, 2), 0.5),
      PlanarCompact::rect({-1, -1}, {2, 0.5}),
      PlanarCompact::segment(0.0, cplx(1, 1)),
      PlanarCompact::arc(0.0, 1.0, 0.0, 1.0),
      PlanarCompact::slit_annulus(0.0, 1.0, 2.0, 0.5, 3.14),
      PlanarCompact::clipped(Disk{3.0, 1.0}, 3.5),
      PlanarCompact::make_union({PlanarCompact::disk(0.0, 0.5), PlanarCompact::disk(3.0, 0.5)}),
  };
  for (const auto& k : shapes) CHECK(planar_from_json(to_json(k)) == k);
  const ProductCompact prod{shapes};
  CHECK(product_from_json(to_json(prod)) == prod);
  CHECK(product_from_json(to_json(shapes[0])).dim() == 1);

  const Domain dom = domain_from_json(to_json(Domain{OpenRect{{-1, -1}, {1, 2}}}));
  REQUIRE(std::holds_alternative<OpenRect>(dom));
  CHECK(std::get<OpenRect>(dom).hi == cplx(1, 2));

  for (const Enumeration& e : {Enumeration::graded_lex(2), Enumeration::graded_revlex(3),
                               Enumeration::diagonal_cantor(2),
                               Enumeration::explicit_table({MultiIndex{0, 0}, MultiIndex{1, 0}, MultiIndex{0, 1}}, true)})
    CHECK(enumeration_from_json(enumeration_to_json(e), e.dimension()) == e);
}

TEST_CASE("schema errors carry the JSON path") {
  try {
    planar_from_json(json::parse(R"({"type": "disk", "center": [0, 0], "radius": "x"})"), "$.outer[0]");
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("$.outer[0].radius") != std::string::npos);
  }
  CHECK_THROWS_AS(planar_from_json(json::parse(R"({"type": "blob"})")), SchemaError);
  CHECK_THROWS_AS(parse_json_text("{\n  \"a\": ,\n}", "bad.json"), SchemaError);
  try {
    parse_json_text("{\n  \"a\": ,\n}", "bad.json");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).rfind("bad.json:2:", 0) == 0);
  }
  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), SchemaError);
}

TEST_CASE("coefficient streams round trip") {
  CoefficientStream s(Enumeration::graded_lex(1), {cplx(0.5, 0)}, 1);
  StreamBlock b;
  b.stage = 1;
  b.first_index = 0;
  b.last_index = 3;
  b.coefficients[2] = Poly::variable(1, 0, 0) * cplx(0, 2);
  s.append_block(b);
  CHECK(stream_from_json(parse_json_text(to_json(s).dump(), "s")) == s);
}

TEST_CASE("predicate specs round trip") {
  PredicateSpec spec;
  spec.tau = 2;
  spec.p = 3;
  spec.m = 4;
  spec.j = 5;
  spec.s = 6;
  spec.n = 7;
  spec.variant = Variant::Infty;
  spec.l = 2;
  spec.fixed_center = std::vector<cplx>{cplx(0.1, 0.2)};
  const PredicateSpec back = predicate_spec_from_json(to_json(spec));
  CHECK(back.tau == 2);
  CHECK(back.n == 7);
  CHECK(back.variant == Variant::Infty);
  CHECK(back.l == 2);
  REQUIRE(back.fixed_center.has_value());
  CHECK((*back.fixed_center)[0] == cplx(0.1, 0.2));
}

TEST_CASE("sha256 digests") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const json body = json::parse(R"({"b": 1, "a": [1, 2]})");
  CHECK(body_digest(body) == sha256_hex(body.dump()));
}
