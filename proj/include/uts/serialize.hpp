#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "uts/certificate.hpp"
#include "uts/geometry.hpp"
#include "uts/mergelyan.hpp"
#include "uts/multiindex.hpp"
#include "uts/poly.hpp"
#include "uts/verify.hpp"

namespace uts {

using json = nlohmann::json;

/// Checked accessors used by every reader. `where` is the JSON path of j
/// and appears in the SchemaError message.
const json& require_field(const json& j, const std::string& key, const std::string& where);
/// nullptr when the key is absent or null.
const json* find_field(const json& j, const std::string& key);
std::string json_path(const std::string& where, const std::string& key);
std::string json_path(const std::string& where, std::size_t idx);
std::int64_t read_int(const json& j, const std::string& where);
std::uint64_t read_uint(const json& j, const std::string& where);
std::string read_string(const json& j, const std::string& where);
bool read_bool(const json& j, const std::string& where);
const json& read_array(const json& j, const std::string& where);

/// Reading functions throw SchemaError with the JSON path of the offending value.
json to_json(cplx z);
cplx complex_from_json(const json& j, const std::string& where = "$");
/// Non-finite numbers are written as null and read back as +infinity.
json number_to_json(double x);
double number_from_json(const json& j, const std::string& where = "$");

json to_json(const MultiIndex& m);
MultiIndex multiindex_from_json(const json& j, const std::string& where = "$");
json to_json(const DiffOp& op);
DiffOp diffop_from_json(const json& j, const std::string& where = "$");

/// {"r": r, "d": d, "terms": [{"w_exp": [...], "z_exp": [...], "re": x, "im": y}, ...]}.
/// A bare term list is accepted when r and d are supplied.
json to_json(const Poly& p);
Poly poly_from_json(const json& j, const std::string& where = "$", std::optional<std::size_t> r = std::nullopt,
                    std::optional<std::size_t> d = std::nullopt);

json enumeration_to_json(const Enumeration& e);
Enumeration enumeration_from_json(const json& j, std::size_t dim, const std::string& where = "$");

json to_json(const PlanarCompact& k);
PlanarCompact planar_from_json(const json& j, const std::string& where = "$");
/// {"type": "product", "factors": [...]}; a bare factor list is accepted.
json to_json(const ProductCompact& k);
ProductCompact product_from_json(const json& j, const std::string& where = "$");
json to_json(const Domain& dom);
Domain domain_from_json(const json& j, const std::string& where = "$");

json to_json(const CoefficientStream& s);
CoefficientStream stream_from_json(const json& j, const std::string& where = "$");

json to_json(const GridSpec& g);
/// Missing fields keep their defaults.
GridSpec grid_spec_from_json(const json& j, const std::string& where = "$");

json to_json(const FitReport& rep);
json to_json(const PredicateResult& res);
json to_json(const PredicateSpec& spec);
PredicateSpec predicate_spec_from_json(const json& j, const std::string& where = "$");

json to_json(const StageRecord& rec);
StageRecord stage_record_from_json(const json& j, std::size_t r, std::size_t d, const std::string& where = "$");
/// The deterministic certificate body (no timestamps).
json to_json(const Certificate& cert);
Certificate certificate_from_json(const json& body, const std::string& where = "$");

/// Lowercase hex SHA-256 of a string.
std::string sha256_hex(const std::string& data);
/// Hash of the compact serialization of a certificate body.
std::string body_digest(const json& body);

/// Parses text; malformed input raises SchemaError naming line and column.
json parse_json_text(const std::string& text, const std::string& source);
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace uts
