#ifndef TORIC_IO_HPP
#define TORIC_IO_HPP

#include <nlohmann/json.hpp>
#include <string>

#include "toric/polytope.hpp"

namespace toric {

using Json = nlohmann::json;

// Reads a spec document. ".json" files are parsed as JSON; anything else
// goes through a TOML-subset reader (key = value pairs, [[array-of-table]]
// headers, strings, integers, floats, booleans and flat arrays), which is
// the full grammar the polytope and family formats use.
Json load_document(const std::string& path);
Json parse_toml_subset(const std::string& text);

// Polytope spec: { "dimension": n, "facets": [{"normal": [...], "offset":
// "p/q"}], "name": optional, "raw_normals": bool, "real_offsets": bool }.
// Offsets may be strings ("3", "-1/2", "0.25" — all exact), integers, or,
// only when real_offsets is set, floating-point numbers (stored as exact
// binary rationals).
Polytope polytope_from_json(const Json& doc);
Polytope load_polytope(const std::string& path);

Json polytope_to_json(const Polytope& P);

Rational rational_from_json(const Json& v, bool allow_float);

}  // namespace toric

#endif
