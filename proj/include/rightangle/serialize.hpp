#pragma once

// JSON encodings of the library's values.
//
//   element      bare integer (k = 1) or little-endian coefficient array
//   FieldSpec    {"p": int, "k": int, "modulus": [int, ...]}
//   PointSet     {"field": FieldSpec, "n": int, "points": [[element, ...], ...]}
//   witness      {"vertex": i, "arm1": j, "arm2": k, "value": element,
//                 "points": {"vertex": [...], "arm1": [...], "arm2": [...]}}
//   MatrixFq     {"field": FieldSpec, "rows": r, "cols": c, "values": [...]}
//   Tensor3      {"index_set": PointSet, "m": m, "values": [...]}  (x-major)
//   slices       {"field": FieldSpec, "target_size": m,
//                 "slices": [{"axis": "X"|"Y"|"Z", "uni": [...], "bi": [[...], ...]}]}
//   checkpoint   {"version": 1, "n", "q", "orbit_reduction", "completed_branches",
//                 "best_indices", "nodes"}
//
// Every *_from_json throws Error(Parse) on malformed input and lets the
// validating constructors report semantic errors (NotPrime, DuplicatePoint...).

#include <json.hpp>

#include "rightangle/geometry.hpp"
#include "rightangle/rank.hpp"
#include "rightangle/search.hpp"

namespace rightangle::serialize {

using Json = nlohmann::json;

Json to_json(const gf::FieldSpec& f);
gf::FieldSpec field_from_json(const Json& j);

Json to_json(const gf::FieldSpec& f, gf::FieldElement e);
gf::FieldElement element_from_json(const gf::FieldSpec& f, const Json& j);

Json to_json(const gf::FieldSpec& f, const gf::Point& p);
gf::Point point_from_json(const gf::FieldSpec& f, const Json& j);

Json to_json(const geometry::PointSet& a);
geometry::PointSet point_set_from_json(const Json& j);

Json to_json(const geometry::PointSet& a, const geometry::TripleWitness& w);

Json to_json(const geometry::BoundsReport& r);

Json to_json(const rank::MatrixFq& m);
rank::MatrixFq matrix_from_json(const Json& j);

Json to_json(const rank::Tensor3& t);
rank::Tensor3 tensor_from_json(const Json& j);

Json to_json(const rank::SliceDecomposition& d);
rank::SliceDecomposition decomposition_from_json(const Json& j);

Json to_json(const search::Checkpoint& c);
search::Checkpoint checkpoint_from_json(const Json& j);

Json to_json(const search::SearchResult& r);
search::SearchResult search_result_from_json(const Json& j);

/// Reads and parses a JSON file; Error(Parse) on I/O or syntax failure.
Json read_json_file(const std::string& path);

}  // namespace rightangle::serialize
