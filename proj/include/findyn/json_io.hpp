#pragma once

#include <string>

#include <json.hpp>

#include "findyn/gamma.hpp"
#include "findyn/relation.hpp"
#include "findyn/shimomura.hpp"
#include "findyn/system_map.hpp"

namespace findyn {

using json = nlohmann::ordered_json;

// {"size": n, "edges": [[i,j],...], "labels": [...]} with 1-based vertices
// and lexicographically sorted edges.
json to_json(const FiniteRelation& r);
json to_json(const FiniteSystem& s);
FiniteRelation relation_from_json(const json& j);
FiniteSystem system_from_json(const json& j);

// {"domain": <system>, "codomain": <system>, "table": [..1-based..]}
json to_json(const SystemMap& m);
SystemMap map_from_json(const json& j);

// {"levels": [...], "bonding": [[..tables..]], "meta": {...}}
json to_json(const ShimomuraPrefix& p);
ShimomuraPrefix prefix_from_json(const json& j);

json to_json(const PropertyReport& r);
json to_json(const PrefixVerdict& v);
json to_json(const LiftVerdict& v);
json to_json(const HittingTable& t);

// One node per vertex, one directed edge per pair, deterministic order.
std::string export_dot(const FiniteRelation& r, const std::string& name = "findyn");
inline std::string export_dot(const FiniteSystem& s, const std::string& name = "findyn") {
    return export_dot(s.rel(), name);
}

// FNV-1a digest of a byte string, hex; used for input echoing in reports.
std::string digest(const std::string& bytes);

} // namespace findyn
