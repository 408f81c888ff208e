#include "findyn/json_io.hpp"

#include <sstream>

namespace findyn {

json to_json(const FiniteRelation& r) {
    json j;
    j["size"] = r.size();
    json edges = json::array();
    for (auto [a, b] : r.edges()) edges.push_back(json::array({a + 1, b + 1}));
    j["edges"] = std::move(edges);
    if (!r.labels().empty()) j["labels"] = r.labels();
    return j;
}

json to_json(const FiniteSystem& s) { return to_json(s.rel()); }

FiniteRelation relation_from_json(const json& j) {
    if (!j.is_object() || !j.contains("size") || !j.contains("edges"))
        fail(errc::decode, "relation JSON needs size and edges");
    Vertex size = j["size"].get<Vertex>();
    std::vector<Edge> edges;
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2) fail(errc::decode, "edge entries must be pairs");
        edges.emplace_back(e[0].get<Vertex>() - 1, e[1].get<Vertex>() - 1);
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
    return FiniteRelation(size, std::move(edges), std::move(labels));
}

FiniteSystem system_from_json(const json& j) { return FiniteSystem(relation_from_json(j)); }

json to_json(const SystemMap& m) {
    json j;
    j["domain"] = to_json(m.domain());
    j["codomain"] = to_json(m.codomain());
    json t = json::array();
    for (Vertex v : m.table()) t.push_back(v + 1);
    j["table"] = std::move(t);
    return j;
}

SystemMap map_from_json(const json& j) {
    if (!j.is_object() || !j.contains("domain") || !j.contains("codomain") || !j.contains("table"))
        fail(errc::decode, "map JSON needs domain, codomain and table");
    auto dom = std::make_shared<const FiniteSystem>(system_from_json(j["domain"]));
    auto cod = std::make_shared<const FiniteSystem>(system_from_json(j["codomain"]));
    std::vector<Vertex> table;
    for (const auto& v : j["table"]) table.push_back(v.get<Vertex>() - 1);
    return SystemMap(std::move(dom), std::move(cod), std::move(table));
}

json to_json(const ShimomuraPrefix& p) {
    json j;
    json levels = json::array();
    for (int n = 1; n <= p.depth(); ++n) levels.push_back(to_json(p.level(n)));
    j["levels"] = std::move(levels);
    json bonding = json::array();
    for (int n = 1; n < p.depth(); ++n) {
        json t = json::array();
        for (Vertex v : p.bonding(n).table()) t.push_back(v + 1);
        bonding.push_back(std::move(t));
    }
    j["bonding"] = std::move(bonding);
    j["meta"] = p.meta();
    return j;
}

ShimomuraPrefix prefix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("levels") || !j.contains("bonding"))
        fail(errc::decode, "prefix JSON needs levels and bonding");
    std::vector<std::shared_ptr<const FiniteSystem>> levels;
    for (const auto& l : j["levels"])
        levels.push_back(std::make_shared<const FiniteSystem>(system_from_json(l)));
    std::vector<SystemMap> bonding;
    for (std::size_t n = 0; n + 1 < levels.size(); ++n) {
        std::vector<Vertex> table;
        for (const auto& v : j["bonding"][n]) table.push_back(v.get<Vertex>() - 1);
        bonding.emplace_back(levels[n + 1], levels[n], std::move(table));
    }
    std::map<std::string, std::string> meta;
    if (j.contains("meta"))
        for (auto it = j["meta"].begin(); it != j["meta"].end(); ++it)
            meta[it.key()] = it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    return ShimomuraPrefix(std::move(levels), std::move(bonding), std::move(meta));
}

json to_json(const PropertyReport& r) {
    json j;
    j["surjective"] = r.surjective;
    j["recurrent"] = r.recurrent;
    j["transitive"] = r.transitive;
    j["mixing"] = r.mixing;
    if (r.mixing_exponent)
        j["mixing_exponent"] = *r.mixing_exponent;
    else
        j["mixing_exponent"] = nullptr;
    j["loop_period"] = r.loop_period;
    j["per_window"] = r.per_window;
    json ev = json::array();
    for (const auto& b : r.per_eventual) {
        json e;
        json members = json::array();
        for (Vertex v : b.members) members.push_back(v + 1);
        e["basic_set"] = std::move(members);
        e["period"] = b.period;
        ev.push_back(std::move(e));
    }
    j["per_eventual"] = std::move(ev);
    return j;
}

json to_json(const PrefixVerdict& v) {
    auto flags = [](const std::vector<LevelFlag>& fs) {
        json arr = json::array();
        for (std::size_t n = 0; n < fs.size(); ++n) {
            json f;
            f["level"] = n + 1;
            f["resolved"] = fs[n].resolved;
            if (fs[n].resolved)
                f["witness_m"] = fs[n].witness_m;
            else
                f["note"] = fs[n].note;
            arr.push_back(std::move(f));
        }
        return arr;
    };
    json j;
    j["pointed"] = v.pointed;
    j["bifurcating"] = flags(v.bifurcating);
    j["shimomura"] = flags(v.shimomura);
    j["invertible"] = flags(v.invertible);
    j["all_resolved"] = v.all_resolved();
    return j;
}

json to_json(const LiftVerdict& v) {
    json j;
    j["is_plus"] = v.is_plus;
    j["is_pm"] = v.is_pm;
    j["failures"] = v.failures;
    return j;
}

json to_json(const HittingTable& t) {
    json j;
    j["level"] = t.n;
    j["i"] = t.i + 1;
    j["j"] = t.j + 1;
    j["horizon"] = t.horizon;
    j["depth"] = t.depth;
    json rows = json::array();
    for (int step = 1; step <= t.horizon; ++step) {
        const auto& st = t.status[static_cast<std::size_t>(step - 1)];
        json r;
        r["t"] = step;
        r["status"] = st.present ? "PRESENT-TO-DEPTH" : "ABSENT-CERTIFIED";
        r["level"] = st.level;
        rows.push_back(std::move(r));
    }
    j["table"] = std::move(rows);
    return j;
}

std::string export_dot(const FiniteRelation& r, const std::string& name) {
    std::ostringstream out;
    out << "digraph " << name << " {\n";
    for (Vertex v = 0; v < r.size(); ++v)
        out << "  v" << (v + 1) << " [label=\"" << r.label(v) << "\"];\n";
    for (auto [a, b] : r.edges()) out << "  v" << (a + 1) << " -> v" << (b + 1) << ";\n";
    out << "}\n";
    return out.str();
}

std::string digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) h = (h ^ c) * 1099511628211ull;
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

} // namespace findyn
