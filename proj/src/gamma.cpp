#include "findyn/gamma.hpp"

namespace findyn {

RepresentVerdict represents_in_prefix(std::shared_ptr<const FiniteSystem> phi,
                                      const ShimomuraPrefix& prefix, const RepresentCaps& caps) {
    RepresentVerdict out;
    for (int n = 1; n <= prefix.depth(); ++n) {
        if (prefix.level(n).size() > caps.max_level_vertices ||
            prefix.level(n).size() > caps.enumeration.max_domain) {
            out.skipped_levels.push_back(n);
            continue;
        }
        std::optional<std::vector<Vertex>> found;
        try {
            enumerate_maps_visit(prefix.level(n), *phi, MapMode::factor, caps.enumeration,
                                 [&](const std::vector<Vertex>& t) {
                                     found = t;
                                     return false; // first witness in canonical order
                                 });
        } catch (const error& e) {
            if (e.kind() != errc::resource) throw;
            out.status = RepresentVerdict::Status::resource;
            out.note = std::string("level ") + std::to_string(n) + ": " + e.what();
            return out;
        }
        if (found) {
            out.status = RepresentVerdict::Status::yes;
            out.level = n;
            out.witness = SystemMap(prefix.level_ptr(n), phi, std::move(*found));
            return out;
        }
    }
    out.status = RepresentVerdict::Status::no_within_caps;
    return out;
}

DominationReport gamma_dominates(const ShimomuraPrefix& prefix_f, const ShimomuraPrefix& prefix_g,
                                 const RepresentCaps& caps) {
    DominationReport rep;
    rep.dominates_to_depth = true;
    for (int n = 1; n <= prefix_g.depth(); ++n) {
        RepresentVerdict v = represents_in_prefix(prefix_g.level_ptr(n), prefix_f, caps);
        bool ok = v.status == RepresentVerdict::Status::yes;
        rep.per_level.push_back(std::move(v));
        if (!ok && rep.dominates_to_depth) {
            rep.dominates_to_depth = false;
            rep.failing_level = n;
        }
    }
    return rep;
}

} // namespace findyn
