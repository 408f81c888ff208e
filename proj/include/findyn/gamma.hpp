#pragma once

#include "findyn/shimomura.hpp"

namespace findyn {

struct RepresentCaps {
    std::int64_t max_level_vertices = 200'000;
    EnumCaps enumeration{200'000, 64, 20'000'000};
};

// Three-valued by design: a finite prefix can witness membership in Gamma(f)
// but never refute it, so the negative answer is only "not within these caps".
struct RepresentVerdict {
    enum class Status { yes, no_within_caps, resource };
    Status status = Status::no_within_caps;
    int level = 0;                  // witness level when yes
    std::optional<SystemMap> witness; // factor from that level onto phi
    std::vector<int> skipped_levels;
    std::string note;
};

RepresentVerdict represents_in_prefix(std::shared_ptr<const FiniteSystem> phi,
                                      const ShimomuraPrefix& prefix, const RepresentCaps& caps = {});

struct DominationReport {
    bool dominates_to_depth = false;
    int failing_level = 0; // first level of g with no representation found
    std::vector<RepresentVerdict> per_level;
};

// Does every level system of prefix_g appear as a factor of some level of
// prefix_f? The finite surrogate for Gamma(g) within Gamma(f).
DominationReport gamma_dominates(const ShimomuraPrefix& prefix_f, const ShimomuraPrefix& prefix_g,
                                 const RepresentCaps& caps = {});

} // namespace findyn
