#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "findyn/system_map.hpp"

namespace findyn {

// A finite prefix of an inverse sequence of systems: levels 1..depth with
// bonding factor maps level n+1 ->> level n. Coherent depth-tuples biject
// with level-depth vertices, so all limit queries are phrased per level.
class ShimomuraPrefix {
  public:
    ShimomuraPrefix(std::vector<std::shared_ptr<const FiniteSystem>> levels,
                    std::vector<SystemMap> bonding,
                    std::map<std::string, std::string> meta = {});

    int depth() const { return static_cast<int>(levels_.size()); }
    const FiniteSystem& level(int n) const;                     // 1-based
    std::shared_ptr<const FiniteSystem> level_ptr(int n) const; // 1-based
    const SystemMap& bonding(int n) const;                      // level n+1 -> level n
    const std::map<std::string, std::string>& meta() const { return meta_; }

    // p_{m,n} as a table over level-m vertices; p_{n,n} is the identity.
    std::vector<Vertex> composite(int m, int n) const;

  private:
    std::vector<std::shared_ptr<const FiniteSystem>> levels_;
    std::vector<SystemMap> bonding_;
    std::map<std::string, std::string> meta_;
};

struct LevelFlag {
    bool resolved = false;
    int witness_m = 0;    // least m that settles the level, when resolved
    std::string note;     // what stayed open, when unresolved
};

struct PrefixVerdict {
    std::vector<LevelFlag> bifurcating; // per level n = 1..depth-1
    std::vector<LevelFlag> shimomura;   // p_{m,n} o phi_m single-valued for some m
    std::vector<LevelFlag> invertible;  // same for phi^{-1}
    bool pointed = false;               // level 1 is the one-vertex self-loop

    bool all_resolved() const;
};

PrefixVerdict validate_prefix(const ShimomuraPrefix& p);

// Suspends every level and bonding map (p x identity on the layer index).
ShimomuraPrefix suspend_prefix(const ShimomuraPrefix& p, int n_fold);

struct FactoringCaps {
    std::int64_t max_level_vertices = 8'000'000; // levels above this are skipped, not searched
    std::uint64_t max_nodes = 200'000'000;       // global step budget for one search
    std::size_t max_images_per_component = 4096;
};

struct FactoringOutcome {
    enum class Status { found, absent_within, resource };
    Status status = Status::absent_within;
    int m = 0;
    std::optional<SystemMap> q2;
    std::vector<int> skipped_levels; // m-levels not searched for size reasons
    std::string note;
};

// Searches m in (k, m_max] for q2 : level m ->> level k with q1 o q2 = p_{m,n}.
// q1 must be a factor from level k onto level n. Absence is certified only
// for the m-levels actually searched; skipped levels are reported.
FactoringOutcome check_factoring(const ShimomuraPrefix& p, const SystemMap& q1, int k, int n,
                                 int m_max, const FactoringCaps& caps = {});

struct CounterexampleOutcome {
    std::optional<SystemMap> q1; // first factor with no factoring inside the caps
    FactoringOutcome details;
    std::uint64_t tested = 0;
};

CounterexampleOutcome search_factoring_counterexample(const ShimomuraPrefix& p, int k, int n,
                                                      int m_max, const FactoringCaps& caps = {},
                                                      const EnumCaps& q1_caps = {});

// Per-step hitting status between level-n fibers, checked at every level of
// the prefix. Absence at any single level is sound for the inverse limit;
// presence at all levels is necessary-condition evidence only.
struct HittingStatus {
    bool present = false;
    int level = 0; // absent: least certifying level; present: deepest level checked
};

struct HittingTable {
    int n = 0;
    Vertex i = 0, j = 0;
    int horizon = 0;
    int depth = 0;
    std::vector<HittingStatus> status; // index t-1 for t in [1, horizon]
};

HittingTable limit_hitting(const ShimomuraPrefix& p, int n, Vertex i, Vertex j, int horizon);

enum class NamedPrefix {
    thm_4_04,      // dumbbell tree
    prop_4_05,     // thread systems with two sentinels
    thm_4_08_star, // dumbbell tree with an adjoined fixed point
    thm_4_09,      // loop doubling over a divisibility sequence
    thm_4_10,      // adding machine
    thm_4_15,      // wedge sequence from a unimodular matrix
    thm_4_16,      // pointed-loop wrapping by a word
    example_3,     // prime-power loops plus an identity block
};

NamedPrefix named_prefix_from_string(const std::string& name);
std::string named_prefix_to_string(NamedPrefix name);

struct BuildLimits {
    std::int64_t max_level_vertices = 8'000'000;
};

// Level size without building anything, for feasibility planning.
std::int64_t named_prefix_level_size(NamedPrefix name, const std::map<std::string, std::string>& params,
                                     int level);

ShimomuraPrefix build_named_prefix(NamedPrefix name, const std::map<std::string, std::string>& params,
                                   int depth, const BuildLimits& limits = {});

} // namespace findyn
