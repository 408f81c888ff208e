#include "findyn/shimomura.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "findyn/constructions.hpp"
#include "findyn/word.hpp"

namespace findyn {

ShimomuraPrefix::ShimomuraPrefix(std::vector<std::shared_ptr<const FiniteSystem>> levels,
                                 std::vector<SystemMap> bonding,
                                 std::map<std::string, std::string> meta)
    : levels_(std::move(levels)), bonding_(std::move(bonding)), meta_(std::move(meta)) {
    if (levels_.size() < 2) fail(errc::argument, "a prefix needs at least two levels");
    if (bonding_.size() + 1 != levels_.size())
        fail(errc::argument, "a depth-d prefix needs d-1 bonding maps");
    for (std::size_t n = 0; n < bonding_.size(); ++n) {
        const SystemMap& b = bonding_[n];
        if (b.domain() != *levels_[n + 1] || b.codomain() != *levels_[n])
            fail(errc::validation, "bonding map " + std::to_string(n + 1) +
                                       " does not connect level " + std::to_string(n + 2) +
                                       " to level " + std::to_string(n + 1));
        if (!b.factor())
            fail(errc::validation, "bonding map from level " + std::to_string(n + 2) +
                                       " is not a factor map");
    }
}

const FiniteSystem& ShimomuraPrefix::level(int n) const {
    if (n < 1 || n > depth()) fail(errc::argument, "level index out of range");
    return *levels_[static_cast<std::size_t>(n - 1)];
}

std::shared_ptr<const FiniteSystem> ShimomuraPrefix::level_ptr(int n) const {
    if (n < 1 || n > depth()) fail(errc::argument, "level index out of range");
    return levels_[static_cast<std::size_t>(n - 1)];
}

const SystemMap& ShimomuraPrefix::bonding(int n) const {
    if (n < 1 || n >= depth()) fail(errc::argument, "bonding index out of range");
    return bonding_[static_cast<std::size_t>(n - 1)];
}

std::vector<Vertex> ShimomuraPrefix::composite(int m, int n) const {
    if (n < 1 || m < n || m > depth()) fail(errc::argument, "composite indices out of range");
    std::vector<Vertex> table(static_cast<std::size_t>(level(m).size()));
    std::iota(table.begin(), table.end(), 0);
    for (int s = m; s > n; --s) {
        const auto& b = bonding(s - 1).table();
        for (auto& v : table) v = b[static_cast<std::size_t>(v)];
    }
    return table;
}

bool PrefixVerdict::all_resolved() const {
    auto ok = [](const std::vector<LevelFlag>& v) {
        return std::all_of(v.begin(), v.end(), [](const LevelFlag& f) { return f.resolved; });
    };
    return ok(bifurcating) && ok(shimomura) && ok(invertible);
}

PrefixVerdict validate_prefix(const ShimomuraPrefix& p) {
    PrefixVerdict out;
    out.pointed = p.level(1).size() == 1;
    const int d = p.depth();
    for (int n = 1; n < d; ++n) {
        LevelFlag bif, shi, inv;
        for (int m = n + 1; m <= d && !(bif.resolved && shi.resolved && inv.resolved); ++m) {
            std::vector<Vertex> cmp = p.composite(m, n);
            if (!bif.resolved) {
                std::vector<int> fiber(static_cast<std::size_t>(p.level(n).size()), 0);
                for (Vertex v : cmp) ++fiber[static_cast<std::size_t>(v)];
                if (std::all_of(fiber.begin(), fiber.end(), [](int c) { return c >= 2; }))
                    bif = {true, m, ""};
            }
            Adjacency adj(p.level(m).rel());
            if (!shi.resolved) {
                bool single = true;
                for (Vertex v = 0; v < p.level(m).size() && single; ++v) {
                    auto succ = adj.out(v);
                    for (std::size_t t = 1; t < succ.size(); ++t)
                        if (cmp[static_cast<std::size_t>(succ[t])] !=
                            cmp[static_cast<std::size_t>(succ[0])]) {
                            single = false;
                            break;
                        }
                }
                if (single) shi = {true, m, ""};
            }
            if (!inv.resolved) {
                bool single = true;
                for (Vertex v = 0; v < p.level(m).size() && single; ++v) {
                    auto pred = adj.in(v);
                    for (std::size_t t = 1; t < pred.size(); ++t)
                        if (cmp[static_cast<std::size_t>(pred[t])] !=
                            cmp[static_cast<std::size_t>(pred[0])]) {
                            single = false;
                            break;
                        }
                }
                if (single) inv = {true, m, ""};
            }
        }
        if (!bif.resolved) bif.note = "no level in the prefix doubles every fiber";
        if (!shi.resolved) shi.note = "a V survives to the deepest level";
        if (!inv.resolved) inv.note = "a reverse V survives to the deepest level";
        out.bifurcating.push_back(bif);
        out.shimomura.push_back(shi);
        out.invertible.push_back(inv);
    }
    return out;
}

ShimomuraPrefix suspend_prefix(const ShimomuraPrefix& p, int n_fold) {
    if (n_fold < 1) fail(errc::argument, "suspension fold must be positive");
    std::vector<std::shared_ptr<const FiniteSystem>> levels;
    for (int n = 1; n <= p.depth(); ++n)
        levels.push_back(std::make_shared<const FiniteSystem>(suspension(p.level(n), n_fold)));
    std::vector<SystemMap> bonding;
    for (int n = 1; n < p.depth(); ++n) {
        const SystemMap& b = p.bonding(n);
        const Vertex asz = b.domain().size();
        const Vertex bsz = b.codomain().size();
        std::vector<Vertex> table(static_cast<std::size_t>(asz) * n_fold);
        for (int layer = 0; layer < n_fold; ++layer)
            for (Vertex v = 0; v < asz; ++v)
                table[static_cast<std::size_t>(layer) * asz + v] = layer * bsz + b(v);
        bonding.emplace_back(levels[static_cast<std::size_t>(n)], levels[static_cast<std::size_t>(n - 1)],
                             std::move(table));
    }
    auto meta = p.meta();
    meta["suspended_by"] = std::to_string(n_fold);
    return ShimomuraPrefix(std::move(levels), std::move(bonding), std::move(meta));
}

// ---------------------------------------------------------------------------
// factoring search

namespace {

struct EdgeBitset {
    std::vector<std::uint64_t> w;
    explicit EdgeBitset(std::size_t bits) : w((bits + 63) / 64, 0) {}
    void set(std::size_t i) { w[i / 64] |= std::uint64_t{1} << (i % 64); }
    void unite(const EdgeBitset& o) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] |= o.w[i];
    }
    bool covers(const EdgeBitset& full) const {
        for (std::size_t i = 0; i < w.size(); ++i)
            if ((w[i] & full.w[i]) != full.w[i]) return false;
        return true;
    }
    bool test(std::size_t i) const { return (w[i / 64] >> (i % 64)) & 1u; }
    bool operator==(const EdgeBitset& o) const { return w == o.w; }
};

struct EdgeBitsetHash {
    std::size_t operator()(const EdgeBitset& b) const {
        std::size_t h = 1469598103934665603ull;
        for (auto x : b.w) h = (h ^ x) * 1099511628211ull;
        return h;
    }
};

// All ways one weak component of the big level can sit over the small level,
// deduplicated by covered edge set.
struct ComponentChoices {
    std::vector<Vertex> order;                    // assignment order (BFS within the component)
    std::vector<std::vector<Vertex>> assignments; // per kept image, values along `order`
    std::vector<EdgeBitset> images;
};

struct Q2Search {
    const FiniteSystem& big;
    const FiniteSystem& small;
    const std::vector<Vertex>& constraint; // required q1(q2(v)) per big vertex
    const std::vector<Vertex>& q1;
    const FactoringCaps& caps;

    Adjacency badj, sadj;
    std::vector<std::vector<Vertex>> bucket; // candidates per constraint value
    std::uint64_t nodes = 0;
    bool out_of_budget = false;

    // when the codomain is a permutation, its cycle structure screens
    // candidate roots by divisibility instead of chain walks
    bool small_functional = false;
    std::vector<Vertex> small_cycle_id;
    std::vector<long> small_cycle_len;

    Q2Search(const FiniteSystem& b, const FiniteSystem& s, const std::vector<Vertex>& c,
             const std::vector<Vertex>& q1t, const FactoringCaps& cp)
        : big(b), small(s), constraint(c), q1(q1t), caps(cp), badj(b.rel()), sadj(s.rel()) {
        Vertex max_val = 0;
        for (Vertex v : q1) max_val = std::max(max_val, v);
        for (Vertex v : constraint) max_val = std::max(max_val, v);
        bucket.assign(static_cast<std::size_t>(max_val) + 1, {});
        for (Vertex c2 = 0; c2 < small.size(); ++c2)
            bucket[static_cast<std::size_t>(q1[static_cast<std::size_t>(c2)])].push_back(c2);
        small_functional = true;
        for (Vertex v = 0; v < small.size() && small_functional; ++v)
            small_functional = sadj.out(v).size() == 1;
        if (small_functional) {
            small_cycle_id.assign(static_cast<std::size_t>(small.size()), -1);
            small_cycle_len.assign(static_cast<std::size_t>(small.size()), 0);
            Vertex id = 0;
            for (Vertex v = 0; v < small.size(); ++v) {
                if (small_cycle_id[static_cast<std::size_t>(v)] != -1) continue;
                std::vector<Vertex> orbit{v};
                Vertex w = sadj.out(v)[0];
                while (w != v) {
                    orbit.push_back(w);
                    w = sadj.out(w)[0];
                }
                for (Vertex u : orbit) {
                    small_cycle_id[static_cast<std::size_t>(u)] = id;
                    small_cycle_len[static_cast<std::size_t>(u)] = static_cast<long>(orbit.size());
                }
                ++id;
            }
        }
    }

    bool budget() {
        if (++nodes > caps.max_nodes) out_of_budget = true;
        return !out_of_budget;
    }

    std::size_t edge_index(Vertex a, Vertex b) const {
        const auto& e = small.edges();
        return static_cast<std::size_t>(std::lower_bound(e.begin(), e.end(), Edge{a, b}) - e.begin());
    }

    // enumerate all valid assignments of one component, deduped by image;
    // candidates at non-root vertices follow the codomain adjacency of the
    // BFS parent, so forced chains cost out-degree work per step
    std::optional<ComponentChoices> component_choices(const std::vector<Vertex>& members) {
        ComponentChoices cc;
        std::vector<char> in_order(big.size(), 0);
        std::vector<Vertex> parent_of(big.size(), -1);
        std::vector<char> parent_forward(big.size(), 1); // edge parent->v vs v->parent
        cc.order.push_back(members[0]);
        in_order[static_cast<std::size_t>(members[0])] = 1;
        for (std::size_t qi = 0; qi < cc.order.size(); ++qi) {
            Vertex v = cc.order[qi];
            for (Vertex w : badj.out(v))
                if (!in_order[static_cast<std::size_t>(w)]) {
                    in_order[static_cast<std::size_t>(w)] = 1;
                    parent_of[static_cast<std::size_t>(w)] = v;
                    parent_forward[static_cast<std::size_t>(w)] = 1;
                    cc.order.push_back(w);
                }
            for (Vertex w : badj.in(v))
                if (!in_order[static_cast<std::size_t>(w)]) {
                    in_order[static_cast<std::size_t>(w)] = 1;
                    parent_of[static_cast<std::size_t>(w)] = v;
                    parent_forward[static_cast<std::size_t>(w)] = 0;
                    cc.order.push_back(w);
                }
        }

        // fast path: a cycle component over a permutation codomain is decided
        // by cycle-length divisibility, and rotations of one successful root
        // repeat the same image
        bool cycle_component = small_functional;
        for (Vertex v : members)
            if (badj.out(v).size() != 1 || badj.in(v).size() != 1) {
                cycle_component = false;
                break;
            }
        if (cycle_component) {
            const long len = static_cast<long>(members.size());
            std::vector<Vertex> cyc{cc.order[0]};
            while (static_cast<long>(cyc.size()) < len) cyc.push_back(badj.out(cyc.back())[0]);
            cc.order = cyc;
            std::vector<char> cycle_done(small_cycle_id.empty() ? 0 : small.size(), 0);
            const auto& roots =
                bucket[static_cast<std::size_t>(constraint[static_cast<std::size_t>(cyc[0])])];
            for (Vertex c : roots) {
                if (!budget()) return std::nullopt;
                Vertex cyc_id = small_cycle_id[static_cast<std::size_t>(c)];
                if (cycle_done[static_cast<std::size_t>(cyc_id)]) continue;
                if (len % small_cycle_len[static_cast<std::size_t>(c)] != 0) continue;
                std::vector<Vertex> a;
                a.reserve(cyc.size());
                EdgeBitset img(small.edges().size());
                Vertex y = c;
                bool ok = true;
                for (long t = 0; t < len; ++t) {
                    if (q1[static_cast<std::size_t>(y)] !=
                        constraint[static_cast<std::size_t>(cyc[static_cast<std::size_t>(t)])]) {
                        ok = false;
                        break;
                    }
                    a.push_back(y);
                    Vertex ny = sadj.out(y)[0];
                    img.set(edge_index(y, ny));
                    y = ny;
                }
                nodes += static_cast<std::uint64_t>(len);
                if (!budget()) return std::nullopt;
                if (!ok) continue;
                cycle_done[static_cast<std::size_t>(cyc_id)] = 1;
                cc.assignments.push_back(std::move(a));
                cc.images.push_back(std::move(img));
                if (cc.assignments.size() > caps.max_images_per_component) {
                    out_of_budget = true;
                    return std::nullopt;
                }
            }
            return cc;
        }

        std::vector<Vertex> val(big.size(), -1);
        std::unordered_set<EdgeBitset, EdgeBitsetHash> seen;
        std::vector<std::size_t> pick(cc.order.size(), 0);
        auto candidates = [&](Vertex v) -> std::span<const Vertex> {
            Vertex par = parent_of[static_cast<std::size_t>(v)];
            if (par == -1)
                return {bucket[static_cast<std::size_t>(constraint[static_cast<std::size_t>(v)])]};
            Vertex anchor = val[static_cast<std::size_t>(par)];
            return parent_forward[static_cast<std::size_t>(v)] ? sadj.out(anchor) : sadj.in(anchor);
        };
        auto has_small_edge = [&](Vertex a, Vertex b) {
            auto succ = sadj.out(a);
            for (Vertex s : succ)
                if (s == b) return true;
            return false;
        };
        auto valid = [&](Vertex v, Vertex c) {
            if (q1[static_cast<std::size_t>(c)] != constraint[static_cast<std::size_t>(v)])
                return false;
            for (Vertex w : badj.out(v)) {
                Vertex fw = w == v ? c : val[static_cast<std::size_t>(w)];
                if (fw != -1 && !has_small_edge(c, fw)) return false;
            }
            for (Vertex w : badj.in(v)) {
                Vertex fw = w == v ? c : val[static_cast<std::size_t>(w)];
                if (fw != -1 && !has_small_edge(fw, c)) return false;
            }
            return true;
        };
        std::size_t depth = 0;
        while (true) {
            if (!budget()) return std::nullopt;
            if (depth == cc.order.size()) {
                EdgeBitset img(small.edges().size());
                for (Vertex v : cc.order)
                    for (Vertex w : badj.out(v))
                        if (in_order[static_cast<std::size_t>(w)])
                            img.set(edge_index(val[static_cast<std::size_t>(v)],
                                               val[static_cast<std::size_t>(w)]));
                if (seen.insert(img).second) {
                    if (seen.size() > caps.max_images_per_component) {
                        out_of_budget = true;
                        return std::nullopt;
                    }
                    std::vector<Vertex> a;
                    a.reserve(cc.order.size());
                    for (Vertex v : cc.order) a.push_back(val[static_cast<std::size_t>(v)]);
                    cc.assignments.push_back(std::move(a));
                    cc.images.push_back(std::move(img));
                }
                --depth; // backtrack to look for the next assignment
                val[static_cast<std::size_t>(cc.order[depth])] = -1;
                ++pick[depth];
                continue;
            }
            Vertex v = cc.order[depth];
            auto cands = candidates(v);
            bool advanced = false;
            while (pick[depth] < cands.size()) {
                Vertex c = cands[pick[depth]];
                if (!budget()) return std::nullopt;
                if (valid(v, c)) {
                    val[static_cast<std::size_t>(v)] = c;
                    ++depth;
                    if (depth < pick.size()) pick[depth] = 0;
                    advanced = true;
                    break;
                }
                ++pick[depth];
            }
            if (advanced) continue;
            if (depth == 0) break; // exhausted
            --depth;
            val[static_cast<std::size_t>(cc.order[depth])] = -1;
            ++pick[depth];
        }
        return cc;
    }

    // complete cover search: every small edge must land in the union of the
    // chosen component images
    std::optional<std::vector<Vertex>> solve() {
        for (Vertex v = 0; v < big.size(); ++v)
            if (bucket[static_cast<std::size_t>(constraint[static_cast<std::size_t>(v)])].empty())
                return std::nullopt;

        // weak components, ordered by least vertex
        std::vector<Vertex> comp(big.size(), -1);
        std::vector<std::vector<Vertex>> members;
        for (Vertex root = 0; root < big.size(); ++root) {
            if (comp[static_cast<std::size_t>(root)] != -1) continue;
            Vertex id = static_cast<Vertex>(members.size());
            members.emplace_back();
            std::vector<Vertex> queue{root};
            comp[static_cast<std::size_t>(root)] = id;
            for (std::size_t qi = 0; qi < queue.size(); ++qi) {
                Vertex v = queue[qi];
                members.back().push_back(v);
                for (Vertex w : badj.out(v))
                    if (comp[static_cast<std::size_t>(w)] == -1) {
                        comp[static_cast<std::size_t>(w)] = id;
                        queue.push_back(w);
                    }
                for (Vertex w : badj.in(v))
                    if (comp[static_cast<std::size_t>(w)] == -1) {
                        comp[static_cast<std::size_t>(w)] = id;
                        queue.push_back(w);
                    }
            }
            std::sort(members.back().begin(), members.back().end());
        }

        std::vector<ComponentChoices> choices;
        for (const auto& m : members) {
            auto cc = component_choices(m);
            if (!cc) return std::nullopt; // budget
            if (cc->assignments.empty()) return std::nullopt; // no valid placement at all
            choices.push_back(std::move(*cc));
        }

        const std::size_t nedges = small.edges().size();
        EdgeBitset full(nedges);
        for (std::size_t i = 0; i < nedges; ++i) full.set(i);

        std::vector<EdgeBitset> potential(choices.size() + 1, EdgeBitset(nedges));
        for (std::size_t i = choices.size(); i-- > 0;) {
            potential[i] = potential[i + 1];
            for (const auto& img : choices[i].images) potential[i].unite(img);
        }

        std::vector<std::size_t> chosen(choices.size(), 0);
        std::vector<EdgeBitset> covered(choices.size() + 1, EdgeBitset(nedges));
        // DFS over components with a suffix-potential prune
        std::size_t i = 0;
        while (true) {
            if (!budget()) return std::nullopt;
            if (i == choices.size()) {
                if (covered[i].covers(full)) break;
                // step back
                do {
                    if (i == 0) return std::nullopt;
                    --i;
                    ++chosen[i];
                } while (chosen[i] >= choices[i].images.size());
                continue;
            }
            bool viable = false;
            if (chosen[i] < choices[i].images.size()) {
                EdgeBitset c = covered[i];
                c.unite(choices[i].images[chosen[i]]);
                EdgeBitset reach = c;
                reach.unite(potential[i + 1]);
                if (reach.covers(full)) {
                    covered[i + 1] = std::move(c);
                    ++i;
                    if (i < chosen.size()) chosen[i] = 0;
                    viable = true;
                }
            }
            if (viable) continue;
            ++chosen[i];
            while (chosen[i] >= choices[i].images.size()) {
                if (i == 0) return std::nullopt;
                --i;
                ++chosen[i];
            }
        }

        std::vector<Vertex> table(big.size(), -1);
        for (std::size_t ci = 0; ci < choices.size(); ++ci)
            for (std::size_t t = 0; t < choices[ci].order.size(); ++t)
                table[static_cast<std::size_t>(choices[ci].order[t])] =
                    choices[ci].assignments[chosen[ci]][t];
        return table;
    }
};

} // namespace

FactoringOutcome check_factoring(const ShimomuraPrefix& p, const SystemMap& q1, int k, int n,
                                 int m_max, const FactoringCaps& caps) {
    if (!(1 <= n && n < k && k <= p.depth())) fail(errc::argument, "check_factoring: need 1 <= n < k <= depth");
    if (m_max > p.depth() || m_max <= k)
        fail(errc::argument, "check_factoring: need k < m_max <= depth");
    if (!q1.factor()) fail(errc::argument, "check_factoring: q1 must be a factor map");
    if (q1.domain() != p.level(k) || q1.codomain() != p.level(n))
        fail(errc::argument, "check_factoring: q1 does not run from level k onto level n");

    FactoringOutcome out;
    for (int m = k + 1; m <= m_max; ++m) {
        if (p.level(m).size() > caps.max_level_vertices) {
            out.skipped_levels.push_back(m);
            continue;
        }
        std::vector<Vertex> cmp = p.composite(m, n);
        Q2Search search(p.level(m), p.level(k), cmp, q1.table(), caps);
        auto table = search.solve();
        if (search.out_of_budget) {
            out.status = FactoringOutcome::Status::resource;
            out.m = m;
            out.note = "search budget exhausted at level " + std::to_string(m);
            return out;
        }
        if (table) {
            out.status = FactoringOutcome::Status::found;
            out.m = m;
            out.q2 = SystemMap(p.level_ptr(m), p.level_ptr(k), std::move(*table));
            if (!out.q2->factor()) fail(errc::internal, "check_factoring produced a non-factor q2");
            return out;
        }
    }
    out.status = FactoringOutcome::Status::absent_within;
    return out;
}

namespace {

// Factor maps enumerated as a product over weak components: per-component
// assignments are collected once, then an odometer walks the combinations
// whose edge images cover the whole codomain. This keeps highly symmetric
// components (loop rotations) from being re-walked during backtracking.
struct FactorEnumerator {
    const FiniteSystem& dom;
    const FiniteSystem& cod;
    const EnumCaps& caps;
    Adjacency dadj;
    std::uint64_t nodes = 0;

    FactorEnumerator(const FiniteSystem& d, const FiniteSystem& c, const EnumCaps& cp)
        : dom(d), cod(c), caps(cp), dadj(d.rel()) {}

    void budget() {
        if (++nodes > caps.max_nodes)
            fail(errc::resource, "factor enumeration: node budget " +
                                     std::to_string(caps.max_nodes) + " exceeded");
    }

    std::size_t edge_index(Vertex a, Vertex b) const {
        const auto& e = cod.edges();
        return static_cast<std::size_t>(std::lower_bound(e.begin(), e.end(), Edge{a, b}) - e.begin());
    }

    void run(const std::function<bool(const std::vector<Vertex>&)>& visit) {
        // weak components in least-vertex order
        std::vector<Vertex> comp(dom.size(), -1);
        std::vector<std::vector<Vertex>> members;
        for (Vertex root = 0; root < dom.size(); ++root) {
            if (comp[static_cast<std::size_t>(root)] != -1) continue;
            members.emplace_back();
            std::vector<Vertex> queue{root};
            comp[static_cast<std::size_t>(root)] = static_cast<Vertex>(members.size() - 1);
            for (std::size_t qi = 0; qi < queue.size(); ++qi) {
                Vertex v = queue[qi];
                members.back().push_back(v);
                for (Vertex w : dadj.out(v))
                    if (comp[static_cast<std::size_t>(w)] == -1) {
                        comp[static_cast<std::size_t>(w)] = comp[static_cast<std::size_t>(v)];
                        queue.push_back(w);
                    }
                for (Vertex w : dadj.in(v))
                    if (comp[static_cast<std::size_t>(w)] == -1) {
                        comp[static_cast<std::size_t>(w)] = comp[static_cast<std::size_t>(v)];
                        queue.push_back(w);
                    }
            }
            std::sort(members.back().begin(), members.back().end());
        }

        const std::size_t nedges = cod.edges().size();
        struct PerComponent {
            std::vector<Vertex> order;
            std::vector<std::vector<Vertex>> assignments; // values along order, lex over members
            std::vector<EdgeBitset> images;
        };
        std::vector<Vertex> all_cod(static_cast<std::size_t>(cod.size()));
        std::iota(all_cod.begin(), all_cod.end(), 0);
        std::vector<PerComponent> comps;
        for (const auto& m : members) {
            PerComponent pc;
            std::vector<char> in_order(dom.size(), 0);
            std::vector<Vertex> parent_of(dom.size(), -1);
            std::vector<char> parent_forward(dom.size(), 1);
            pc.order.push_back(m[0]);
            in_order[static_cast<std::size_t>(m[0])] = 1;
            for (std::size_t qi = 0; qi < pc.order.size(); ++qi) {
                Vertex v = pc.order[qi];
                for (Vertex w : dadj.out(v))
                    if (!in_order[static_cast<std::size_t>(w)]) {
                        in_order[static_cast<std::size_t>(w)] = 1;
                        parent_of[static_cast<std::size_t>(w)] = v;
                        parent_forward[static_cast<std::size_t>(w)] = 1;
                        pc.order.push_back(w);
                    }
                for (Vertex w : dadj.in(v))
                    if (!in_order[static_cast<std::size_t>(w)]) {
                        in_order[static_cast<std::size_t>(w)] = 1;
                        parent_of[static_cast<std::size_t>(w)] = v;
                        parent_forward[static_cast<std::size_t>(w)] = 0;
                        pc.order.push_back(w);
                    }
            }
            // DFS over the BFS order; non-root candidates follow the codomain
            // adjacency of the parent assignment
            Adjacency cadj(cod.rel());
            std::vector<Vertex> val(dom.size(), -1);
            std::vector<std::size_t> pick(pc.order.size(), 0);
            auto candidates = [&](Vertex v) -> std::span<const Vertex> {
                Vertex par = parent_of[static_cast<std::size_t>(v)];
                if (par == -1) return {all_cod};
                Vertex anchor = val[static_cast<std::size_t>(par)];
                return parent_forward[static_cast<std::size_t>(v)] ? cadj.out(anchor)
                                                                   : cadj.in(anchor);
            };
            auto has_cod_edge = [&](Vertex a, Vertex b) {
                for (Vertex s : cadj.out(a))
                    if (s == b) return true;
                return false;
            };
            auto valid = [&](Vertex v, Vertex c) {
                for (Vertex w : dadj.out(v)) {
                    Vertex fw = w == v ? c : val[static_cast<std::size_t>(w)];
                    if (fw != -1 && !has_cod_edge(c, fw)) return false;
                }
                for (Vertex w : dadj.in(v)) {
                    Vertex fw = w == v ? c : val[static_cast<std::size_t>(w)];
                    if (fw != -1 && !has_cod_edge(fw, c)) return false;
                }
                return true;
            };
            std::size_t depth = 0;
            while (true) {
                budget();
                if (depth == pc.order.size()) {
                    std::vector<Vertex> a;
                    a.reserve(pc.order.size());
                    EdgeBitset img(nedges);
                    for (Vertex v : pc.order) {
                        a.push_back(val[static_cast<std::size_t>(v)]);
                        for (Vertex w : dadj.out(v))
                            if (in_order[static_cast<std::size_t>(w)])
                                img.set(edge_index(val[static_cast<std::size_t>(v)],
                                                   val[static_cast<std::size_t>(w)]));
                    }
                    pc.assignments.push_back(std::move(a));
                    pc.images.push_back(std::move(img));
                    --depth;
                    val[static_cast<std::size_t>(pc.order[depth])] = -1;
                    ++pick[depth];
                    continue;
                }
                Vertex v = pc.order[depth];
                auto cands = candidates(v);
                bool advanced = false;
                while (pick[depth] < cands.size()) {
                    Vertex c = cands[pick[depth]];
                    budget();
                    if (valid(v, c)) {
                        val[static_cast<std::size_t>(v)] = c;
                        ++depth;
                        if (depth < pick.size()) pick[depth] = 0;
                        advanced = true;
                        break;
                    }
                    ++pick[depth];
                }
                if (advanced) continue;
                if (depth == 0) break;
                --depth;
                val[static_cast<std::size_t>(pc.order[depth])] = -1;
                ++pick[depth];
            }
            if (pc.assignments.empty()) return; // no homomorphism at all
            // lex order over the member-sorted value tuples
            std::vector<std::size_t> perm(pc.assignments.size());
            std::iota(perm.begin(), perm.end(), 0);
            std::vector<std::vector<Vertex>> keyed(pc.assignments.size());
            for (std::size_t i = 0; i < pc.assignments.size(); ++i) {
                std::vector<Vertex> key(m.size());
                for (std::size_t t = 0; t < pc.order.size(); ++t) {
                    auto where = std::lower_bound(m.begin(), m.end(), pc.order[t]) - m.begin();
                    key[static_cast<std::size_t>(where)] = pc.assignments[i][t];
                }
                keyed[i] = std::move(key);
            }
            std::sort(perm.begin(), perm.end(),
                      [&](std::size_t x, std::size_t y) { return keyed[x] < keyed[y]; });
            PerComponent sorted;
            sorted.order = pc.order;
            for (std::size_t i : perm) {
                sorted.assignments.push_back(std::move(pc.assignments[i]));
                sorted.images.push_back(std::move(pc.images[i]));
            }
            comps.push_back(std::move(sorted));
        }

        EdgeBitset full(nedges);
        for (std::size_t i = 0; i < nedges; ++i) full.set(i);

        // odometer over component assignments, last component fastest
        std::vector<std::size_t> choice(comps.size(), 0);
        std::vector<Vertex> table(dom.size(), -1);
        while (true) {
            budget();
            EdgeBitset covered(nedges);
            for (std::size_t ci = 0; ci < comps.size(); ++ci) covered.unite(comps[ci].images[choice[ci]]);
            if (covered.covers(full)) {
                for (std::size_t ci = 0; ci < comps.size(); ++ci)
                    for (std::size_t t = 0; t < comps[ci].order.size(); ++t)
                        table[static_cast<std::size_t>(comps[ci].order[t])] =
                            comps[ci].assignments[choice[ci]][t];
                if (!visit(table)) return;
            }
            std::size_t ci = comps.size();
            while (ci-- > 0) {
                if (++choice[ci] < comps[ci].assignments.size()) break;
                choice[ci] = 0;
                if (ci == 0) return;
            }
        }
    }
};

} // namespace

CounterexampleOutcome search_factoring_counterexample(const ShimomuraPrefix& p, int k, int n,
                                                      int m_max, const FactoringCaps& caps,
                                                      const EnumCaps& q1_caps) {
    if (p.level(k).size() > q1_caps.max_domain)
        fail(errc::resource, "counterexample search: level " + std::to_string(k) +
                                 " exceeds cap max_domain=" + std::to_string(q1_caps.max_domain));
    if (p.level(n).size() > q1_caps.max_codomain)
        fail(errc::resource, "counterexample search: level " + std::to_string(n) +
                                 " exceeds cap max_codomain=" + std::to_string(q1_caps.max_codomain));
    CounterexampleOutcome out;
    FactorEnumerator fe(p.level(k), p.level(n), q1_caps);
    fe.run([&](const std::vector<Vertex>& t) {
        ++out.tested;
        SystemMap q1(p.level_ptr(k), p.level_ptr(n), t);
        FactoringOutcome fo = check_factoring(p, q1, k, n, m_max, caps);
        if (fo.status == FactoringOutcome::Status::absent_within) {
            out.q1 = std::move(q1);
            out.details = std::move(fo);
            return false;
        }
        if (fo.status == FactoringOutcome::Status::resource)
            out.details.note = fo.note; // remembered, keeps searching
        return true;
    });
    return out;
}

HittingTable limit_hitting(const ShimomuraPrefix& p, int n, Vertex i, Vertex j, int horizon) {
    if (n < 1 || n > p.depth()) fail(errc::argument, "limit_hitting: level out of range");
    if (horizon < 1) fail(errc::argument, "limit_hitting: horizon must be positive");
    if (i < 0 || i >= p.level(n).size() || j < 0 || j >= p.level(n).size())
        fail(errc::argument, "limit_hitting: vertex out of range at level " + std::to_string(n));

    HittingTable out;
    out.n = n;
    out.i = i;
    out.j = j;
    out.horizon = horizon;
    out.depth = p.depth();
    out.status.assign(static_cast<std::size_t>(horizon), HittingStatus{true, p.depth()});

    for (int m = n; m <= p.depth(); ++m) {
        std::vector<Vertex> cmp = p.composite(m, n);
        const FiniteSystem& lvl = p.level(m);
        Adjacency adj(lvl.rel());
        std::vector<char> frontier(static_cast<std::size_t>(lvl.size()), 0), target(
            static_cast<std::size_t>(lvl.size()), 0);
        for (Vertex v = 0; v < lvl.size(); ++v) {
            if (cmp[static_cast<std::size_t>(v)] == i) frontier[static_cast<std::size_t>(v)] = 1;
            if (cmp[static_cast<std::size_t>(v)] == j) target[static_cast<std::size_t>(v)] = 1;
        }
        std::vector<char> next;
        for (int t = 1; t <= horizon; ++t) {
            next.assign(static_cast<std::size_t>(lvl.size()), 0);
            for (Vertex v = 0; v < lvl.size(); ++v)
                if (frontier[static_cast<std::size_t>(v)])
                    for (Vertex w : adj.out(v)) next[static_cast<std::size_t>(w)] = 1;
            frontier.swap(next);
            auto& st = out.status[static_cast<std::size_t>(t - 1)];
            if (!st.present) continue; // already certified absent at a shallower level
            bool present = false;
            for (Vertex v = 0; v < lvl.size() && !present; ++v)
                present = frontier[static_cast<std::size_t>(v)] && target[static_cast<std::size_t>(v)];
            if (!present) st = {false, m};
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// named builders

namespace {

long long checked_mul(long long a, long long b) {
    if (a != 0 && b > (1ll << 62) / a) fail(errc::resource, "prefix level size overflows");
    return a * b;
}

long long factorial_ll(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f = checked_mul(f, i);
    return f;
}

long long pow_ll(long long base, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r = checked_mul(r, base);
    return r;
}

std::string get_param(const std::map<std::string, std::string>& params, const std::string& key,
                      const std::string& fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

long get_long_param(const std::map<std::string, std::string>& params, const std::string& key,
                    long fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
        return std::stol(it->second);
    } catch (...) {
        fail(errc::argument, "parameter " + key + " is not an integer: " + it->second);
    }
}

// divisibility sequence: k_1 = 1, strictly increasing, k_n | k_{n+1}
std::vector<long long> divisibility_sequence(const std::map<std::string, std::string>& params,
                                             int depth) {
    std::string spec = get_param(params, "seq", "factorial");
    std::vector<long long> k;
    if (spec == "factorial") {
        for (int n = 1; n <= depth; ++n) k.push_back(factorial_ll(n));
    } else if (spec == "pow2") {
        for (int n = 1; n <= depth; ++n) k.push_back(pow_ll(2, n - 1));
    } else {
        std::size_t pos = 0;
        while (pos < spec.size()) {
            std::size_t comma = spec.find(',', pos);
            std::string tok = spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            try {
                k.push_back(std::stoll(tok));
            } catch (...) {
                fail(errc::argument, "bad entry in divisibility sequence: " + tok);
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (static_cast<int>(k.size()) < depth)
            fail(errc::argument, "divisibility sequence shorter than the requested depth");
        k.resize(static_cast<std::size_t>(depth));
    }
    if (k.empty() || k[0] != 1) fail(errc::argument, "divisibility sequence must start at 1");
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
        if (k[i + 1] <= k[i]) fail(errc::argument, "divisibility sequence must be increasing");
        if (k[i + 1] % k[i] != 0)
            fail(errc::argument, "divisibility fails: " + std::to_string(k[i]) + " does not divide " +
                                     std::to_string(k[i + 1]));
    }
    return k;
}

std::vector<long> primes_upto_count(int count) {
    std::vector<long> primes;
    for (long x = 2; static_cast<int>(primes.size()) < count; ++x) {
        bool is_prime = true;
        for (long p : primes) {
            if (p * p > x) break;
            if (x % p == 0) {
                is_prime = false;
                break;
            }
        }
        if (is_prime) primes.push_back(x);
    }
    return primes;
}

std::shared_ptr<const FiniteSystem> trivial_system() {
    return std::make_shared<const FiniteSystem>(FiniteRelation(1, {{0, 0}}));
}

// dumbbell-tree geometry shared by thm_4_04 and thm_4_08_star
struct TreeGeometry {
    long long fact(int n) const { return factorial_ll(n); }
    DumbbellShape shape(int n) const { return {fact(n), pow_ll(2, n + 1), fact(n)}; }
    long long block(int n) const { return shape(n).vertex_count(); }
    long long copies(int n) const { return pow_ll(4, n - 1); }
    // 0-based special positions inside one dumbbell
    long long a_pos(int n) const { return fact(n) - 1; }
    long long e_pos(int n) const { return fact(n) + pow_ll(2, n) - 1; }
    long long b_pos(int n) const { return fact(n) + pow_ll(2, n + 1) - 1; }
};

// local bonding table of one child dumbbell onto its parent, by child slot
std::vector<Vertex> dumbbell_child_table(const TreeGeometry& g, int n, int slot) {
    DumbbellShape child = g.shape(n + 1), parent = g.shape(n);
    const long long pn = parent.n_in, pl = parent.l, pm = parent.m_out;
    const long long e_child = g.e_pos(n + 1);
    std::vector<Vertex> table(static_cast<std::size_t>(child.vertex_count()));
    auto mod = [](long long x, long long m) { return ((x % m) + m) % m; };
    if (slot == 2 || slot == 3) {
        // the whole parent dumbbell, midpoint to midpoint
        auto res = canonical_dumbbell_map(child, parent, e_child + 1, g.e_pos(n) + 1);
        if (!res.map) fail(errc::internal, "dumbbell tree: full child map missing");
        return res.map->table();
    }
    if (slot == 1) {
        // onto the parent in-loop, e_child -> a_parent
        for (long long x = 0; x < child.vertex_count(); ++x)
            table[static_cast<std::size_t>(x)] =
                static_cast<Vertex>(mod(g.a_pos(n) + (x - e_child), pn));
        return table;
    }
    // slot 4: onto the parent out-loop, e_child -> b_parent
    const long long start = pn + pl - 1;
    for (long long x = 0; x < child.vertex_count(); ++x)
        table[static_cast<std::size_t>(x)] =
            static_cast<Vertex>(start + mod((g.b_pos(n) - start) + (x - e_child), pm));
    return table;
}

// disjoint copies laid out block after block, optionally after a fixed point
FiniteRelation copies_with_point(const FiniteRelation& one, long long count, bool point) {
    const long long block = one.size();
    const long long off = point ? 1 : 0;
    std::vector<Edge> e;
    e.reserve(static_cast<std::size_t>(count) * one.edges().size() + (point ? 1 : 0));
    if (point) e.emplace_back(0, 0);
    for (long long c = 0; c < count; ++c)
        for (auto [a, b] : one.edges())
            e.emplace_back(static_cast<Vertex>(off + c * block + a),
                           static_cast<Vertex>(off + c * block + b));
    return FiniteRelation(static_cast<Vertex>(off + count * block), std::move(e));
}

ShimomuraPrefix build_dumbbell_tree(int depth, bool star, const BuildLimits& limits,
                                    std::map<std::string, std::string> meta) {
    TreeGeometry g;
    std::vector<std::shared_ptr<const FiniteSystem>> levels{trivial_system()};
    for (int n = 2; n <= depth; ++n) {
        long long total = checked_mul(g.copies(n), g.block(n)) + (star ? 1 : 0);
        if (total > limits.max_level_vertices)
            fail(errc::resource, "level " + std::to_string(n) + " would have " +
                                     std::to_string(total) + " vertices, above the cap of " +
                                     std::to_string(limits.max_level_vertices));
        levels.push_back(std::make_shared<const FiniteSystem>(
            FiniteSystem(copies_with_point(dumbbell(g.shape(n)).rel(), g.copies(n), star))));
    }
    std::vector<SystemMap> bonding;
    // level 2 -> 1 collapses everything
    bonding.emplace_back(levels[1], levels[0],
                         std::vector<Vertex>(static_cast<std::size_t>(levels[1]->size()), 0));
    for (int n = 2; n + 1 <= depth; ++n) {
        const long long child_block = g.block(n + 1), parent_block = g.block(n);
        const long long off = star ? 1 : 0;
        std::vector<Vertex> table(static_cast<std::size_t>(levels[static_cast<std::size_t>(n)]->size()));
        if (star) table[0] = 0; // star point maps to star point
        std::vector<std::vector<Vertex>> slot_tables;
        for (int slot = 1; slot <= 4; ++slot) slot_tables.push_back(dumbbell_child_table(g, n, slot));
        for (long long i = 1; i <= g.copies(n + 1); ++i) {
            long long j = (i - 1) / 4 + 1;
            int slot = static_cast<int>((i - 1) % 4) + 1;
            long long cbase = off + (i - 1) * child_block;
            long long pbase = off + (j - 1) * parent_block;
            if (star && i == 2) {
                for (long long x = 0; x < child_block; ++x)
                    table[static_cast<std::size_t>(cbase + x)] = 0; // redirected to the star
                continue;
            }
            const auto& local = slot_tables[static_cast<std::size_t>(slot - 1)];
            for (long long x = 0; x < child_block; ++x)
                table[static_cast<std::size_t>(cbase + x)] =
                    static_cast<Vertex>(pbase + local[static_cast<std::size_t>(x)]);
        }
        bonding.emplace_back(levels[static_cast<std::size_t>(n)], levels[static_cast<std::size_t>(n - 1)],
                             std::move(table));
    }
    return ShimomuraPrefix(std::move(levels), std::move(bonding), std::move(meta));
}

ShimomuraPrefix build_loop_doubling(int depth, const std::vector<long long>& k, bool star,
                                    const BuildLimits& limits,
                                    std::map<std::string, std::string> meta) {
    std::vector<std::shared_ptr<const FiniteSystem>> levels{trivial_system()};
    for (int n = 2; n <= depth; ++n) {
        long long copies = pow_ll(2, n - 1);
        long long total = checked_mul(copies, k[static_cast<std::size_t>(n - 1)]) + (star ? 1 : 0);
        if (total > limits.max_level_vertices)
            fail(errc::resource, "level " + std::to_string(n) + " would have " +
                                     std::to_string(total) + " vertices, above the cap");
        levels.push_back(std::make_shared<const FiniteSystem>(FiniteSystem(
            copies_with_point(loop(k[static_cast<std::size_t>(n - 1)]).rel(), copies, star))));
    }
    std::vector<SystemMap> bonding;
    bonding.emplace_back(levels[1], levels[0],
                         std::vector<Vertex>(static_cast<std::size_t>(levels[1]->size()), 0));
    for (int n = 2; n + 1 <= depth; ++n) {
        long long kc = k[static_cast<std::size_t>(n)], kp = k[static_cast<std::size_t>(n - 1)];
        long long parents = pow_ll(2, n - 1), children = pow_ll(2, n);
        long long off = star ? 1 : 0;
        std::vector<Vertex> table(static_cast<std::size_t>(levels[static_cast<std::size_t>(n)]->size()));
        if (star) table[0] = 0;
        for (long long i = 1; i <= children; ++i) {
            long long cbase = off + (i - 1) * kc;
            if (star && i == 1) {
                for (long long t = 0; t < kc; ++t) table[static_cast<std::size_t>(cbase + t)] = 0;
                continue;
            }
            long long j = (i - 1) % parents + 1;
            long long pbase = off + (j - 1) * kp;
            for (long long t = 0; t < kc; ++t)
                table[static_cast<std::size_t>(cbase + t)] = static_cast<Vertex>(pbase + t % kp);
        }
        bonding.emplace_back(levels[static_cast<std::size_t>(n)], levels[static_cast<std::size_t>(n - 1)],
                             std::move(table));
    }
    return ShimomuraPrefix(std::move(levels), std::move(bonding), std::move(meta));
}

ShimomuraPrefix build_adding_machine(int depth, const std::vector<long long>& k,
                                     const BuildLimits& limits,
                                     std::map<std::string, std::string> meta) {
    std::vector<std::shared_ptr<const FiniteSystem>> levels;
    for (int n = 1; n <= depth; ++n) {
        if (k[static_cast<std::size_t>(n - 1)] > limits.max_level_vertices)
            fail(errc::resource, "adding machine level exceeds the vertex cap");
        levels.push_back(std::make_shared<const FiniteSystem>(loop(k[static_cast<std::size_t>(n - 1)])));
    }
    std::vector<SystemMap> bonding;
    for (int n = 1; n < depth; ++n) {
        long long kc = k[static_cast<std::size_t>(n)], kp = k[static_cast<std::size_t>(n - 1)];
        std::vector<Vertex> table(static_cast<std::size_t>(kc));
        for (long long t = 0; t < kc; ++t) table[static_cast<std::size_t>(t)] = static_cast<Vertex>(t % kp);
        bonding.emplace_back(levels[static_cast<std::size_t>(n)], levels[static_cast<std::size_t>(n - 1)],
                             std::move(table));
    }
    return ShimomuraPrefix(std::move(levels), std::move(bonding), std::move(meta));
}

ShimomuraPrefix build_thread_systems(int depth, const BuildLimits& limits,
                                     std::map<std::string, std::string> meta) {
    std::vector<std::shared_ptr<const FiniteSystem>> levels{trivial_system()};
    auto thread_len = [](int n) { return pow_ll(2, n + 1); };
    auto thread_count = [](int n) { return pow_ll(2, n); };
    for (int n = 2; n <= depth; ++n) {
        long long len = thread_len(n), cnt = thread_count(n);
        long long total = checked_mul(len, cnt) + 2;
        if (total > limits.max_level_vertices)
            fail(errc::resource, "thread level exceeds the vertex cap");
        // vertex 0 = left sentinel, threads consecutive, last vertex = right sentinel
        auto tv = [&](long long thread, long long i) { return 1 + thread * len + (i - 1); };
        const long long right = 1 + cnt * len;
        std::vector<Edge> e;
        e.emplace_back(0, 0);
        for (long long t = 0; t < cnt; ++t) {
            e.emplace_back(0, static_cast<Vertex>(tv(t, 1)));
            for (long long i = 1; i < len; ++i)
                e.emplace_back(static_cast<Vertex>(tv(t, i)), static_cast<Vertex>(tv(t, i + 1)));
            e.emplace_back(static_cast<Vertex>(tv(t, len)), static_cast<Vertex>(right));
        }
        e.emplace_back(static_cast<Vertex>(right), static_cast<Vertex>(right));
        levels.push_back(std::make_shared<const FiniteSystem>(FiniteSystem(
            FiniteRelation(static_cast<Vertex>(total), std::move(e)))));
    }
    std::vector<SystemMap> bonding;
    bonding.emplace_back(levels[1], levels[0],
                         std::vector<Vertex>(static_cast<std::size_t>(levels[1]->size()), 0));
    for (int n = 2; n + 1 <= depth; ++n) {
        long long clen = thread_len(n + 1), ccnt = thread_count(n + 1);
        long long plen = thread_len(n);
        long long pright = 1 + thread_count(n) * plen;
        std::vector<Vertex> table(static_cast<std::size_t>(levels[static_cast<std::size_t>(n)]->size()));
        table[0] = 0;
        table[static_cast<std::size_t>(1 + ccnt * clen)] = static_cast<Vertex>(pright);
        const long long half = pow_ll(2, n); // 2^n positions gathered at each sentinel
        for (long long t = 0; t < ccnt; ++t) {
            long long pt = t / 2; // drop the last letter of the thread word
            for (long long i = 1; i <= clen; ++i) {
                long long v = 1 + t * clen + (i - 1);
                if (i <= half)
                    table[static_cast<std::size_t>(v)] = 0;
                else if (i <= half + plen)
                    table[static_cast<std::size_t>(v)] = static_cast<Vertex>(1 + pt * plen + (i - half - 1));
                else
                    table[static_cast<std::size_t>(v)] = static_cast<Vertex>(pright);
            }
        }
        bonding.emplace_back(levels[static_cast<std::size_t>(n)], levels[static_cast<std::size_t>(n - 1)],
                             std::move(table));
    }
    return ShimomuraPrefix(std::move(levels), std::move(bonding), std::move(meta));
}

ShimomuraPrefix build_wedge_sequence(int depth, long a, long b, long c, long d,
                                     const BuildLimits& limits,
                                     std::map<std::string, std::string> meta) {
    auto pairs = wedge_pair_sequence(a, b, c, d, depth); // (M_n, N_n)
    std::vector<std::shared_ptr<const FiniteSystem>> levels;
    for (auto [m, n] : pairs) {
        if (n + m - 1 > limits.max_level_vertices) fail(errc::resource, "wedge level exceeds the cap");
        levels.push_back(std::make_shared<const FiniteSystem>(wedge(n, m)));
    }
    // cyclic walks around a wedge, anchored at the wedge point N-1 (0-based)
    auto in_turn = [](long n, long t) { return t == 0 ? n - 1 : t - 1; };
    auto out_turn = [](long n, long t) { return t == 0 ? n - 1 : n - 1 + t; };
    std::vector<SystemMap> bonding;
    for (int lvl = 1; lvl < depth; ++lvl) {
        long pm = pairs[static_cast<std::size_t>(lvl - 1)].first;
        long pn = pairs[static_cast<std::size_t>(lvl - 1)].second;
        long cm = pairs[static_cast<std::size_t>(lvl)].first;
        long cn = pairs[static_cast<std::size_t>(lvl)].second;
        std::vector<Vertex> table(static_cast<std::size_t>(cn + cm - 1));
        // each child loop starts around the parent in-loop and ends around the
        // parent out-loop, which is what makes the lift +- directional
        auto walk = [&](long turns_in, long t) {
            if (t < turns_in * pn) return in_turn(pn, t % pn);
            return out_turn(pn, (t - turns_in * pn) % pm);
        };
        for (long t = 0; t < cn; ++t) {
            long v = t == 0 ? cn - 1 : t - 1; // child in-loop: d in-turns then c out-turns
            table[static_cast<std::size_t>(v)] = static_cast<Vertex>(walk(d, t));
        }
        for (long t = 0; t < cm; ++t) {
            long v = t == 0 ? cn - 1 : cn - 1 + t; // child out-loop: b in-turns then a out-turns
            table[static_cast<std::size_t>(v)] = static_cast<Vertex>(walk(b, t));
        }
        bonding.emplace_back(levels[static_cast<std::size_t>(lvl)], levels[static_cast<std::size_t>(lvl - 1)],
                             std::move(table));
    }
    return ShimomuraPrefix(std::move(levels), std::move(bonding), std::move(meta));
}

ShimomuraPrefix build_pointed_wrapping(int depth, const std::string& word, const BuildLimits& limits,
                                       std::map<std::string, std::string> meta) {
    SemigroupWord w(word);
    if (!w.in_S_prime())
        fail(errc::argument, "wrap word must start and end with e and contain two L's");
    std::vector<long> sizes{1};
    while (static_cast<int>(sizes.size()) < depth) sizes.push_back(w.ell(sizes.back()));
    for (long s : sizes)
        if (s > limits.max_level_vertices) fail(errc::resource, "pointed level exceeds the cap");
    std::vector<std::shared_ptr<const FiniteSystem>> levels;
    for (long s : sizes) levels.push_back(std::make_shared<const FiniteSystem>(pointed_loop(s)));
    std::vector<SystemMap> bonding;
    for (int n = 1; n < depth; ++n)
        bonding.emplace_back(levels[static_cast<std::size_t>(n)], levels[static_cast<std::size_t>(n - 1)],
                             word_map_table(w, sizes[static_cast<std::size_t>(n - 1)]));
    return ShimomuraPrefix(std::move(levels), std::move(bonding), std::move(meta));
}

ShimomuraPrefix build_example_3(int depth, long K, const BuildLimits& limits,
                                std::map<std::string, std::string> meta) {
    if (K < 1) fail(errc::argument, "example 3 needs K >= 1");
    std::vector<long> primes = primes_upto_count(static_cast<int>(K * depth));
    std::vector<std::shared_ptr<const FiniteSystem>> levels{trivial_system()};
    std::vector<std::vector<long long>> starts(static_cast<std::size_t>(depth) + 1);
    for (int n = 2; n <= depth; ++n) {
        long long total = K;
        auto& st = starts[static_cast<std::size_t>(n)];
        std::vector<Edge> e;
        for (long j = 0; j < K; ++j) e.emplace_back(static_cast<Vertex>(j), static_cast<Vertex>(j));
        for (long i = 1; i <= K * n; ++i) {
            long long len = pow_ll(primes[static_cast<std::size_t>(i - 1)], n);
            st.push_back(total);
            if (total + len > limits.max_level_vertices)
                fail(errc::resource, "example 3 level " + std::to_string(n) + " would need " +
                                         std::to_string(total + len) + "+ vertices, above the cap of " +
                                         std::to_string(limits.max_level_vertices));
            for (long long t = 0; t + 1 < len; ++t)
                e.emplace_back(static_cast<Vertex>(total + t), static_cast<Vertex>(total + t + 1));
            e.emplace_back(static_cast<Vertex>(total + len - 1), static_cast<Vertex>(total));
            total += len;
        }
        levels.push_back(std::make_shared<const FiniteSystem>(FiniteSystem(
            FiniteRelation(static_cast<Vertex>(total), std::move(e)))));
    }
    std::vector<SystemMap> bonding;
    bonding.emplace_back(levels[1], levels[0],
                         std::vector<Vertex>(static_cast<std::size_t>(levels[1]->size()), 0));
    for (int n = 2; n + 1 <= depth; ++n) {
        std::vector<Vertex> table(static_cast<std::size_t>(levels[static_cast<std::size_t>(n)]->size()));
        for (long j = 0; j < K; ++j) table[static_cast<std::size_t>(j)] = 0; // identity block to point 1
        for (long i = 1; i <= K * (n + 1); ++i) {
            long long len = pow_ll(primes[static_cast<std::size_t>(i - 1)], n + 1);
            long long cbase = starts[static_cast<std::size_t>(n + 1)][static_cast<std::size_t>(i - 1)];
            if (i <= K * n) {
                long long plen = pow_ll(primes[static_cast<std::size_t>(i - 1)], n);
                long long pbase = starts[static_cast<std::size_t>(n)][static_cast<std::size_t>(i - 1)];
                for (long long t = 0; t < len; ++t)
                    table[static_cast<std::size_t>(cbase + t)] = static_cast<Vertex>(pbase + t % plen);
            } else {
                long j = i - K * n; // newborn loop lands on identity point j
                for (long long t = 0; t < len; ++t)
                    table[static_cast<std::size_t>(cbase + t)] = static_cast<Vertex>(j - 1);
            }
        }
        bonding.emplace_back(levels[static_cast<std::size_t>(n)], levels[static_cast<std::size_t>(n - 1)],
                             std::move(table));
    }
    return ShimomuraPrefix(std::move(levels), std::move(bonding), std::move(meta));
}

} // namespace

NamedPrefix named_prefix_from_string(const std::string& name) {
    if (name == "THM_4_04") return NamedPrefix::thm_4_04;
    if (name == "PROP_4_05") return NamedPrefix::prop_4_05;
    if (name == "THM_4_08_STAR") return NamedPrefix::thm_4_08_star;
    if (name == "THM_4_09") return NamedPrefix::thm_4_09;
    if (name == "THM_4_10") return NamedPrefix::thm_4_10;
    if (name == "THM_4_15") return NamedPrefix::thm_4_15;
    if (name == "THM_4_16") return NamedPrefix::thm_4_16;
    if (name == "EXAMPLE_3") return NamedPrefix::example_3;
    fail(errc::argument, "unknown prefix builder: " + name);
}

std::string named_prefix_to_string(NamedPrefix name) {
    switch (name) {
    case NamedPrefix::thm_4_04: return "THM_4_04";
    case NamedPrefix::prop_4_05: return "PROP_4_05";
    case NamedPrefix::thm_4_08_star: return "THM_4_08_STAR";
    case NamedPrefix::thm_4_09: return "THM_4_09";
    case NamedPrefix::thm_4_10: return "THM_4_10";
    case NamedPrefix::thm_4_15: return "THM_4_15";
    case NamedPrefix::thm_4_16: return "THM_4_16";
    case NamedPrefix::example_3: return "EXAMPLE_3";
    }
    fail(errc::argument, "unknown prefix builder");
}

std::int64_t named_prefix_level_size(NamedPrefix name, const std::map<std::string, std::string>& params,
                                     int level) {
    if (level < 1) fail(errc::argument, "level must be positive");
    TreeGeometry g;
    switch (name) {
    case NamedPrefix::thm_4_04:
        return level == 1 ? 1 : checked_mul(g.copies(level), g.block(level));
    case NamedPrefix::thm_4_08_star:
        return level == 1 ? 1 : checked_mul(g.copies(level), g.block(level)) + 1;
    case NamedPrefix::prop_4_05:
        return level == 1 ? 1 : checked_mul(pow_ll(2, level + 1), pow_ll(2, level)) + 2;
    case NamedPrefix::thm_4_09: {
        auto k = divisibility_sequence(params, level);
        bool star = get_long_param(params, "star", 0) != 0;
        return level == 1 ? 1
                          : checked_mul(pow_ll(2, level - 1), k[static_cast<std::size_t>(level - 1)]) +
                                (star ? 1 : 0);
    }
    case NamedPrefix::thm_4_10: {
        auto k = divisibility_sequence(params, level);
        return k[static_cast<std::size_t>(level - 1)];
    }
    case NamedPrefix::thm_4_15: {
        auto pairs = wedge_pair_sequence(get_long_param(params, "a", 1), get_long_param(params, "b", 1),
                                         get_long_param(params, "c", 1), get_long_param(params, "d", 2),
                                         level);
        return pairs.back().first + pairs.back().second - 1;
    }
    case NamedPrefix::thm_4_16: {
        SemigroupWord w(get_param(params, "word", "eLLee"));
        long s = 1;
        for (int n = 1; n < level; ++n) s = w.ell(s);
        return s;
    }
    case NamedPrefix::example_3: {
        long K = get_long_param(params, "K", 1);
        if (level == 1) return 1;
        auto primes = primes_upto_count(static_cast<int>(K * level));
        long long total = K;
        for (long i = 1; i <= K * level; ++i)
            total += pow_ll(primes[static_cast<std::size_t>(i - 1)], level);
        return total;
    }
    }
    fail(errc::argument, "unknown prefix builder");
}

ShimomuraPrefix build_named_prefix(NamedPrefix name, const std::map<std::string, std::string>& params,
                                   int depth, const BuildLimits& limits) {
    if (depth < 2) fail(errc::argument, "prefix depth must be at least 2");
    std::map<std::string, std::string> meta = params;
    meta["name"] = named_prefix_to_string(name);
    meta["depth"] = std::to_string(depth);
    switch (name) {
    case NamedPrefix::thm_4_04: return build_dumbbell_tree(depth, false, limits, std::move(meta));
    case NamedPrefix::thm_4_08_star: return build_dumbbell_tree(depth, true, limits, std::move(meta));
    case NamedPrefix::prop_4_05: return build_thread_systems(depth, limits, std::move(meta));
    case NamedPrefix::thm_4_09:
        return build_loop_doubling(depth, divisibility_sequence(params, depth),
                                   get_long_param(params, "star", 0) != 0, limits, std::move(meta));
    case NamedPrefix::thm_4_10:
        return build_adding_machine(depth, divisibility_sequence(params, depth), limits, std::move(meta));
    case NamedPrefix::thm_4_15:
        return build_wedge_sequence(depth, get_long_param(params, "a", 1), get_long_param(params, "b", 1),
                                    get_long_param(params, "c", 1), get_long_param(params, "d", 2),
                                    limits, std::move(meta));
    case NamedPrefix::thm_4_16:
        return build_pointed_wrapping(depth, get_param(params, "word", "eLLee"), limits, std::move(meta));
    case NamedPrefix::example_3:
        return build_example_3(depth, get_long_param(params, "K", 1), limits, std::move(meta));
    }
    fail(errc::argument, "unknown prefix builder");
}

} // namespace findyn
