#include "findyn/system_map.hpp"

#include <algorithm>
#include <numeric>

#include "findyn/constructions.hpp"

namespace findyn {

MapCheck check_map_table(const FiniteSystem& dom, const FiniteSystem& cod,
                         const std::vector<Vertex>& table) {
    if (static_cast<Vertex>(table.size()) != dom.size())
        fail(errc::argument, "map table has " + std::to_string(table.size()) + " entries for a " +
                                 std::to_string(dom.size()) + "-vertex domain");
    for (Vertex v : table)
        if (v < 0 || v >= cod.size()) fail(errc::argument, "map table value out of codomain range");
    MapCheck out;
    out.homomorphism = true;
    for (auto [a, b] : dom.edges()) {
        if (!cod.rel().has_edge(table[a], table[b])) {
            out.homomorphism = false;
            out.witness = Edge{a, b};
            return out;
        }
    }
    std::vector<char> hit(cod.size(), 0);
    for (Vertex v : table) hit[v] = 1;
    out.surjective = std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
    if (out.surjective) {
        // exact edge image: every codomain edge is hit by some domain edge
        std::vector<Edge> image;
        image.reserve(dom.edges().size());
        for (auto [a, b] : dom.edges()) image.emplace_back(table[a], table[b]);
        std::sort(image.begin(), image.end());
        image.erase(std::unique(image.begin(), image.end()), image.end());
        out.factor = image == cod.edges();
    }
    return out;
}

SystemMap::SystemMap(std::shared_ptr<const FiniteSystem> dom, std::shared_ptr<const FiniteSystem> cod,
                     std::vector<Vertex> table)
    : dom_(std::move(dom)), cod_(std::move(cod)), table_(std::move(table)) {
    MapCheck c = check_map_table(*dom_, *cod_, table_);
    if (!c.homomorphism) {
        auto [a, b] = *c.witness;
        fail(errc::validation, "not a system map: edge (" + dom_->rel().label(a) + "," +
                                   dom_->rel().label(b) + ") lands outside the codomain relation");
    }
    surjective_ = c.surjective;
    factor_ = c.factor;
}

SystemMap::SystemMap(FiniteSystem dom, FiniteSystem cod, std::vector<Vertex> table)
    : SystemMap(std::make_shared<const FiniteSystem>(std::move(dom)),
                std::make_shared<const FiniteSystem>(std::move(cod)), std::move(table)) {}

SystemMap compose_maps(const SystemMap& outer, const SystemMap& inner) {
    if (inner.codomain() != outer.domain())
        fail(errc::dimension, "compose_maps: inner codomain differs from outer domain");
    std::vector<Vertex> t(inner.table().size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = outer.table()[inner.table()[i]];
    return SystemMap(inner.domain_ptr(), outer.codomain_ptr(), std::move(t));
}

SystemMap identity_map(std::shared_ptr<const FiniteSystem> s) {
    std::vector<Vertex> t(s->size());
    std::iota(t.begin(), t.end(), 0);
    return SystemMap(s, s, std::move(t));
}

MapCheck validate_map(const SystemMap& m) { return check_map_table(m.domain(), m.codomain(), m.table()); }

std::pair<std::shared_ptr<const FiniteSystem>, SystemMap>
quotient_by_partition(std::shared_ptr<const FiniteSystem> s,
                      const std::vector<std::vector<Vertex>>& blocks) {
    std::vector<Vertex> block_of(s->size(), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) fail(errc::argument, "quotient: empty block");
        for (Vertex v : blocks[b]) {
            if (v < 0 || v >= s->size()) fail(errc::argument, "quotient: vertex out of range");
            if (block_of[v] != -1) fail(errc::argument, "quotient: blocks overlap");
            block_of[v] = static_cast<Vertex>(b);
        }
    }
    for (Vertex v = 0; v < s->size(); ++v)
        if (block_of[v] == -1) fail(errc::argument, "quotient: blocks do not cover vertex " +
                                                        s->rel().label(v));
    std::vector<Edge> e;
    e.reserve(s->edges().size());
    for (auto [a, b] : s->edges()) e.emplace_back(block_of[a], block_of[b]);
    auto q = std::make_shared<const FiniteSystem>(
        FiniteRelation(static_cast<Vertex>(blocks.size()), std::move(e)));
    return {q, SystemMap(s, q, std::move(block_of))};
}

namespace {

struct Enumerator {
    const FiniteSystem& dom;
    const FiniteSystem& cod;
    MapMode mode;
    const EnumCaps& caps;
    const std::function<bool(const std::vector<Vertex>&)>& visit;

    Adjacency dadj, cadj;
    std::vector<Vertex> table;
    std::vector<int> image_count; // per codomain vertex, how many preimages so far
    Vertex missing;               // codomain vertices not yet hit
    std::uint64_t nodes = 0;
    bool stopped = false;

    Enumerator(const FiniteSystem& d, const FiniteSystem& c, MapMode m, const EnumCaps& cp,
               const std::function<bool(const std::vector<Vertex>&)>& vi)
        : dom(d), cod(c), mode(m), caps(cp), visit(vi), dadj(d.rel()), cadj(c.rel()),
          table(d.size(), -1), image_count(c.size(), 0), missing(c.size()) {}

    bool consistent(Vertex v, Vertex img) const {
        for (Vertex w : dadj.out(v)) {
            Vertex fw = w == v ? img : table[w];
            if (fw != -1 && !cod.rel().has_edge(img, fw)) return false;
        }
        for (Vertex w : dadj.in(v)) {
            Vertex fw = w == v ? img : table[w];
            if (fw != -1 && !cod.rel().has_edge(fw, img)) return false;
        }
        return true;
    }

    void run(Vertex v) {
        if (stopped) return;
        if (++nodes > caps.max_nodes)
            fail(errc::resource,
                 "enumerate_maps: node budget " + std::to_string(caps.max_nodes) + " exceeded");
        if (v == dom.size()) {
            if (mode != MapMode::all && missing > 0) return;
            if (mode == MapMode::factor) {
                std::vector<Edge> image;
                image.reserve(dom.edges().size());
                for (auto [a, b] : dom.edges()) image.emplace_back(table[a], table[b]);
                std::sort(image.begin(), image.end());
                image.erase(std::unique(image.begin(), image.end()), image.end());
                if (image != cod.edges()) return;
            }
            if (!visit(table)) stopped = true;
            return;
        }
        // surjectivity prune: the rest of the domain must be able to hit
        // every still-missing codomain vertex
        if (mode != MapMode::all && missing > dom.size() - v) return;
        for (Vertex img = 0; img < cod.size(); ++img) {
            if (!consistent(v, img)) continue;
            table[v] = img;
            if (image_count[img]++ == 0) --missing;
            run(v + 1);
            if (--image_count[img] == 0) ++missing;
            table[v] = -1;
            if (stopped) return;
        }
    }
};

} // namespace

void enumerate_maps_visit(const FiniteSystem& dom, const FiniteSystem& cod, MapMode mode,
                          const EnumCaps& caps,
                          const std::function<bool(const std::vector<Vertex>&)>& visit) {
    if (dom.size() > caps.max_domain)
        fail(errc::resource, "enumerate_maps: domain size " + std::to_string(dom.size()) +
                                 " exceeds cap max_domain=" + std::to_string(caps.max_domain));
    if (cod.size() > caps.max_codomain)
        fail(errc::resource, "enumerate_maps: codomain size " + std::to_string(cod.size()) +
                                 " exceeds cap max_codomain=" + std::to_string(caps.max_codomain));
    Enumerator e(dom, cod, mode, caps, visit);
    e.run(0);
}

std::vector<SystemMap> enumerate_maps(std::shared_ptr<const FiniteSystem> dom,
                                      std::shared_ptr<const FiniteSystem> cod, MapMode mode,
                                      const EnumCaps& caps) {
    std::vector<SystemMap> out;
    enumerate_maps_visit(*dom, *cod, mode, caps, [&](const std::vector<Vertex>& t) {
        out.emplace_back(dom, cod, t);
        return true;
    });
    return out;
}

LiftVerdict check_lift(const SystemMap& m) {
    LiftVerdict v;
    const auto& dom = m.domain();
    const auto& cod = m.codomain();
    bool factor = m.factor();
    if (!factor) v.failures.push_back("(i) not a factor map");

    // (ii) pi o phi1 single-valued: successors of any vertex share an image
    Adjacency adj(dom.rel());
    bool forward_ok = true;
    for (Vertex x = 0; x < dom.size() && forward_ok; ++x) {
        auto succ = adj.out(x);
        for (std::size_t i = 1; i < succ.size(); ++i)
            if (m(succ[i]) != m(succ[0])) {
                forward_ok = false;
                v.failures.push_back("(ii) pi o phi not single-valued at vertex " +
                                     dom.rel().label(x));
                break;
            }
    }

    // (iii) every fiber has at least two elements
    std::vector<int> fiber(cod.size(), 0);
    for (Vertex x = 0; x < dom.size(); ++x) ++fiber[m(x)];
    bool fibers_ok = true;
    for (Vertex y = 0; y < cod.size(); ++y)
        if (fiber[y] < 2) {
            fibers_ok = false;
            v.failures.push_back("(iii) fiber of " + cod.rel().label(y) + " has " +
                                 std::to_string(fiber[y]) + " element(s)");
            break;
        }

    bool backward_ok = true;
    for (Vertex x = 0; x < dom.size() && backward_ok; ++x) {
        auto pred = adj.in(x);
        for (std::size_t i = 1; i < pred.size(); ++i)
            if (m(pred[i]) != m(pred[0])) {
                backward_ok = false;
                v.failures.push_back("(iv) pi o phi^{-1} not single-valued at vertex " +
                                     dom.rel().label(x));
                break;
            }
    }

    v.is_plus = factor && forward_ok && fibers_ok;
    v.is_pm = v.is_plus && backward_ok;
    return v;
}

namespace {

// Integer potentials along an undirected spanning forest; every edge (a,b)
// wants pot[b] - pot[a] = 1, and the gcd of the violations is the largest
// consistent cyclic colouring modulus.
struct Colouring {
    std::vector<long> pot;
    std::vector<Vertex> component; // component id per vertex, by discovery
    std::vector<Vertex> roots;     // lowest-index vertex per component
    long g = 0;                    // 0 means unconstrained (cannot happen for surjective)
};

Colouring colour_potentials(const FiniteSystem& s) {
    Adjacency adj(s.rel());
    Colouring c;
    c.pot.assign(s.size(), 0);
    c.component.assign(s.size(), -1);
    std::vector<Vertex> queue;
    Vertex comp = 0;
    for (Vertex root = 0; root < s.size(); ++root) {
        if (c.component[root] != -1) continue;
        c.roots.push_back(root);
        c.component[root] = comp;
        c.pot[root] = 0;
        queue.assign(1, root);
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            Vertex x = queue[qi];
            for (Vertex y : adj.out(x)) {
                if (c.component[y] == -1) {
                    c.component[y] = comp;
                    c.pot[y] = c.pot[x] + 1;
                    queue.push_back(y);
                }
            }
            for (Vertex y : adj.in(x)) {
                if (c.component[y] == -1) {
                    c.component[y] = comp;
                    c.pot[y] = c.pot[x] - 1;
                    queue.push_back(y);
                }
            }
        }
        ++comp;
    }
    for (auto [a, b] : s.edges()) {
        long d = c.pot[b] - c.pot[a] - 1;
        c.g = std::gcd(c.g, d < 0 ? -d : d);
    }
    return c;
}

} // namespace

long loop_period(const FiniteSystem& s) {
    Colouring c = colour_potentials(s);
    return c.g == 0 ? 1 : c.g; // surjective systems always close a cycle, g >= 1
}

LoopFactorResult factors_onto_loop(std::shared_ptr<const FiniteSystem> s, long n) {
    if (n < 1) fail(errc::argument, "factors_onto_loop: loop length must be positive");
    Colouring c = colour_potentials(*s);
    long g = c.g == 0 ? 1 : c.g;
    if (g % n != 0) {
        LoopFactorResult r;
        r.certificate = "no cyclic " + std::to_string(n) + "-colouring: colour gcd is " +
                        std::to_string(g);
        return r;
    }
    // component phases: lowest-index vertex of each component goes to loop
    // vertex 1 (greedy lowest-index-first)
    std::vector<Vertex> table(s->size());
    for (Vertex v = 0; v < s->size(); ++v) {
        long base = c.pot[c.roots[c.component[v]]];
        long phase = ((c.pot[v] - base) % n + n) % n;
        table[v] = static_cast<Vertex>(phase);
    }
    auto target = std::make_shared<const FiniteSystem>(loop(n));
    LoopFactorResult r;
    r.map = SystemMap(std::move(s), target, std::move(table));
    return r;
}

} // namespace findyn
