#include "findyn/constructions.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

namespace findyn {

void DumbbellShape::validate() const {
    if (n_in < 1 || m_out < 1 || l < 0)
        fail(errc::argument, "dumbbell shape needs loop lengths >= 1 and path length >= 0");
}

FiniteSystem loop(long n) {
    if (n < 1) fail(errc::argument, "loop length must be positive");
    std::vector<Edge> e;
    e.reserve(n);
    for (long i = 0; i + 1 < n; ++i) e.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(i + 1));
    e.emplace_back(static_cast<Vertex>(n - 1), 0);
    return FiniteSystem(FiniteRelation(static_cast<Vertex>(n), std::move(e)));
}

FiniteSystem dumbbell(const DumbbellShape& shape) {
    shape.validate();
    const long n = shape.n_in, l = shape.l, m = shape.m_out;
    const long v = n + l + m - 1;
    std::vector<Edge> e;
    e.reserve(v + 1);
    for (long i = 1; i <= v - 1; ++i)
        e.emplace_back(static_cast<Vertex>(i - 1), static_cast<Vertex>(i));
    e.emplace_back(static_cast<Vertex>(n - 1), 0);             // close the in-loop
    e.emplace_back(static_cast<Vertex>(v - 1), static_cast<Vertex>(n + l - 1)); // close the out-loop
    return FiniteSystem(FiniteRelation(static_cast<Vertex>(v), std::move(e)));
}

FiniteSystem wedge(long n, long m) { return dumbbell({n, 0, m}); }

FiniteSystem pointed_loop(long m) { return dumbbell({1, 0, m}); }

FiniteSystem parse_shape(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) fail(errc::argument, "shape literal needs kind:params, got " + text);
    std::string kind = text.substr(0, colon);
    std::vector<long> nums;
    std::size_t pos = colon + 1;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            nums.push_back(std::stol(tok));
        } catch (...) {
            fail(errc::argument, "bad number in shape literal: " + tok);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (kind == "loop" && nums.size() == 1) return loop(nums[0]);
    if (kind == "dumbbell" && nums.size() == 3) return dumbbell({nums[0], nums[1], nums[2]});
    if (kind == "wedge" && nums.size() == 2) return wedge(nums[0], nums[1]);
    if (kind == "pointed" && nums.size() == 1) return pointed_loop(nums[0]);
    fail(errc::argument, "unknown shape literal: " + text);
}

DumbbellMapResult canonical_dumbbell_map(const DumbbellShape& src, const DumbbellShape& dst,
                                         long i, long j) {
    src.validate();
    dst.validate();
    if (dst.l < 1) fail(errc::argument, "canonical_dumbbell_map: target path length must be >= 1");
    const long n = src.n_in, l = src.l, m = src.m_out;
    const long n1 = dst.n_in, l1 = dst.l, m1 = dst.m_out;
    if (i < n || i > n + l) fail(errc::argument, "vertex i is not on the source connecting path");
    if (j < n1 || j > n1 + l1) fail(errc::argument, "vertex j is not on the target connecting path");

    DumbbellMapResult out;
    if (n % n1 != 0) {
        out.certificate = "in-loop length " + std::to_string(n1) + " does not divide " + std::to_string(n);
        return out;
    }
    if (m % m1 != 0) {
        out.certificate = "out-loop length " + std::to_string(m1) + " does not divide " + std::to_string(m);
        return out;
    }
    if (l1 > l) {
        out.certificate = "target path longer than source path";
        return out;
    }
    if (i - n < j - n1) {
        out.certificate = "i - N >= j - N1 fails";
        return out;
    }
    if (n + l - i < n1 + l1 - j) {
        out.certificate = "N + L - i >= N1 + L1 - j fails";
        return out;
    }

    auto inmap = [&](long t) { return ((t - 1) % n1 + n1) % n1 + 1; };
    auto outmap = [&](long t) { return n1 + l1 + ((t - (n1 + l1)) % m1 + m1) % m1; };
    std::vector<Vertex> table(static_cast<std::size_t>(n + l + m - 1));
    for (long x = 1; x <= n + l + m - 1; ++x) {
        long y = j + x - i;
        long p;
        if (x <= n) {
            p = inmap(y);
        } else if (x < n + l) {
            p = y < n1 ? inmap(y) : (y <= n1 + l1 ? y : outmap(y));
        } else {
            p = outmap(y);
        }
        table[static_cast<std::size_t>(x - 1)] = static_cast<Vertex>(p - 1);
    }
    out.map = SystemMap(dumbbell(src), dumbbell(dst), std::move(table));
    return out;
}

namespace {

bool is_transitive(const FiniteSystem& s) {
    auto bs = basic_sets(s.rel());
    return bs.size() == 1 && static_cast<Vertex>(bs[0].size()) == s.size();
}

// Closed edge-covering walk from the lowest-index vertex: greedy unused
// lowest-index out-edges with shortest-path detours to uncovered edges.
std::vector<Vertex> covering_walk(const FiniteSystem& s) {
    Adjacency adj(s.rel());
    const auto& edges = s.edges();
    auto edge_index = [&](Vertex a, Vertex b) {
        auto it = std::lower_bound(edges.begin(), edges.end(), Edge{a, b});
        return static_cast<std::size_t>(it - edges.begin());
    };
    std::vector<char> used(edges.size(), 0);
    std::size_t remaining = edges.size();
    std::vector<Vertex> walk{0};

    auto bfs_path = [&](Vertex from, auto want) {
        // shortest path with lexicographic tie-break by construction order
        std::vector<Vertex> parent(s.size(), -1);
        std::vector<Vertex> queue{from};
        std::vector<char> seen(s.size(), 0);
        seen[from] = 1;
        Vertex goal = -1;
        if (want(from)) goal = from;
        for (std::size_t qi = 0; qi < queue.size() && goal == -1; ++qi) {
            for (Vertex w : adj.out(queue[qi])) {
                if (seen[w]) continue;
                seen[w] = 1;
                parent[w] = queue[qi];
                if (want(w)) {
                    goal = w;
                    break;
                }
                queue.push_back(w);
            }
        }
        if (goal == -1) fail(errc::internal, "covering_walk: detour target unreachable");
        std::vector<Vertex> path;
        for (Vertex v = goal; v != from; v = parent[v]) path.push_back(v);
        std::reverse(path.begin(), path.end());
        return path; // empty when goal == from
    };

    while (true) {
        Vertex at = walk.back();
        Vertex next = -1;
        for (Vertex w : adj.out(at)) {
            if (!used[edge_index(at, w)]) {
                next = w;
                break;
            }
        }
        if (next != -1) {
            used[edge_index(at, next)] = 1;
            --remaining;
            walk.push_back(next);
            continue;
        }
        if (remaining > 0) {
            // detour to the source of the least uncovered edge
            Vertex target = -1;
            for (std::size_t ei = 0; ei < edges.size(); ++ei)
                if (!used[ei]) {
                    target = edges[ei].first;
                    break;
                }
            for (Vertex v : bfs_path(at, [&](Vertex v) { return v == target; })) walk.push_back(v);
            continue;
        }
        if (at == 0) break;
        for (Vertex v : bfs_path(at, [&](Vertex v) { return v == 0; })) walk.push_back(v);
        break;
    }
    return walk; // starts and ends at vertex 0
}

} // namespace

std::pair<std::shared_ptr<const FiniteSystem>, SystemMap>
loop_cover(std::shared_ptr<const FiniteSystem> s) {
    if (!is_transitive(*s)) fail(errc::precondition, "loop_cover needs a transitive system");
    std::vector<Vertex> walk = covering_walk(*s);
    const long len = static_cast<long>(walk.size()) - 1;
    std::vector<Vertex> table(walk.begin(), walk.end() - 1);
    auto cover = std::make_shared<const FiniteSystem>(loop(len));
    return {cover, SystemMap(cover, std::move(s), std::move(table))};
}

DumbbellCover dumbbell_cover(std::shared_ptr<const FiniteSystem> s) {
    Adjacency adj(s->rel());
    std::vector<DumbbellShape> shapes;
    std::vector<std::vector<Vertex>> tables;
    std::vector<std::pair<DumbbellShape, std::vector<Vertex>>> seen;

    for (auto [ea, eb] : s->edges()) {
        std::vector<Vertex> w{ea, eb};
        // backward: prepend least predecessors until the front vertex repeats
        while (std::count(w.begin(), w.end(), w.front()) == 1) w.insert(w.begin(), adj.in(w.front())[0]);
        long n = 0;
        for (std::size_t t = 1; t < w.size(); ++t)
            if (w[t] == w.front()) {
                n = static_cast<long>(t);
                break;
            }
        // forward: append least successors until the tail closes at or after
        // the in-loop end
        auto tail_closes = [&]() {
            for (std::size_t q = w.size() - 1; q-- > 0;)
                if (w[q] == w.back() && static_cast<long>(q) >= n - 1) return static_cast<long>(q);
            return -1L;
        };
        long q = tail_closes();
        while (q < 0) {
            w.push_back(adj.out(w.back())[0]);
            q = tail_closes();
        }
        const long sz = static_cast<long>(w.size());
        DumbbellShape shape{n, q - n + 1, sz - 1 - q};
        std::vector<Vertex> table(w.begin(), w.end() - 1);
        if (std::find(seen.begin(), seen.end(), std::make_pair(shape, table)) == seen.end()) {
            seen.emplace_back(shape, table);
            shapes.push_back(shape);
            tables.push_back(std::move(table));
        }
    }

    FiniteRelation u = dumbbell(shapes[0]).rel();
    std::vector<Vertex> big(tables[0]);
    for (std::size_t i = 1; i < shapes.size(); ++i) {
        u = disjoint_union(u, dumbbell(shapes[i]).rel());
        big.insert(big.end(), tables[i].begin(), tables[i].end());
    }
    auto cover = std::make_shared<const FiniteSystem>(FiniteSystem(std::move(u)));
    SystemMap onto(cover, std::move(s), std::move(big));
    return DumbbellCover{std::move(shapes), std::move(cover), std::move(onto)};
}

std::pair<std::shared_ptr<const FiniteSystem>, SystemMap>
loop_union_cover(std::shared_ptr<const FiniteSystem> s) {
    auto sets = basic_sets(s->rel());
    std::vector<Vertex> which(s->size(), -1);
    for (std::size_t b = 0; b < sets.size(); ++b)
        for (Vertex v : sets[b]) which[v] = static_cast<Vertex>(b);
    for (Vertex v = 0; v < s->size(); ++v)
        if (which[v] == -1) fail(errc::precondition, "loop_union_cover needs a recurrent system");
    for (auto [a, b] : s->edges())
        if (which[a] != which[b])
            fail(errc::precondition, "edge (" + s->rel().label(a) + "," + s->rel().label(b) +
                                         ") leaves its basic set; no disjoint-loop cover exists");

    // one covering walk per basic set, all lifted to the lcm of the lengths
    std::vector<std::vector<Vertex>> walks;
    long lcm = 1;
    for (const auto& bs : sets) {
        std::vector<Vertex> back(bs.begin(), bs.end());
        std::vector<Vertex> pos(s->size(), -1);
        for (std::size_t t = 0; t < bs.size(); ++t) pos[bs[t]] = static_cast<Vertex>(t);
        std::vector<Edge> e;
        for (auto [a, b] : s->edges())
            if (which[a] == which[bs[0]] && which[b] == which[bs[0]]) e.emplace_back(pos[a], pos[b]);
        FiniteSystem restricted{FiniteRelation(static_cast<Vertex>(bs.size()), std::move(e))};
        std::vector<Vertex> wk = covering_walk(restricted);
        for (auto& v : wk) v = back[v];
        walks.push_back(std::move(wk));
        lcm = std::lcm(lcm, static_cast<long>(walks.back().size()) - 1);
    }

    FiniteRelation u = loop(lcm).rel();
    for (std::size_t i = 1; i < walks.size(); ++i) u = disjoint_union(u, loop(lcm).rel());
    std::vector<Vertex> table;
    table.reserve(static_cast<std::size_t>(lcm) * walks.size());
    for (const auto& wk : walks) {
        long len = static_cast<long>(wk.size()) - 1;
        for (long t = 0; t < lcm; ++t) table.push_back(wk[static_cast<std::size_t>(t % len)]);
    }
    auto cover = std::make_shared<const FiniteSystem>(FiniteSystem(std::move(u)));
    return {cover, SystemMap(cover, std::move(s), std::move(table))};
}

MixtureBound mixture_bound(long m, long n) {
    if (m < 1 || n < 1) fail(errc::argument, "mixture_bound needs positive integers");
    if (std::gcd(m, n) != 1) fail(errc::argument, "mixture_bound needs a coprime pair");
    MixtureBound out;
    for (long x = 0;; ++x) {
        long num = x * m - 1;
        if (num >= 0 && num % n == 0) {
            out.x = x;
            out.y = num / n;
            break;
        }
    }
    out.paper_bound = m + (out.y * n + 1) * n;
    auto representable = [&](long k) {
        for (long b = 1; b * n < k; ++b)
            if ((k - b * n) % m == 0) return true;
        return false;
    };
    long last_bad = 0;
    for (long k = 1; k <= out.paper_bound; ++k)
        if (!representable(k)) last_bad = k;
    if (last_bad == out.paper_bound)
        fail(errc::internal, "mixture bound is not sound for " + std::to_string(m) + "," +
                                 std::to_string(n));
    out.exact_threshold = last_bad + 1;
    return out;
}

namespace {

// exact-length path between two vertices, lexicographically least
std::vector<Vertex> exact_path(const FiniteSystem& s, Vertex from, Vertex to, long len) {
    Adjacency adj(s.rel());
    // feasible[t] = vertices with a length-t path into `to`
    std::vector<std::vector<char>> feasible(static_cast<std::size_t>(len) + 1,
                                            std::vector<char>(s.size(), 0));
    feasible[0][to] = 1;
    for (long t = 1; t <= len; ++t)
        for (Vertex v = 0; v < s.size(); ++v) {
            for (Vertex w : adj.out(v))
                if (feasible[static_cast<std::size_t>(t - 1)][w]) {
                    feasible[static_cast<std::size_t>(t)][v] = 1;
                    break;
                }
        }
    if (!feasible[static_cast<std::size_t>(len)][from])
        fail(errc::internal, "exact_path: no path of requested length");
    std::vector<Vertex> path{from};
    Vertex at = from;
    for (long t = len; t > 0; --t) {
        for (Vertex w : adj.out(at))
            if (feasible[static_cast<std::size_t>(t - 1)][w]) {
                path.push_back(w);
                at = w;
                break;
            }
    }
    return path;
}

} // namespace

WedgeThreshold wedge_mixing_threshold(const FiniteSystem& s) {
    PropertyReport rep = classify(s);
    if (!rep.mixing) fail(errc::precondition, "wedge_mixing_threshold needs a mixing system");
    WedgeThreshold t;
    t.power_full_from = *rep.mixing_exponent;
    t.base = 0;
    t.cover_walk = covering_walk(s);
    t.cover_length = static_cast<long>(t.cover_walk.size()) - 1;
    t.k = t.power_full_from + t.cover_length;
    return t;
}

std::pair<std::shared_ptr<const FiniteSystem>, SystemMap>
wedge_factor_from_threshold(std::shared_ptr<const FiniteSystem> s, const WedgeThreshold& t, long n,
                            long m) {
    if (n < t.k || m < t.k)
        fail(errc::argument, "wedge arms must both be >= threshold " + std::to_string(t.k));
    auto arm_walk = [&](long len) {
        std::vector<Vertex> walk = t.cover_walk;
        std::vector<Vertex> filler = exact_path(*s, t.base, t.base, len - t.cover_length);
        walk.insert(walk.end(), filler.begin() + 1, filler.end());
        return walk;
    };
    std::vector<Vertex> wn = arm_walk(n), wm = arm_walk(m);
    // wedge point is position N; both arms are anchored there
    std::vector<Vertex> table(static_cast<std::size_t>(n + m - 1));
    for (long p = 1; p <= n - 1; ++p) table[static_cast<std::size_t>(p - 1)] = wn[static_cast<std::size_t>(p)];
    for (long u = 0; u <= m - 1; ++u)
        table[static_cast<std::size_t>(n + u - 1)] = wm[static_cast<std::size_t>(u)];
    auto w = std::make_shared<const FiniteSystem>(wedge(n, m));
    return {w, SystemMap(w, std::move(s), std::move(table))};
}

long wedge_threshold_probe(const FiniteSystem& s, long cap) {
    const std::size_t ec = s.edges().size();
    if (ec > 20) fail(errc::resource, "wedge_threshold_probe: more than 20 edges");
    if (cap < 1 || cap > 64) fail(errc::argument, "wedge_threshold_probe: cap must be in [1,64]");
    Adjacency adj(s.rel());
    const auto& edges = s.edges();
    auto edge_index = [&](Vertex a, Vertex b) {
        auto it = std::lower_bound(edges.begin(), edges.end(), Edge{a, b});
        return static_cast<std::uint32_t>(it - edges.begin());
    };
    const std::uint32_t fullmask = (ec == 32) ? ~0u : ((1u << ec) - 1);
    // closed_masks[v][t] = coverage masks of closed t-walks at v
    std::vector<std::vector<std::vector<std::uint32_t>>> closed(
        s.size(), std::vector<std::vector<std::uint32_t>>(static_cast<std::size_t>(cap) + 1));
    for (Vertex v = 0; v < s.size(); ++v) {
        std::vector<std::vector<std::uint32_t>> states(s.size()); // masks per end vertex
        states[v] = {0};
        for (long t = 1; t <= cap; ++t) {
            std::vector<std::vector<std::uint32_t>> next(s.size());
            for (Vertex x = 0; x < s.size(); ++x)
                for (std::uint32_t mask : states[x])
                    for (Vertex y : adj.out(x)) {
                        std::uint32_t nm = mask | (1u << edge_index(x, y));
                        auto& bucket = next[y];
                        if (std::find(bucket.begin(), bucket.end(), nm) == bucket.end())
                            bucket.push_back(nm);
                    }
            states.swap(next);
            closed[v][static_cast<std::size_t>(t)] = states[v];
        }
    }
    auto wedge_ok = [&](long a, long b) {
        for (Vertex v = 0; v < s.size(); ++v)
            for (std::uint32_t ma : closed[v][static_cast<std::size_t>(a)])
                for (std::uint32_t mb : closed[v][static_cast<std::size_t>(b)])
                    if ((ma | mb) == fullmask) return true;
        return false;
    };
    for (long k = 1; k <= cap; ++k) {
        bool all = true;
        for (long a = k; a <= cap && all; ++a)
            for (long b = a; b <= cap && all; ++b)
                if (!wedge_ok(a, b)) all = false;
        if (all) return k;
    }
    fail(errc::resource, "wedge_threshold_probe: no threshold within cap " + std::to_string(cap));
}

std::vector<std::pair<long, long>> wedge_pair_sequence(long a, long b, long c, long d, int depth) {
    if (a < 1 || b < 1 || c < 1 || d < 1)
        fail(errc::argument, "wedge_pair_sequence: matrix entries must be positive");
    long det = a * d - b * c;
    if (det != 1 && det != -1) fail(errc::argument, "wedge_pair_sequence: matrix must be unimodular");
    if (depth < 1) fail(errc::argument, "wedge_pair_sequence: depth must be positive");
    std::vector<std::pair<long, long>> out;
    long m = 1, n = 1;
    out.emplace_back(m, n);
    for (int k = 1; k < depth; ++k) {
        long m2 = a * m + b * n;
        long n2 = c * m + d * n;
        m = m2;
        n = n2;
        if (std::gcd(m, n) != 1) fail(errc::internal, "wedge pair lost coprimality");
        out.emplace_back(m, n);
    }
    return out;
}

std::optional<SystemMap> wedge_representation_of_nonperiodic(std::shared_ptr<const FiniteSystem> s,
                                                             long m) {
    if (m < 1) fail(errc::argument, "pointed-loop length must be positive");
    Adjacency adj(s->rel());
    for (Vertex v = 0; v < s->size(); ++v)
        if (adj.out(v).size() != 1)
            fail(errc::precondition, "needs a permutation system (vertex " + s->rel().label(v) +
                                         " has out-degree " + std::to_string(adj.out(v).size()) + ")");
    // locate the least vertex on a cycle of length >= m + 2
    std::vector<long> cycle_len(s->size(), 0);
    std::vector<char> seen(s->size(), 0);
    for (Vertex v = 0; v < s->size(); ++v) {
        if (seen[v]) continue;
        std::vector<Vertex> orbit{v};
        seen[v] = 1;
        Vertex w = adj.out(v)[0];
        while (!seen[w]) {
            seen[w] = 1;
            orbit.push_back(w);
            w = adj.out(w)[0];
        }
        if (w == v) // permutation: orbits are pure cycles
            for (Vertex u : orbit) cycle_len[u] = static_cast<long>(orbit.size());
    }
    Vertex x = -1;
    for (Vertex v = 0; v < s->size(); ++v)
        if (cycle_len[v] >= m + 2) {
            x = v;
            break;
        }
    if (x == -1) return std::nullopt;
    // orbit segment f(x)..f^{m-1}(x) goes to positions 2..m, the rest to 1
    std::vector<Vertex> table(s->size(), 0);
    Vertex at = x;
    for (long t = 1; t <= m - 1; ++t) {
        at = adj.out(at)[0];
        table[at] = static_cast<Vertex>(t);
    }
    auto target = std::make_shared<const FiniteSystem>(pointed_loop(m));
    return SystemMap(std::move(s), target, std::move(table));
}

} // namespace findyn
